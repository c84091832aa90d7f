#ifndef LSTS_COVMATRIX_HPP
#define LSTS_COVMATRIX_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "lsts/autocov.hpp"

namespace lsts {

enum class CovFlavor { stationary, local, tapered, pd_corrected };

const char* to_string(CovFlavor flavor);

/// Symmetric covariance matrix estimate stored by diagonals within a band;
/// the pd_corrected flavor is dense-backed (eigenvalue flooring destroys
/// bandedness).
class BandedCovariance {
  public:
    int dim() const { return dim_; }
    int half_width() const { return half_width_; }
    CovFlavor flavor() const { return flavor_; }

    /// 0-based symmetric access; zero outside the effective band.
    double entry(int i, int j) const;

    Eigen::MatrixXd to_dense() const;

    /// Sparse triplet rows "i,j,value" (1-based, upper triangle) for banded
    /// flavors; all entries row-major for the dense-backed flavor.
    void write_csv(std::ostream& out) const;

    static BandedCovariance from_diagonals(std::vector<std::vector<double>> diagonals,
                                           int dim, CovFlavor flavor);
    static BandedCovariance from_dense(Eigen::MatrixXd dense, CovFlavor flavor);

  private:
    int dim_ = 0;
    int half_width_ = 0;
    CovFlavor flavor_ = CovFlavor::stationary;
    std::vector<std::vector<double>> diagonals_; ///< diagonals_[d][i] = entry(i, i+d)
    Eigen::MatrixXd dense_;
    bool dense_backed_ = false;
};

/// Banded Toeplitz estimate from residual sample autocovariances:
/// entry(i,j) = (N-d)^{-1} sum_s eps_s eps_{s+d}, d = |i-j| <= half_width,
/// with N = res.window().
BandedCovariance banded_stationary(const ResidualSeries& res, int half_width);

/// Banded locally stationary estimate: entry(i,j) = gamma_{|i-j|}((i+j)/(2n))
/// for |i-j| <= half_width (1-based i,j). curves[k] supplies lag k.
BandedCovariance banded_local(const std::vector<LagCurve>& curves, int dim, int n,
                              int half_width);

/// Taper weight: 1 for |x|<1, 2-|x| on [1,2], 0 beyond.
double taper_weight(double x);

/// Tapered variant: entry(i,j) = taper(|i-j|/half_width) * gamma_{|i-j|}(midpoint).
/// Needs curves up to lag 2*half_width; identical to banded_local within the
/// band and zero at |i-j| >= 2*half_width.
BandedCovariance taper_local(const std::vector<LagCurve>& curves, int dim, int n,
                             int half_width);

/// Eigenvalue floor for the positive-definite correction:
/// floor = multiplier * int_0^{m/n} gammahat_0 / m^beta.
struct SpectralFloorParams {
    double beta = 0.5;
    double multiplier = 10.0;
    double gamma0_integral = 0.0;
    int window = 0;

    double floor() const;
};

/// Trapezoid integral of the lag-0 curve over [0, m/n]; the curve grid must
/// cover that range.
SpectralFloorParams make_floor_params(const LagCurve& gamma0, int m, int n,
                                      double beta = 0.5, double multiplier = 10.0);

/// Replace the eigenvalues of A by max(eigenvalue, floor), keeping the
/// eigenvectors; result is symmetric positive definite and dense-backed.
BandedCovariance pd_correct(const BandedCovariance& A, const SpectralFloorParams& params);

/// Operator norm (largest singular value). Symmetric inputs use a dense
/// symmetric eigensolve up to dimension 2000 and power iteration beyond;
/// non-symmetric inputs go through the SVD.
double operator_norm(const Eigen::MatrixXd& A);

} // namespace lsts

#endif
