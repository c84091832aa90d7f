#ifndef LSTS_AUTOCOV_HPP
#define LSTS_AUTOCOV_HPP

#include <vector>

#include "lsts/kernel.hpp"
#include "lsts/smoothing.hpp"

namespace lsts {

/// Residuals from the local linear trend fit on a window 1..m of a design
/// with scale n. Access outside the window returns exactly zero.
class ResidualSeries {
  public:
    ResidualSeries(std::vector<double> values, int n);

    int window() const { return static_cast<int>(values_.size()); }
    int scale() const { return n_; }

    /// 1-based access with zero padding outside [1, window()].
    double at(int i) const {
        if (i < 1 || i > window()) return 0.0;
        return values_[static_cast<std::size_t>(i - 1)];
    }

    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> values_;
    int n_;
};

/// eps_i = y_i - muhat(i/n). The fit grid must cover every design point.
ResidualSeries residuals(const std::vector<double>& y, const LocalLinearFit& fit, int n);

enum class ProductShift { even, plus, minus, asym };

/// Lagged product series over i = 1..m with zero padding:
///   even : eps_{i-k/2}   * eps_{i+k/2}       (k even)
///   plus : eps_{i-(k-1)/2} * eps_{i+(k+1)/2} (k odd)
///   minus: eps_{i-(k+1)/2} * eps_{i+(k-1)/2} (k odd)
///   asym : eps_i * eps_{i+k}
std::vector<double> lagged_products(const ResidualSeries& res, int k, ProductShift which);

/// Estimated autocovariance curve for one lag, sampled on a grid.
struct LagCurve {
    int lag = 0;
    std::vector<double> grid;
    std::vector<double> values;
    double bandwidth = 0.0;
    std::vector<double> plus_values;  ///< odd lags: the "+" component fit
    std::vector<double> minus_values; ///< odd lags: the "-" component fit

    /// Value at a grid point; throws MissingMidpoint if t was not requested.
    double value_at(double t) const;
};

/// Boundary rule for curve evaluation near the window edges.
///   constant_extension: pull evaluation points back to [b/2, m/n - b/2];
///     within half a bandwidth of the boundary the local line is fitted on a
///     mostly one-sided window and its extrapolated intercept is unstable,
///     which would otherwise dominate the operator-norm error of an assembled
///     matrix.
///   none: evaluate the fit exactly where asked. Used by the predictor, whose
///     eigenvalue-floored solve damps boundary noise while a constant
///     extension would bias the window-end values that anchor the forecast.
enum class CurveBoundary { constant_extension, none };

/// Local linear estimate of gamma_k(t) on the requested grid with bandwidth b.
/// Even lags fit the symmetric product series; odd lags average the "+" and
/// "-" shifted fits pointwise.
LagCurve autocov_at(const ResidualSeries& res, int k, std::vector<double> grid,
                    double b, const KernelSpec& kernel,
                    CurveBoundary boundary = CurveBoundary::constant_extension);

/// GCV bandwidth for the lag-k product series; odd lags use the "+" shift.
BandwidthSearch autocov_bandwidth(const ResidualSeries& res, int k,
                                  const std::vector<double>& candidates,
                                  const KernelSpec& kernel);

/// Midpoints (2i+k)/(2n), i = 1..dim-k, needed by the banded assembly of an
/// order-dim matrix at lag k.
std::vector<double> assembly_midpoints(int dim, int n, int k);

} // namespace lsts

#endif
