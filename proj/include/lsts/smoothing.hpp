#ifndef LSTS_SMOOTHING_HPP
#define LSTS_SMOOTHING_HPP

#include <vector>

#include "lsts/kernel.hpp"

namespace lsts {

/// Kernel-weighted local linear fit of a series observed at design points
/// i/n, i = 1..m, evaluated on an arbitrary grid of points in rescaled time.
struct LocalLinearFit {
    std::vector<double> grid;         ///< evaluation points t
    std::vector<double> level;        ///< fitted intercept at each grid point
    std::vector<double> slope;        ///< fitted derivative at each grid point
    double bandwidth = 0.0;
    std::vector<double> hat_diagonal; ///< smoother weight on y_i at t=i/n, i=1..m

    /// Level at a grid point; throws GridMismatch if t is not on the grid.
    double level_at(double t) const;
};

struct BandwidthSearch {
    std::vector<double> candidates;
    std::vector<double> scores;
    double selected = 0.0;
};

/// Local linear regression of y_1..y_m (design points i/n) with bandwidth tau.
///
/// Solves the weighted least squares problem at each grid point through the
/// equivalent-kernel closed form; identical to solving the 2x2 normal
/// equations pointwise. Throws DegenerateWindow when fewer than two design
/// points carry positive kernel weight at some grid point.
LocalLinearFit local_linear_fit(const std::vector<double>& y, int n,
                                const std::vector<double>& grid, double tau,
                                const KernelSpec& kernel);

/// Diagonal of the local linear smoother matrix: the weight the fit at i/n
/// places on observation i, for i = 1..m.
std::vector<double> hat_diagonal(int m, int n, double tau, const KernelSpec& kernel);

/// Generalized cross validation over a candidate bandwidth grid:
/// score(tau) = n^{-1} sum_i (y_i - muhat(i/n,tau))^2 / (1 - sum_i T_{tau,ii}/n)^2.
/// Candidates whose fit degenerates or whose denominator vanishes score +inf;
/// ties break toward the smallest bandwidth. Throws AllDegenerate when no
/// candidate yields a finite score.
BandwidthSearch gcv_select(const std::vector<double>& y, int n,
                           const std::vector<double>& candidates,
                           const KernelSpec& kernel);

/// Default candidate grid: 20 log-spaced bandwidths in [lo, 0.5] with
/// lo = max(0.6 n^{-1/5}, 4/m). The scale-dependent floor keeps the search
/// away from the degenerate small-bandwidth region, where the GCV objective
/// is uninformative under serial dependence.
std::vector<double> default_bandwidth_grid(int m, int n);

/// Design grid {1/n, ..., m/n}.
std::vector<double> design_grid(int m, int n);

} // namespace lsts

#endif
