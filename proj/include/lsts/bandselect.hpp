#ifndef LSTS_BANDSELECT_HPP
#define LSTS_BANDSELECT_HPP

#include <vector>

#include "lsts/autocov.hpp"
#include "lsts/kernel.hpp"

namespace lsts {

/// Long-run variance curve of the lag-k product process, estimated from
/// squared block-sum differences with kernel weights.
struct LongRunVarianceCurve {
    int lag = 0;
    int block = 0;
    std::vector<double> grid;
    std::vector<double> values;
    double lower_t = 0.0; ///< b/n; constant extension below
    double upper_t = 0.0; ///< (m-b)/n; constant extension above
};

/// ghat^2 on the requested grid. Weights are normalized kernel weights over
/// the full design 1..n; the curve is extended as a constant on [0, b/n) and
/// ((m-b)/n, m/n]. Requires 2 <= block <= m/4 (BlockTooLarge otherwise).
LongRunVarianceCurve longrun_variance(const ResidualSeries& res, int k, int block,
                                      double weight_bandwidth, const KernelSpec& kernel,
                                      const std::vector<double>& grid);

/// sigma_hat_k = sqrt of the trapezoid integral of ghat^2 over
/// [0, min(m/n, (n-k)/n)]. The curve grid must cover that range.
double sigma_hat(const LongRunVarianceCurve& curve, int m, int n, int k);

/// Inverse standard normal CDF, absolute error below 1e-9.
double normal_quantile(double p);

/// Grid {0, 1/n, ..., upper} for the sigma_hat integral at lag k.
std::vector<double> integration_grid(int m, int n, int k);

/// ceil(2 m^{1/3}); rate-optimal block scale for the difference statistics.
int default_block(int m);

struct BandSelection {
    int l0 = 0;
    int l1 = 0;
    double alpha = 0.0;
    double kappa = 0.0;                     ///< threshold multiplier kappa(alpha)
    std::vector<double> statistics;         ///< n^{-1/2}|sum_i eps_i eps_{i+l}|, l = l0..l1
    std::vector<double> sigmas;             ///< sigma_hat_l, l = l0..l1
    std::vector<double> weight_bandwidths;  ///< GCV bandwidth of the lag-l weights
    int selected = 0;                       ///< max exceeding lag, or l0-1
};

/// Data-driven band half-width: the largest l in [l0, l1] whose normalized
/// partial-sum statistic exceeds kappa(alpha) sigma_hat_l; l0-1 when the
/// exceedance set is empty. Lags with sigma_hat_l = 0 never exceed.
/// block < 0 selects default_block(m).
BandSelection select_band(const ResidualSeries& res, int l0, int l1, double alpha,
                          const KernelSpec& kernel,
                          const std::vector<double>& b_candidates, int block = -1);

} // namespace lsts

#endif
