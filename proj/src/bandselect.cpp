#include "lsts/bandselect.hpp"

#include <algorithm>
#include <cmath>

#include "lsts/errors.hpp"

namespace lsts {

namespace {

// Prefix sums of the asymmetric product series q_i = eps_i eps_{i+k}, i = 1..m,
// with zero padding outside.
struct PartialSums {
    std::vector<double> prefix; // prefix[i] = q_1 + ... + q_i
    int m;

    double range(int r0, int r1) const {
        r0 = std::max(r0, 1);
        r1 = std::min(r1, m);
        if (r1 < r0) return 0.0;
        return prefix[r1] - prefix[r0 - 1];
    }
};

PartialSums partial_sums(const std::vector<double>& q) {
    PartialSums s;
    s.m = static_cast<int>(q.size());
    s.prefix.resize(q.size() + 1);
    s.prefix[0] = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s.prefix[i + 1] = s.prefix[i] + q[i];
    return s;
}

double eval_g2(const std::vector<double>& contrib, int n, double t, double bn,
               const KernelSpec& kernel) {
    const int j0 = std::max(1, static_cast<int>(std::ceil((t - bn) * n - 1e-12)));
    const int j1 = std::min(n, static_cast<int>(std::floor((t + bn) * n + 1e-12)));
    double num = 0.0, den = 0.0;
    for (int j = j0; j <= j1; ++j) {
        const double w = kernel((static_cast<double>(j) / n - t) / bn);
        den += w;
        num += w * contrib[j - 1];
    }
    if (den <= 0.0) throw DegenerateWindow("no kernel weight for ghat^2 at t=" + std::to_string(t));
    return num / den;
}

} // namespace

LongRunVarianceCurve longrun_variance(const ResidualSeries& res, int k, int block,
                                      double weight_bandwidth, const KernelSpec& kernel,
                                      const std::vector<double>& grid) {
    const int m = res.window();
    const int n = res.scale();
    if (block < 2) throw DomainError("block size must be at least 2");
    if (block > m / 4) throw BlockTooLarge("block " + std::to_string(block) +
                                           " exceeds m/4 = " + std::to_string(m / 4));

    const auto q = lagged_products(res, k, ProductShift::asym);
    const auto sums = partial_sums(q);

    // contrib[j-1] = b * Delta_{j,b}^2 / 2
    std::vector<double> contrib(static_cast<std::size_t>(n), 0.0);
    for (int j = 1; j <= n; ++j) {
        const double delta = (sums.range(j - block + 1, j) - sums.range(j + 1, j + block)) / block;
        contrib[j - 1] = 0.5 * block * delta * delta;
    }

    LongRunVarianceCurve curve;
    curve.lag = k;
    curve.block = block;
    curve.lower_t = static_cast<double>(block) / n;
    curve.upper_t = static_cast<double>(m - block) / n;
    curve.grid = grid;
    curve.values.reserve(grid.size());
    for (double t : grid) {
        const double tc = std::clamp(t, curve.lower_t, curve.upper_t);
        curve.values.push_back(eval_g2(contrib, n, tc, weight_bandwidth, kernel));
    }
    return curve;
}

double sigma_hat(const LongRunVarianceCurve& curve, int m, int n, int k) {
    const double upper = std::min(static_cast<double>(m) / n, static_cast<double>(n - k) / n);
    if (curve.grid.empty() || curve.grid.front() > 1e-12 || curve.grid.back() < upper - 1e-12)
        throw GridMismatch("curve grid does not cover the integration range [0, " +
                           std::to_string(upper) + "]");
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < curve.grid.size(); ++i) {
        const double t0 = curve.grid[i];
        const double t1 = std::min(curve.grid[i + 1], upper);
        if (t1 <= t0) break;
        // linear interpolation of the right endpoint when upper cuts a cell
        double v1 = curve.values[i + 1];
        if (t1 < curve.grid[i + 1] - 1e-15) {
            const double w = (t1 - t0) / (curve.grid[i + 1] - t0);
            v1 = curve.values[i] + w * (curve.values[i + 1] - curve.values[i]);
        }
        integral += 0.5 * (curve.values[i] + v1) * (t1 - t0);
    }
    return std::sqrt(std::max(integral, 0.0));
}

std::vector<double> integration_grid(int m, int n, int k) {
    const double upper = std::min(static_cast<double>(m) / n, static_cast<double>(n - k) / n);
    std::vector<double> grid;
    grid.push_back(0.0);
    for (int i = 1; i <= static_cast<int>(std::floor(upper * n + 1e-9)); ++i)
        grid.push_back(static_cast<double>(i) / n);
    if (grid.back() < upper - 1e-12) grid.push_back(upper);
    return grid;
}

int default_block(int m) { return static_cast<int>(std::ceil(2.0 * std::cbrt(static_cast<double>(m)))); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile argument outside (0,1)");

    // Acklam's rational approximation, then one Newton step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Newton polish: F(x) - p over the density
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

BandSelection select_band(const ResidualSeries& res, int l0, int l1, double alpha,
                          const KernelSpec& kernel,
                          const std::vector<double>& b_candidates, int block) {
    const int m = res.window();
    const int n = res.scale();
    if (l0 < 1 || l0 > l1 || l1 >= m) throw DomainError("band search range invalid");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha outside (0,1)");
    if (block < 0) block = default_block(m);

    BandSelection sel;
    sel.l0 = l0;
    sel.l1 = l1;
    sel.alpha = alpha;
    sel.kappa = normal_quantile(0.5 * (1.0 + std::pow(1.0 - alpha, 1.0 / (l1 - l0 + 1))));
    sel.selected = l0 - 1;

    for (int l = l0; l <= l1; ++l) {
        const auto q = lagged_products(res, l, ProductShift::asym);
        double sum = 0.0;
        for (double v : q) sum += v;
        const double stat = std::fabs(sum) / std::sqrt(static_cast<double>(n));

        const double bn = gcv_select(q, n, b_candidates, kernel).selected;
        const auto curve = longrun_variance(res, l, block, bn, kernel, integration_grid(m, n, l));
        const double sig = sigma_hat(curve, m, n, l);

        sel.statistics.push_back(stat);
        sel.sigmas.push_back(sig);
        sel.weight_bandwidths.push_back(bn);
        if (sig > 0.0 && stat >= sel.kappa * sig) sel.selected = l;
    }
    return sel;
}

} // namespace lsts
