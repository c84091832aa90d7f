#include "lsts/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsts/errors.hpp"

namespace lsts {

namespace {

struct PointFit {
    double level;
    double slope;
};

// Weighted least squares of a line at point t. Raw kernel sums; the 1/(n*tau)
// normalization of the moment ratios cancels.
PointFit fit_point(const std::vector<double>& y, int n, double t, double tau,
                   const KernelSpec& kernel) {
    const int m = static_cast<int>(y.size());
    const int i0 = std::max(1, static_cast<int>(std::ceil((t - tau) * n - 1e-12)));
    const int i1 = std::min(m, static_cast<int>(std::floor((t + tau) * n + 1e-12)));
    double w0 = 0.0, w1 = 0.0, w2 = 0.0, r0 = 0.0, r1 = 0.0;
    int support = 0;
    for (int i = i0; i <= i1; ++i) {
        const double u = (static_cast<double>(i) / n - t) / tau;
        const double w = kernel(u);
        if (w <= 0.0) continue;
        ++support;
        const double wu = w * u;
        w0 += w;
        w1 += wu;
        w2 += wu * u;
        r0 += w * y[i - 1];
        r1 += wu * y[i - 1];
    }
    const double det = w0 * w2 - w1 * w1;
    if (support < 2 || det <= 0.0)
        throw DegenerateWindow("local linear fit needs two weighted design points at t=" +
                               std::to_string(t));
    return PointFit{(w2 * r0 - w1 * r1) / det, (w0 * r1 - w1 * r0) / (tau * det)};
}

// Weight placed on y_i by the fit at t = i/n, where the kernel argument of
// observation i is exactly zero.
double hat_entry(int m, int n, int i, double tau, const KernelSpec& kernel) {
    const double t = static_cast<double>(i) / n;
    const int i0 = std::max(1, static_cast<int>(std::ceil((t - tau) * n - 1e-12)));
    const int i1 = std::min(m, static_cast<int>(std::floor((t + tau) * n + 1e-12)));
    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    int support = 0;
    for (int s = i0; s <= i1; ++s) {
        const double u = (static_cast<double>(s) / n - t) / tau;
        const double w = kernel(u);
        if (w <= 0.0) continue;
        ++support;
        const double wu = w * u;
        w0 += w;
        w1 += wu;
        w2 += wu * u;
    }
    const double det = w0 * w2 - w1 * w1;
    if (support < 2 || det <= 0.0)
        throw DegenerateWindow("hat diagonal undefined at i=" + std::to_string(i));
    return kernel(0.0) * w2 / det;
}

} // namespace

double LocalLinearFit::level_at(double t) const {
    auto it = std::lower_bound(grid.begin(), grid.end(), t - 1e-12);
    if (it == grid.end() || std::fabs(*it - t) > 1e-10)
        throw GridMismatch("fit grid does not contain t=" + std::to_string(t));
    return level[static_cast<std::size_t>(it - grid.begin())];
}

LocalLinearFit local_linear_fit(const std::vector<double>& y, int n,
                                const std::vector<double>& grid, double tau,
                                const KernelSpec& kernel) {
    const int m = static_cast<int>(y.size());
    if (m < 2) throw DegenerateWindow("window needs at least two observations");
    if (tau <= 0.0) throw DomainError("bandwidth must be positive");

    LocalLinearFit fit;
    fit.grid = grid;
    fit.bandwidth = tau;
    fit.level.reserve(grid.size());
    fit.slope.reserve(grid.size());
    for (double t : grid) {
        const PointFit p = fit_point(y, n, t, tau, kernel);
        fit.level.push_back(p.level);
        fit.slope.push_back(p.slope);
    }
    fit.hat_diagonal = hat_diagonal(m, n, tau, kernel);
    return fit;
}

std::vector<double> hat_diagonal(int m, int n, double tau, const KernelSpec& kernel) {
    if (m < 2) throw DegenerateWindow("window needs at least two observations");
    if (tau <= 0.0) throw DomainError("bandwidth must be positive");
    std::vector<double> diag(m);
    for (int i = 1; i <= m; ++i) diag[i - 1] = hat_entry(m, n, i, tau, kernel);
    return diag;
}

BandwidthSearch gcv_select(const std::vector<double>& y, int n,
                           const std::vector<double>& candidates,
                           const KernelSpec& kernel) {
    const int m = static_cast<int>(y.size());
    const auto grid = design_grid(m, n);
    BandwidthSearch search;
    search.candidates = candidates;
    search.scores.assign(candidates.size(), std::numeric_limits<double>::infinity());

    for (std::size_t c = 0; c < candidates.size(); ++c) {
        try {
            const LocalLinearFit fit = local_linear_fit(y, n, grid, candidates[c], kernel);
            double rss = 0.0, trace = 0.0;
            for (int i = 0; i < m; ++i) {
                const double r = y[i] - fit.level[i];
                rss += r * r;
                trace += fit.hat_diagonal[i];
            }
            const double denom = 1.0 - trace / n;
            if (denom * denom > 0.0) search.scores[c] = (rss / n) / (denom * denom);
        } catch (const DegenerateWindow&) {
            // candidate stays at +inf
        }
    }

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (search.scores[c] < best) {
            best = search.scores[c];
            best_idx = c;
        }
    }
    if (best_idx == candidates.size())
        throw AllDegenerate("every bandwidth candidate failed the GCV fit");
    search.selected = candidates[best_idx];
    return search;
}

std::vector<double> default_bandwidth_grid(int m, int n) {
    const double lo = std::min(std::max(0.6 * std::pow(n, -0.2), 4.0 / m), 0.5);
    const double hi = 0.5;
    const int count = 20;
    std::vector<double> grid(count);
    if (lo >= hi) {
        grid.assign(1, hi);
        return grid;
    }
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) grid[i] = std::exp(std::log(lo) + step * i);
    grid.back() = hi;
    return grid;
}

std::vector<double> design_grid(int m, int n) {
    std::vector<double> grid(m);
    for (int i = 1; i <= m; ++i) grid[i - 1] = static_cast<double>(i) / n;
    return grid;
}

} // namespace lsts
