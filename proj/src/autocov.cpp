#include "lsts/autocov.hpp"

#include <algorithm>
#include <cmath>

#include "lsts/errors.hpp"

namespace lsts {

ResidualSeries::ResidualSeries(std::vector<double> values, int n)
    : values_(std::move(values)), n_(n) {
    if (n_ < static_cast<int>(values_.size()))
        throw LengthMismatch("design scale smaller than the residual window");
}

ResidualSeries residuals(const std::vector<double>& y, const LocalLinearFit& fit, int n) {
    const int m = static_cast<int>(y.size());
    std::vector<double> eps(m);
    for (int i = 1; i <= m; ++i) {
        double mu;
        try {
            mu = fit.level_at(static_cast<double>(i) / n);
        } catch (const GridMismatch&) {
            throw GridMismatch("fit grid does not cover design point i=" + std::to_string(i));
        }
        eps[i - 1] = y[i - 1] - mu;
    }
    return ResidualSeries(std::move(eps), n);
}

std::vector<double> lagged_products(const ResidualSeries& res, int k, ProductShift which) {
    const int m = res.window();
    std::vector<double> p(m);
    int back = 0, fwd = 0;
    switch (which) {
        case ProductShift::even:
            back = k / 2;
            fwd = k / 2;
            break;
        case ProductShift::plus:
            back = (k - 1) / 2;
            fwd = (k + 1) / 2;
            break;
        case ProductShift::minus:
            back = (k + 1) / 2;
            fwd = (k - 1) / 2;
            break;
        case ProductShift::asym:
            back = 0;
            fwd = k;
            break;
    }
    for (int i = 1; i <= m; ++i) p[i - 1] = res.at(i - back) * res.at(i + fwd);
    return p;
}

double LagCurve::value_at(double t) const {
    auto it = std::lower_bound(grid.begin(), grid.end(), t - 1e-12);
    if (it == grid.end() || std::fabs(*it - t) > 1e-10)
        throw MissingMidpoint("lag " + std::to_string(lag) +
                              " curve lacks evaluation point t=" + std::to_string(t));
    return values[static_cast<std::size_t>(it - grid.begin())];
}

LagCurve autocov_at(const ResidualSeries& res, int k, std::vector<double> grid,
                    double b, const KernelSpec& kernel, CurveBoundary boundary) {
    const int m = res.window();
    const int n = res.scale();
    if (k < 0 || k >= n) throw DomainError("lag outside [0, n)");
    if (b <= 0.0 || b >= 1.0) throw DomainError("curve bandwidth outside (0,1)");

    std::vector<double> eval = grid;
    if (boundary == CurveBoundary::constant_extension) {
        double lo = 0.5 * b, hi = static_cast<double>(m) / n - 0.5 * b;
        if (lo > hi) lo = hi = 0.5 * m / n;
        std::transform(grid.begin(), grid.end(), eval.begin(),
                       [lo, hi](double t) { return std::clamp(t, lo, hi); });
    }

    LagCurve curve;
    curve.lag = k;
    curve.grid = std::move(grid);
    curve.bandwidth = b;
    if (k % 2 == 0) {
        const auto p = lagged_products(res, k, ProductShift::even);
        curve.values = local_linear_fit(p, n, eval, b, kernel).level;
    } else {
        const auto pp = lagged_products(res, k, ProductShift::plus);
        const auto pm = lagged_products(res, k, ProductShift::minus);
        curve.plus_values = local_linear_fit(pp, n, eval, b, kernel).level;
        curve.minus_values = local_linear_fit(pm, n, eval, b, kernel).level;
        curve.values.resize(curve.plus_values.size());
        for (std::size_t i = 0; i < curve.values.size(); ++i)
            curve.values[i] = 0.5 * (curve.plus_values[i] + curve.minus_values[i]);
    }
    return curve;
}

BandwidthSearch autocov_bandwidth(const ResidualSeries& res, int k,
                                  const std::vector<double>& candidates,
                                  const KernelSpec& kernel) {
    const auto p = lagged_products(res, k, k % 2 == 0 ? ProductShift::even : ProductShift::plus);
    return gcv_select(p, res.scale(), candidates, kernel);
}

std::vector<double> assembly_midpoints(int dim, int n, int k) {
    std::vector<double> mid;
    mid.reserve(static_cast<std::size_t>(std::max(0, dim - k)));
    for (int i = 1; i <= dim - k; ++i)
        mid.push_back(static_cast<double>(2 * i + k) / (2.0 * n));
    return mid;
}

} // namespace lsts
