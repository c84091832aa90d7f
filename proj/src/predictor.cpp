#include "lsts/predictor.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "lsts/bandselect.hpp"
#include "lsts/errors.hpp"

namespace lsts {

namespace {

std::vector<double> curve_grid_for_lag(int k, int m, int n, bool with_floor_grid) {
    std::set<double> pts;
    for (double t : assembly_midpoints(m, n, k)) pts.insert(t);
    if (k >= 1) pts.insert(static_cast<double>(2 * m - k + 1) / (2.0 * n)); // gamma vector point
    if (with_floor_grid)
        for (int i = 0; i <= m; ++i) pts.insert(static_cast<double>(i) / n);
    return std::vector<double>(pts.begin(), pts.end());
}

} // namespace

std::vector<double> gamma_vector(const std::vector<LagCurve>& curves, int m, int n,
                                 int band) {
    std::vector<double> g(static_cast<std::size_t>(m), 0.0);
    for (int u = 1; u <= m; ++u) {
        const int s = m + 1 - u;
        if (s < 1 || s > band) continue;
        if (s >= static_cast<int>(curves.size()) || curves[static_cast<std::size_t>(s)].lag != s)
            throw MissingMidpoint("no curve supplied for lag " + std::to_string(s));
        g[static_cast<std::size_t>(u - 1)] = curves[static_cast<std::size_t>(s)].value_at(
            static_cast<double>(2 * m - s + 1) / (2.0 * n));
    }
    return g;
}

PredictorCoefficients fit_coefficients(const std::vector<double>& y, int n,
                                       const PredictorConfig& config) {
    const int m = static_cast<int>(y.size());
    if (m < 10) throw DomainError("prediction window needs at least 10 observations");

    const auto tau_grid =
        config.tau_candidates.empty() ? default_bandwidth_grid(m, n) : config.tau_candidates;
    const auto b_grid =
        config.b_candidates.empty() ? default_bandwidth_grid(m, n) : config.b_candidates;

    const double tau = gcv_select(y, n, tau_grid, config.kernel).selected;
    const auto fit = local_linear_fit(y, n, design_grid(m, n), tau, config.kernel);
    const auto res = residuals(y, fit, n);

    const int l0 = config.l0 > 0 ? config.l0
                                 : static_cast<int>(std::ceil(std::log(static_cast<double>(m))));
    const int l1 = config.l1 > 0 ? config.l1 : 5 + l0;

    // residual energy at round-off scale: every later stage would fit noise of
    // the cancellation, so the predictor degenerates to trend extrapolation
    double y2 = 0.0, r2 = 0.0;
    for (int i = 0; i < m; ++i) {
        y2 += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        r2 += res.at(i + 1) * res.at(i + 1);
    }
    if (r2 <= 1e-20 * std::max(1.0, y2)) {
        PredictorCoefficients coeffs;
        coeffs.window = m;
        coeffs.band = l0 - 1;
        coeffs.tau = tau;
        coeffs.gamma_vector.assign(static_cast<std::size_t>(m), 0.0);
        coeffs.weights.assign(static_cast<std::size_t>(m), 0.0);
        coeffs.trend_at_window_end = fit.level[static_cast<std::size_t>(m - 1)];
        coeffs.intercept = coeffs.trend_at_window_end;
        return coeffs;
    }
    const auto band =
        select_band(res, l0, l1, config.alpha, config.kernel, b_grid, config.block);
    const int l_n = band.selected;

    // literal boundary evaluation: the floored solve tolerates edge noise, and
    // the window-end curve values are exactly what the forecast hinges on
    std::vector<LagCurve> curves;
    curves.reserve(static_cast<std::size_t>(l_n) + 1);
    for (int k = 0; k <= l_n; ++k) {
        const double b = autocov_bandwidth(res, k, b_grid, config.kernel).selected;
        curves.push_back(autocov_at(res, k, curve_grid_for_lag(k, m, n, k == 0), b,
                                    config.kernel, CurveBoundary::none));
    }

    const auto floor_params =
        make_floor_params(curves[0], m, n, config.beta, config.floor_multiplier);
    const auto sigma = banded_local(curves, m, n, l_n);
    const auto sigma_pd = pd_correct(sigma, floor_params);

    PredictorCoefficients coeffs;
    coeffs.window = m;
    coeffs.band = l_n;
    coeffs.tau = tau;
    coeffs.gamma_vector = gamma_vector(curves, m, n, l_n);
    coeffs.trend_at_window_end = fit.level[static_cast<std::size_t>(m - 1)];

    const Eigen::Map<const Eigen::VectorXd> g(coeffs.gamma_vector.data(), m);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
        coeffs.weights.assign(static_cast<std::size_t>(m), 0.0);
        coeffs.solve_residual = 0.0;
    } else {
        const Eigen::MatrixXd dense = sigma_pd.to_dense();
        Eigen::LLT<Eigen::MatrixXd> llt(dense);
        Eigen::VectorXd w;
        if (llt.info() == Eigen::Success) {
            w = llt.solve(g);
        } else {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(dense);
            if (ldlt.info() != Eigen::Success)
                throw SolveFailure("factorization of the corrected covariance failed");
            w = ldlt.solve(g);
        }
        coeffs.solve_residual = (dense * w - g).norm() / gnorm;
        if (coeffs.solve_residual > 1e-8)
            throw SolveFailure("predictor system solve residual " +
                               std::to_string(coeffs.solve_residual));
        coeffs.weights.assign(w.data(), w.data() + m);
    }

    double dot = 0.0;
    for (int s = 1; s <= m; ++s)
        dot += coeffs.weights[static_cast<std::size_t>(s - 1)] *
               fit.level[static_cast<std::size_t>(s - 1)];
    coeffs.intercept = coeffs.trend_at_window_end - dot;
    return coeffs;
}

ForecastResult predict_one(const PredictorCoefficients& coeffs,
                           const std::vector<double>& y) {
    if (static_cast<int>(y.size()) != coeffs.window)
        throw LengthMismatch("observation window does not match the fitted coefficients");
    double point = coeffs.intercept;
    for (std::size_t s = 0; s < y.size(); ++s) point += coeffs.weights[s] * y[s];
    ForecastResult result;
    result.point = point;
    result.trend_at_window_end = coeffs.trend_at_window_end;
    return result;
}

void BacktestReport::write_csv(std::ostream& out) const {
    out << "step,prediction,realized,error,standardized_error\n";
    char buf[160];
    for (const auto& s : steps) {
        if (!s.ok) {
            std::snprintf(buf, sizeof(buf), "%d,,,,\n", s.step);
            out << buf;
            continue;
        }
        if (s.standardized_error) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", s.step,
                          s.prediction, s.realized, s.error, *s.standardized_error);
        } else {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,\n", s.step, s.prediction,
                          s.realized, s.error);
        }
        out << buf;
    }
}

BacktestReport rolling_backtest(const std::vector<double>& y, int start,
                                const PredictorConfig& config,
                                const std::function<double(double)>& sigma) {
    const int T = static_cast<int>(y.size());
    if (start < 11) throw DomainError("backtest start must be at least 11");
    if (start > T) throw DomainError("backtest start beyond the series");

    BacktestReport report;
    double sse = 0.0;
    int successes = 0;
    for (int j = start; j <= T; ++j) {
        BacktestStep step;
        step.step = j;
        try {
            const std::vector<double> window(y.begin(), y.begin() + (j - 1));
            const auto coeffs = fit_coefficients(window, j, config);
            const auto forecast = predict_one(coeffs, window);
            step.prediction = forecast.point;
            step.realized = y[static_cast<std::size_t>(j - 1)];
            step.error = step.realized - step.prediction;
            if (sigma) {
                const double s = sigma(static_cast<double>(j) / T);
                if (s > 0.0) step.standardized_error = step.error / s;
            }
            step.ok = true;
            sse += step.error * step.error;
            ++successes;
        } catch (const Error& err) {
            step.ok = false;
            step.note = err.what();
            ++report.failures;
        }
        report.steps.push_back(std::move(step));
    }
    report.mse = successes > 0 ? sse / successes : 0.0;
    return report;
}

} // namespace lsts
