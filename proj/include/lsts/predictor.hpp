#ifndef LSTS_PREDICTOR_HPP
#define LSTS_PREDICTOR_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsts/covmatrix.hpp"
#include "lsts/kernel.hpp"

namespace lsts {

/// Knobs of the one-step prediction pipeline. Negative band bounds select the
/// window-length rule l0 = ceil(log m), l1 = 5 + ceil(log m).
struct PredictorConfig {
    KernelSpec kernel = KernelSpec::biweight();
    std::vector<double> tau_candidates; ///< empty: default grid for (m, n)
    std::vector<double> b_candidates;   ///< empty: default grid for (m, n)
    int l0 = -1;
    int l1 = -1;
    double alpha = 0.01;
    double beta = 0.5;            ///< floor exponent
    double floor_multiplier = 10.0;
    int block = -1;               ///< long-run variance block; -1: default rule
};

/// Coefficients of the estimated best linear one-step predictor. weights[s-1]
/// multiplies observation y_s, so the stored vector is (a_m, ..., a_1).
struct PredictorCoefficients {
    int window = 0;                    ///< m
    double intercept = 0.0;            ///< a_{m+1}
    std::vector<double> weights;       ///< solves Sigma_pd w = gamma_vector
    std::vector<double> gamma_vector;  ///< zero except the trailing band entries
    int band = 0;                      ///< selected l_n
    double trend_at_window_end = 0.0;  ///< muhat(m/n)
    double tau = 0.0;
    double solve_residual = 0.0;       ///< |Sigma_pd w - gamma| / |gamma|
};

struct ForecastResult {
    double point = 0.0;
    double trend_at_window_end = 0.0;
    std::optional<double> standardization; ///< sigma((m+1)/n) when known
};

/// Right-hand side of the predictor system: the m-vector with entries
/// gamma_s((2m-s+1)/(2n)) for s = m+1-u at position u, zeroed outside
/// 1 <= s <= band. curves[k] supplies lag k.
std::vector<double> gamma_vector(const std::vector<LagCurve>& curves, int m, int n,
                                 int band);

/// Full pipeline on the window y_1..y_m of a design with scale n: trend GCV,
/// residuals, band selection, per-lag curve bandwidths, banded covariance,
/// positive-definite correction, and the linear solve for the weights.
PredictorCoefficients fit_coefficients(const std::vector<double>& y, int n,
                                       const PredictorConfig& config);

/// point = intercept + sum_s weights[s-1] y_s
ForecastResult predict_one(const PredictorCoefficients& coeffs,
                           const std::vector<double>& y);

struct BacktestStep {
    int step = 0;          ///< index of the predicted observation (1-based)
    double prediction = 0.0;
    double realized = 0.0;
    double error = 0.0;    ///< realized - prediction
    std::optional<double> standardized_error;
    bool ok = false;
    std::string note;      ///< failure reason when !ok
};

struct BacktestReport {
    std::vector<BacktestStep> steps;
    double mse = 0.0;      ///< over successful steps
    int failures = 0;

    void write_csv(std::ostream& out) const;
};

/// One-step-ahead rolling forecast: for each target index j in [start, T],
/// fit on 1..j-1 with design scale j and predict y_j. Step failures are
/// recorded, not fatal. sigma, when supplied, standardizes errors by
/// sigma(j / T) on the rescaled time of the full series.
BacktestReport rolling_backtest(const std::vector<double>& y, int start,
                                const PredictorConfig& config,
                                const std::function<double(double)>& sigma = nullptr);

} // namespace lsts

#endif
