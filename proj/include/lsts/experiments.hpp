#ifndef LSTS_EXPERIMENTS_HPP
#define LSTS_EXPERIMENTS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lsts/config.hpp"
#include "lsts/predictor.hpp"
#include "lsts/simulate.hpp"

namespace lsts {

/// Monte Carlo experiment protocol. Built from a config file and CLI flag
/// overrides; unknown keys are rejected.
struct ExperimentConfig {
    std::string experiment = "cov_loss"; ///< cov_loss | pred_mse | qq
    ProcessKind model = ProcessKind::model_a;
    MeanKind mean = MeanKind::I;
    std::optional<InnovationFamily> innovations; ///< default: per-model law
    std::vector<int> sample_sizes = {250, 500, 1000};
    int replications = 200;
    unsigned long long master_seed = 1;
    int l0 = -1;                ///< band search range; -1: per-experiment rule
    int l1 = -1;                ///< (cov_loss: 1..6; pred/qq: window-length rule)
    double alpha = 0.01;
    double t_pred = 0.5;        ///< 0.5 or 1
    bool taper = false;         ///< also report the tapered estimator
    double beta = 0.5;
    double floor_multiplier = 10.0;
    int block = -1;
    int threads = 0;            ///< 0: hardware concurrency
    std::string kernel = "biweight";
    std::string out;            ///< output CSV path; empty: stdout
    bool keep_raw = false;

    ProcessSpec process() const;
    void validate() const;

    static ExperimentConfig from_config(const Config& config);
    static const std::set<std::string>& known_keys();
};

struct ExperimentCell {
    std::string model;
    std::string mean;
    int n = 0;
    std::string estimator;
    double mean_loss = 0.0;
    double se = 0.0;
    int reps = 0;
    int failures = 0;
    bool valid = true;          ///< false when more than 1% of replications failed
    std::vector<double> raw;    ///< per-replication losses (keep_raw)
};

struct ExperimentReport {
    std::vector<ExperimentCell> cells;
    std::vector<double> standardized_errors; ///< pred_mse: one per replication

    void write_csv(std::ostream& out) const; ///< model,mean,n,estimator,mean_loss,se,reps
    const ExperimentCell& cell(const std::string& estimator, int n) const;
};

/// Tables 1-2 protocol: per replication simulate, fit the trend, select the
/// band, assemble the stationary and local (optionally tapered) estimators,
/// and record the operator-norm loss against the analytic covariance.
ExperimentReport run_cov_experiment(const ExperimentConfig& config);

/// Table 3/5 protocol: one-step prediction at t_pred from each replication;
/// reports squared-error means and keeps standardized errors for diagnostics.
ExperimentReport run_pred_experiment(const ExperimentConfig& config);

struct QQTable {
    std::vector<double> empirical;   ///< sorted standardized errors
    std::vector<double> theoretical; ///< law quantiles at (i - 0.5)/N

    void write_csv(std::ostream& out) const;
    double squared_correlation() const;
};

/// Pairs pooled standardized prediction errors with reference quantiles of
/// the innovation law.
QQTable emit_qq(const ExperimentConfig& config);

/// Price/value series loaded from CSV for the market pipeline.
struct MarketSeries {
    std::vector<std::string> labels; ///< first column when present (dates)
    std::vector<double> values;      ///< transformed series after cleaning
    int rows_before = 0;
    int rows_after = 0;
    std::vector<int> dropped_rows;   ///< 1-based data row indices removed
};

struct AnalyzeOptions {
    std::string column;           ///< value column name; empty: last column
    bool log_abs_returns = true;  ///< y_t = log|log p_t - log p_{t-1}|
    int start = 0;                ///< first forecast index; 0: last quarter
    PredictorConfig predictor;
};

/// Load, transform and clean a series from CSV.
MarketSeries load_market_csv(const std::string& path, const AnalyzeOptions& options);

/// Full market pipeline: transform, clean, rolling one-step backtest.
BacktestReport analyze_csv(const std::string& path, const AnalyzeOptions& options);

} // namespace lsts

#endif
