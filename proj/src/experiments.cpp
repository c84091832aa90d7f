#include "lsts/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "lsts/bandselect.hpp"
#include "lsts/csv.hpp"
#include "lsts/errors.hpp"

namespace lsts {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Replications pull indices from a shared counter; results land in
// per-index slots so the reduction order never depends on scheduling.
template <typename Body>
void parallel_replications(int count, int threads, const Body& body) {
    threads = std::min(std::max(threads, 1), std::max(count, 1));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&]() {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

std::mt19937_64 cell_rng(unsigned long long master, int n, int rep) {
    return replication_rng(master ^ (static_cast<unsigned long long>(n) << 40),
                           static_cast<unsigned long long>(rep));
}

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.se = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) /
                         static_cast<double>(xs.size()));
    }
    return m;
}

struct CovRepResult {
    bool ok = false;
    double local = 0.0;
    double stationary = 0.0;
    double tapered = 0.0;
};

struct PredRepResult {
    bool ok = false;
    double sqerr = 0.0;
    double standardized = 0.0;
};

} // namespace

ProcessSpec ExperimentConfig::process() const {
    return innovations ? ProcessSpec::make(model, mean, *innovations)
                       : ProcessSpec::make(model, mean);
}

void ExperimentConfig::validate() const {
    if (replications < 1) throw DomainError("replications must be at least 1");
    for (int n : sample_sizes)
        if (n < 50) throw DomainError("sample sizes must be at least 50");
    if (experiment != "cov_loss" && experiment != "pred_mse" && experiment != "qq")
        throw DomainError("unknown experiment: " + experiment);
    if (t_pred != 0.5 && t_pred != 1.0) throw DomainError("t_pred must be 0.5 or 1");
}

const std::set<std::string>& ExperimentConfig::known_keys() {
    static const std::set<std::string> keys = {
        "experiment.kind",   "experiment.model", "experiment.mean",
        "experiment.innovations", "experiment.n",     "experiment.reps",
        "experiment.seed",   "experiment.t_pred", "experiment.threads",
        "experiment.out",    "experiment.keep_raw",
        "band.l0",           "band.l1",          "band.alpha",
        "band.block",
        "smoothing.kernel",
        "covariance.taper",  "covariance.beta",  "covariance.floor_multiplier",
    };
    return keys;
}

ExperimentConfig ExperimentConfig::from_config(const Config& config) {
    config.require_known(known_keys());
    ExperimentConfig cfg;
    cfg.experiment = config.get("experiment.kind", cfg.experiment);
    cfg.model = parse_process_kind(config.get("experiment.model", "a"));
    cfg.mean = parse_mean_kind(config.get("experiment.mean", "I"));
    if (config.has("experiment.innovations"))
        cfg.innovations = InnovationLaw::parse(config.get("experiment.innovations", ""));
    cfg.sample_sizes = config.get_int_list("experiment.n", cfg.sample_sizes);
    cfg.replications = config.get_int("experiment.reps", cfg.replications);
    cfg.master_seed = config.get_seed("experiment.seed", cfg.master_seed);
    cfg.t_pred = config.get_double("experiment.t_pred", cfg.t_pred);
    cfg.threads = config.get_int("experiment.threads", cfg.threads);
    cfg.out = config.get("experiment.out", cfg.out);
    cfg.keep_raw = config.get_bool("experiment.keep_raw", cfg.keep_raw);
    cfg.l0 = config.get_int("band.l0", cfg.l0);
    cfg.l1 = config.get_int("band.l1", cfg.l1);
    cfg.alpha = config.get_double("band.alpha", cfg.alpha);
    cfg.block = config.get_int("band.block", cfg.block);
    cfg.kernel = config.get("smoothing.kernel", cfg.kernel);
    cfg.taper = config.get_bool("covariance.taper", cfg.taper);
    cfg.beta = config.get_double("covariance.beta", cfg.beta);
    cfg.floor_multiplier = config.get_double("covariance.floor_multiplier", cfg.floor_multiplier);
    cfg.validate();
    return cfg;
}

void ExperimentReport::write_csv(std::ostream& out) const {
    out << "model,mean,n,estimator,mean_loss,se,reps\n";
    char buf[160];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%s,%.6f,%.6f,%d\n", c.model.c_str(),
                      c.mean.c_str(), c.n, c.estimator.c_str(), c.mean_loss, c.se, c.reps);
        out << buf;
    }
}

const ExperimentCell& ExperimentReport::cell(const std::string& estimator, int n) const {
    for (const auto& c : cells)
        if (c.estimator == estimator && c.n == n) return c;
    throw DomainError("no cell for estimator " + estimator + " at n=" + std::to_string(n));
}

ExperimentReport run_cov_experiment(const ExperimentConfig& config) {
    config.validate();
    const ProcessSpec spec = config.process();
    const KernelSpec kernel = KernelSpec::parse(config.kernel);
    const int l0 = config.l0 > 0 ? config.l0 : 1;
    const int l1 = config.l1 > 0 ? config.l1 : 6;

    ExperimentReport report;
    for (int n : config.sample_sizes) {
        const Eigen::MatrixXd truth = true_covariance(spec, n);
        const auto grid = default_bandwidth_grid(n, n);
        std::vector<CovRepResult> results(static_cast<std::size_t>(config.replications));

        parallel_replications(config.replications, resolve_threads(config.threads), [&](int rep) {
            auto& out = results[static_cast<std::size_t>(rep)];
            try {
                auto rng = cell_rng(config.master_seed, n, rep);
                const auto path = simulate_path(spec, n, rng);
                const double tau = gcv_select(path.x, n, grid, kernel).selected;
                const auto fit = local_linear_fit(path.x, n, design_grid(n, n), tau, kernel);
                const auto res = residuals(path.x, fit, n);
                const int band =
                    select_band(res, l0, l1, config.alpha, kernel, grid, config.block).selected;

                const auto stationary = banded_stationary(res, band);
                out.stationary = operator_norm(stationary.to_dense() - truth);

                const int need = config.taper && band > 0
                                     ? std::min(2 * band - 1, n - 1)
                                     : band;
                std::vector<LagCurve> curves;
                curves.reserve(static_cast<std::size_t>(need) + 1);
                for (int k = 0; k <= need; ++k) {
                    const double b = autocov_bandwidth(res, k, grid, kernel).selected;
                    curves.push_back(autocov_at(res, k, assembly_midpoints(n, n, k), b, kernel));
                }
                const auto local = banded_local(curves, n, n, band);
                out.local = operator_norm(local.to_dense() - truth);
                if (config.taper) {
                    const auto tapered = taper_local(curves, n, n, band);
                    out.tapered = operator_norm(tapered.to_dense() - truth);
                }
                out.ok = true;
            } catch (const Error&) {
                out.ok = false;
            }
        });

        std::vector<double> local, stationary, tapered;
        int failures = 0;
        for (const auto& r : results) {
            if (!r.ok) {
                ++failures;
                continue;
            }
            local.push_back(r.local);
            stationary.push_back(r.stationary);
            if (config.taper) tapered.push_back(r.tapered);
        }
        const bool valid = failures * 100 <= config.replications;

        auto push = [&](const char* name, const std::vector<double>& losses) {
            ExperimentCell cell;
            cell.model = to_string(config.model);
            cell.mean = to_string(config.mean);
            cell.n = n;
            cell.estimator = name;
            const Moments m = moments(losses);
            cell.mean_loss = m.mean;
            cell.se = m.se;
            cell.reps = static_cast<int>(losses.size());
            cell.failures = failures;
            cell.valid = valid;
            if (config.keep_raw) cell.raw = losses;
            report.cells.push_back(std::move(cell));
        };
        push("local", local);
        push("stationary", stationary);
        if (config.taper) push("tapered", tapered);
    }
    return report;
}

ExperimentReport run_pred_experiment(const ExperimentConfig& config) {
    config.validate();
    const ProcessSpec spec = config.process();

    PredictorConfig pcfg;
    pcfg.kernel = KernelSpec::parse(config.kernel);
    pcfg.l0 = config.l0;
    pcfg.l1 = config.l1;
    pcfg.alpha = config.alpha;
    pcfg.beta = config.beta;
    pcfg.floor_multiplier = config.floor_multiplier;
    pcfg.block = config.block;

    ExperimentReport report;
    for (int n : config.sample_sizes) {
        const int m = config.t_pred == 1.0 ? n - 1 : n / 2;
        std::vector<PredRepResult> results(static_cast<std::size_t>(config.replications));

        parallel_replications(config.replications, resolve_threads(config.threads), [&](int rep) {
            auto& out = results[static_cast<std::size_t>(rep)];
            try {
                auto rng = cell_rng(config.master_seed, n, rep);
                const auto path = simulate_path(spec, n, rng);
                const std::vector<double> window(path.x.begin(), path.x.begin() + m);
                const auto coeffs = fit_coefficients(window, n, pcfg);
                const auto forecast = predict_one(coeffs, window);
                const double realized = path.x[static_cast<std::size_t>(m)];
                const double err = realized - forecast.point;
                out.sqerr = err * err;
                out.standardized = err / spec.scale_at(static_cast<double>(m + 1) / n);
                out.ok = true;
            } catch (const Error&) {
                out.ok = false;
            }
        });

        std::vector<double> sqerrs;
        int failures = 0;
        for (const auto& r : results) {
            if (!r.ok) {
                ++failures;
                continue;
            }
            sqerrs.push_back(r.sqerr);
            report.standardized_errors.push_back(r.standardized);
        }
        ExperimentCell cell;
        cell.model = to_string(config.model);
        cell.mean = to_string(config.mean);
        cell.n = n;
        cell.estimator = "predictor";
        const Moments m2 = moments(sqerrs);
        cell.mean_loss = m2.mean;
        cell.se = m2.se;
        cell.reps = static_cast<int>(sqerrs.size());
        cell.failures = failures;
        cell.valid = failures * 100 <= config.replications;
        if (config.keep_raw) cell.raw = sqerrs;
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void QQTable::write_csv(std::ostream& out) const {
    out << "index,empirical,theoretical\n";
    char buf[96];
    for (std::size_t i = 0; i < empirical.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i + 1, empirical[i],
                      theoretical[i]);
        out << buf;
    }
}

double QQTable::squared_correlation() const {
    const std::size_t n = empirical.size();
    if (n < 2) return 0.0;
    double me = 0.0, mt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        me += empirical[i];
        mt += theoretical[i];
    }
    me /= static_cast<double>(n);
    mt /= static_cast<double>(n);
    double see = 0.0, stt = 0.0, set = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        see += (empirical[i] - me) * (empirical[i] - me);
        stt += (theoretical[i] - mt) * (theoretical[i] - mt);
        set += (empirical[i] - me) * (theoretical[i] - mt);
    }
    if (see <= 0.0 || stt <= 0.0) return 0.0;
    return set * set / (see * stt);
}

QQTable emit_qq(const ExperimentConfig& config) {
    ExperimentConfig pred = config;
    pred.experiment = "pred_mse";
    const auto report = run_pred_experiment(pred);

    QQTable table;
    table.empirical = report.standardized_errors;
    std::sort(table.empirical.begin(), table.empirical.end());
    const std::size_t N = table.empirical.size();
    const InnovationLaw law = config.process().law();
    table.theoretical.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        table.theoretical[i] =
            law.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(N));
    return table;
}

MarketSeries load_market_csv(const std::string& path, const AnalyzeOptions& options) {
    const CsvTable table = read_csv(path);
    int col;
    if (options.column.empty()) {
        col = static_cast<int>(table.header.size()) - 1;
    } else {
        col = table.column(options.column);
        if (col < 0) throw ParseError(path + ": no column named " + options.column);
    }

    MarketSeries series;
    series.rows_before = static_cast<int>(table.rows.size());
    std::vector<double> raw;
    raw.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& field = table.rows[r][static_cast<std::size_t>(col)];
        try {
            raw.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw ParseError(path + ": data row " + std::to_string(r + 1) +
                             ": not a number: " + field);
        }
        if (table.header.size() > 1 && col != 0)
            series.labels.push_back(table.rows[r][0]);
    }

    if (options.log_abs_returns) {
        // y_t = log|log p_t - log p_{t-1}|, rows with non-finite values dropped
        for (std::size_t t = 1; t < raw.size(); ++t) {
            const double r = std::log(raw[t]) - std::log(raw[t - 1]);
            const double y = std::log(std::fabs(r));
            if (std::isfinite(y)) {
                series.values.push_back(y);
            } else {
                series.dropped_rows.push_back(static_cast<int>(t + 1));
            }
        }
    } else {
        for (std::size_t t = 0; t < raw.size(); ++t) {
            if (std::isfinite(raw[t])) {
                series.values.push_back(raw[t]);
            } else {
                series.dropped_rows.push_back(static_cast<int>(t + 1));
            }
        }
    }
    series.rows_after = static_cast<int>(series.values.size());
    if (series.values.empty()) throw EmptyAfterCleaning(path + ": no rows after cleaning");
    return series;
}

BacktestReport analyze_csv(const std::string& path, const AnalyzeOptions& options) {
    const MarketSeries series = load_market_csv(path, options);
    const int T = static_cast<int>(series.values.size());
    int start = options.start;
    if (start <= 0) start = 3 * T / 4 + 1; // default: forecast the last quarter
    if (start < 11) start = 11;
    if (start > T) throw DomainError("forecast start beyond the cleaned series");
    return rolling_backtest(series.values, start, options.predictor);
}

} // namespace lsts
