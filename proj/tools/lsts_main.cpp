// Command line front end: simulation, covariance estimation, one-step
// prediction, Monte Carlo benchmarks, and the market CSV pipeline.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "lsts/bandselect.hpp"
#include "lsts/covmatrix.hpp"
#include "lsts/csv.hpp"
#include "lsts/errors.hpp"
#include "lsts/experiments.hpp"
#include "lsts/predictor.hpp"
#include "lsts/simulate.hpp"

namespace {

using namespace lsts;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    return out;
}

std::vector<double> load_column(const std::string& path, const std::string& column) {
    AnalyzeOptions options;
    options.column = column;
    options.log_abs_returns = false;
    return load_market_csv(path, options).values;
}

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::optional<unsigned long long> seed;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value configuration file");
    cmd->add_option("--out", flags.out, "output CSV path (default: stdout)");
    cmd->add_option("--seed", flags.seed, "master seed");
}

int run_simulate(const CommonFlags& common, const std::string& model,
                 const std::string& mean, int n, const std::string& innovations) {
    ProcessSpec spec = innovations.empty()
                           ? ProcessSpec::make(parse_process_kind(model), parse_mean_kind(mean))
                           : ProcessSpec::make(parse_process_kind(model), parse_mean_kind(mean),
                                               InnovationLaw::parse(innovations));
    auto rng = replication_rng(common.seed.value_or(1), 0);
    const auto path = simulate_path(spec, n, rng);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!common.out.empty()) {
        file = open_out(common.out);
        out = &file;
    }
    (*out) << "index,t,x,epsilon\n";
    char buf[128];
    for (int i = 1; i <= n; ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", i,
                      static_cast<double>(i) / n, path.x[i - 1], path.errors[i - 1]);
        (*out) << buf;
    }
    return 0;
}

int run_estimate_cov(const CommonFlags& common, const std::string& in,
                     const std::string& column, const std::string& flavor, int l0, int l1,
                     double alpha, const std::string& kernel_name, double beta,
                     double multiplier) {
    const auto y = load_column(in, column);
    const int n = static_cast<int>(y.size());
    const KernelSpec kernel = KernelSpec::parse(kernel_name);
    const auto grid = default_bandwidth_grid(n, n);

    const double tau = gcv_select(y, n, grid, kernel).selected;
    const auto fit = local_linear_fit(y, n, design_grid(n, n), tau, kernel);
    const auto res = residuals(y, fit, n);
    const int band = select_band(res, l0, l1, alpha, kernel, grid).selected;

    auto curves_up_to = [&](int maxlag, bool with_floor_grid) {
        std::vector<LagCurve> curves;
        for (int k = 0; k <= maxlag; ++k) {
            const double b = autocov_bandwidth(res, k, grid, kernel).selected;
            auto pts = assembly_midpoints(n, n, k);
            if (with_floor_grid && k == 0) {
                pts.insert(pts.begin(), 0.0);
            }
            curves.push_back(autocov_at(res, k, std::move(pts), b, kernel));
        }
        return curves;
    };

    std::optional<BandedCovariance> matrix;
    if (flavor == "stationary") {
        matrix = banded_stationary(res, band);
    } else if (flavor == "local") {
        matrix = banded_local(curves_up_to(band, false), n, n, band);
    } else if (flavor == "tapered") {
        const int need = band > 0 ? std::min(2 * band - 1, n - 1) : 0;
        matrix = taper_local(curves_up_to(need, false), n, n, band);
    } else if (flavor == "pd") {
        const auto curves = curves_up_to(band, true);
        const auto params = make_floor_params(curves[0], n, n, beta, multiplier);
        matrix = pd_correct(banded_local(curves, n, n, band), params);
    } else {
        throw DomainError("unknown flavor: " + flavor);
    }

    std::cerr << "n=" << n << " tau=" << tau << " l_n=" << band
              << " flavor=" << to_string(matrix->flavor()) << "\n";
    if (common.out.empty()) {
        matrix->write_csv(std::cout);
    } else {
        auto file = open_out(common.out);
        matrix->write_csv(file);
    }
    return 0;
}

int run_predict(const CommonFlags& common, const std::string& in, const std::string& column) {
    const auto y = load_column(in, column);
    const int m = static_cast<int>(y.size());
    PredictorConfig config;
    const auto coeffs = fit_coefficients(y, m + 1, config);
    const auto forecast = predict_one(coeffs, y);

    std::cout << "window=" << m << " tau=" << coeffs.tau << " l_n=" << coeffs.band
              << " intercept=" << coeffs.intercept
              << " trend_end=" << coeffs.trend_at_window_end
              << " prediction=" << forecast.point << "\n";
    if (!common.out.empty()) {
        auto file = open_out(common.out);
        file << "window,prediction,intercept,band,tau\n";
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%d,%.17g\n", m, forecast.point,
                      coeffs.intercept, coeffs.band, coeffs.tau);
        file << buf;
    }
    return 0;
}

int run_bench(const CommonFlags& common, const CLI::App* cmd, const std::string& experiment,
              const std::string& model, const std::string& mean, const std::string& n_list,
              int reps, double t_pred, const std::string& innovations, bool taper,
              int threads, int l0, int l1) {
    Config config = common.config_path.empty() ? Config() : Config::from_file(common.config_path);
    auto override_if = [&](const char* flag, const std::string& key, const std::string& value) {
        if (cmd->count(flag) > 0) config.set(key, value);
    };
    override_if("--experiment", "experiment.kind", experiment);
    override_if("--model", "experiment.model", model);
    override_if("--mean", "experiment.mean", mean);
    override_if("--n", "experiment.n", n_list);
    override_if("--reps", "experiment.reps", std::to_string(reps));
    override_if("--t-pred", "experiment.t_pred", std::to_string(t_pred));
    override_if("--innovations", "experiment.innovations", innovations);
    override_if("--taper", "covariance.taper", taper ? "true" : "false");
    override_if("--threads", "experiment.threads", std::to_string(threads));
    override_if("--l0", "band.l0", std::to_string(l0));
    override_if("--l1", "band.l1", std::to_string(l1));
    if (common.seed) config.set("experiment.seed", std::to_string(*common.seed));
    if (!common.out.empty()) config.set("experiment.out", common.out);

    const ExperimentConfig cfg = ExperimentConfig::from_config(config);
    const auto write = [&](auto&& writer) {
        if (cfg.out.empty()) {
            writer(std::cout);
        } else {
            auto file = open_out(cfg.out);
            writer(file);
        }
    };
    if (cfg.experiment == "cov_loss") {
        const auto report = run_cov_experiment(cfg);
        write([&](std::ostream& out) { report.write_csv(out); });
    } else if (cfg.experiment == "pred_mse") {
        const auto report = run_pred_experiment(cfg);
        write([&](std::ostream& out) { report.write_csv(out); });
    } else {
        const auto table = emit_qq(cfg);
        write([&](std::ostream& out) { table.write_csv(out); });
    }
    return 0;
}

int run_analyze(const CommonFlags& common, const std::string& in, const std::string& column,
                bool log_abs_returns, int start) {
    AnalyzeOptions options;
    options.column = column;
    options.log_abs_returns = log_abs_returns;
    options.start = start;
    const auto report = analyze_csv(in, options);

    std::cerr << "steps=" << report.steps.size() << " failures=" << report.failures
              << " mse=" << report.mse << "\n";
    if (common.out.empty()) {
        report.write_csv(std::cout);
    } else {
        auto file = open_out(common.out);
        report.write_csv(file);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locally stationary time series: trend, banded covariance, prediction"};
    app.require_subcommand(1);

    CommonFlags common;

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a process path to CSV");
    std::string model = "a", mean = "I", innovations;
    int n = 500;
    sim->add_option("--model", model, "a|b|c|d|tvar6|tvma6");
    sim->add_option("--mean", mean, "I|II|III");
    sim->add_option("--n", n, "path length");
    sim->add_option("--innovations", innovations, "normal|t6|chisq5|chisq6");
    add_common(sim, common);

    // estimate-cov
    auto* est = app.add_subcommand("estimate-cov", "banded covariance estimate from a series CSV");
    std::string in, column, flavor = "local", kernel_name = "biweight";
    int l0 = 1, l1 = 6;
    double alpha = 0.01, beta = 0.5, multiplier = 10.0;
    est->add_option("--in", in, "input CSV")->required();
    est->add_option("--column", column, "value column (default: last)");
    est->add_option("--flavor", flavor, "stationary|local|tapered|pd");
    est->add_option("--l0", l0, "band search lower bound");
    est->add_option("--l1", l1, "band search upper bound");
    est->add_option("--alpha", alpha, "band selection level");
    est->add_option("--kernel", kernel_name, "biweight|epanechnikov");
    est->add_option("--beta", beta, "floor exponent");
    est->add_option("--multiplier", multiplier, "floor multiplier");
    add_common(est, common);

    // predict
    auto* pred = app.add_subcommand("predict", "one-step forecast from a series CSV");
    pred->add_option("--in", in, "input CSV")->required();
    pred->add_option("--column", column, "value column (default: last)");
    add_common(pred, common);

    // bench
    auto* bench = app.add_subcommand("bench", "Monte Carlo benchmark experiments");
    std::string experiment = "cov_loss", n_list = "250,500,1000";
    int reps = 200, threads = 0, bl0 = 1, bl1 = 6;
    double t_pred = 0.5;
    bool taper = false;
    bench->add_option("--experiment", experiment, "cov_loss|pred_mse|qq");
    bench->add_option("--model", model, "a|b|c|d|tvar6|tvma6");
    bench->add_option("--mean", mean, "I|II|III");
    bench->add_option("--n", n_list, "comma separated sample sizes");
    bench->add_option("--reps", reps, "replications");
    bench->add_option("--t-pred", t_pred, "0.5 or 1");
    bench->add_option("--innovations", innovations, "normal|t6|chisq5|chisq6");
    bench->add_flag("--taper", taper, "also report the tapered estimator");
    bench->add_option("--threads", threads, "worker threads (0: all cores)");
    bench->add_option("--l0", bl0, "band search lower bound");
    bench->add_option("--l1", bl1, "band search upper bound");
    add_common(bench, common);

    // analyze
    auto* ana = app.add_subcommand("analyze", "rolling one-step backtest over a CSV series");
    bool log_abs = false;
    int start = 0;
    ana->add_option("--in", in, "input CSV")->required();
    ana->add_option("--column", column, "value column (default: last)");
    ana->add_flag("--log-abs-returns", log_abs, "apply y_t = log|log p_t - log p_{t-1}|");
    ana->add_option("--start", start, "first forecast index (default: last quarter)");
    add_common(ana, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(common, model, mean, n, innovations);
        if (est->parsed())
            return run_estimate_cov(common, in, column, flavor, l0, l1, alpha, kernel_name,
                                    beta, multiplier);
        if (pred->parsed()) return run_predict(common, in, column);
        if (bench->parsed())
            return run_bench(common, bench, experiment, model, mean, n_list, reps, t_pred,
                             innovations, taper, threads, bl0, bl1);
        if (ana->parsed()) return run_analyze(common, in, column, log_abs, start);
    } catch (const lsts::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
