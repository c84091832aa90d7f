#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lsts/config.hpp"
#include "lsts/csv.hpp"
#include "lsts/errors.hpp"
#include "lsts/experiments.hpp"

using namespace lsts;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("harness_fixture_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string random_walk_csv(int rows, unsigned long long seed) {
    auto rng = replication_rng(seed, 0);
    std::normal_distribution<double> step(0.0, 0.02);
    std::ostringstream out;
    out << "date,close\n";
    double logp = std::log(100.0);
    for (int i = 1; i <= rows; ++i) {
        logp += step(rng);
        out << "2019-" << (i % 12) + 1 << "-" << (i % 28) + 1 << "," << std::exp(logp) << "\n";
    }
    return out.str();
}

} // namespace

TEST_CASE("config parsing: sections, types, unknown keys") {
    std::istringstream in(
        "# experiment file\n"
        "[experiment]\n"
        "kind = cov_loss\n"
        "model = b\n"
        "n = 100, 200\n"
        "reps = 7\n"
        "seed = 42\n"
        "[band]\n"
        "l0 = 1\n"
        "alpha = 0.05\n");
    auto config = Config::from_stream(in, "test");
    CHECK(config.get("experiment.kind", "") == "cov_loss");
    CHECK(config.get_int("experiment.reps", 0) == 7);
    CHECK(config.get_double("band.alpha", 0) == doctest::Approx(0.05));
    CHECK(config.get_int_list("experiment.n", {}) == std::vector<int>{100, 200});
    CHECK(config.get_seed("experiment.seed", 0) == 42);
    CHECK(config.get_bool("covariance.taper", false) == false);

    const auto cfg = ExperimentConfig::from_config(config);
    CHECK(cfg.model == ProcessKind::model_b);
    CHECK(cfg.replications == 7);
    CHECK(cfg.alpha == doctest::Approx(0.05));

    config.set("experiment.bogus", "1");
    CHECK_THROWS_AS(ExperimentConfig::from_config(config), ParseError);

    std::istringstream bad("key value\n");
    CHECK_THROWS_AS(Config::from_stream(bad, "bad"), ParseError);
    std::istringstream badnum("[experiment]\nreps = seven\n");
    auto cfg2 = Config::from_stream(badnum, "badnum");
    CHECK_THROWS_AS(cfg2.get_int("experiment.reps", 1), ParseError);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg;
    cfg.replications = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.replications = 10;
    cfg.sample_sizes = {20};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.sample_sizes = {60};
    cfg.experiment = "nope";
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.experiment = "pred_mse";
    cfg.t_pred = 0.3;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("csv parsing errors carry line numbers") {
    std::istringstream in("a,b\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(parse_csv(in, "f.csv"), "f.csv:3: expected 2 fields, got 1",
                         ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_csv(empty, "g.csv"), ParseError);
    std::istringstream ok("x,y\n 1 , 2 \n");
    const auto table = parse_csv(ok, "h.csv");
    CHECK(table.rows[0][0] == "1");
    CHECK(table.column("y") == 1);
    CHECK(table.column("z") == -1);
}

TEST_CASE("cov experiment: reproducible across worker counts, se definition") {
    ExperimentConfig cfg;
    cfg.experiment = "cov_loss";
    cfg.model = ProcessKind::model_a;
    cfg.mean = MeanKind::III;
    cfg.sample_sizes = {60};
    cfg.replications = 6;
    cfg.master_seed = 9;
    cfg.keep_raw = true;
    cfg.threads = 1;
    const auto r1 = run_cov_experiment(cfg);
    cfg.threads = 3;
    const auto r2 = run_cov_experiment(cfg);

    std::ostringstream c1, c2;
    r1.write_csv(c1);
    r2.write_csv(c2);
    CHECK(c1.str() == c2.str());

    const auto& cell = r1.cell("local", 60);
    REQUIRE(cell.raw.size() == 6);
    double mean = 0.0;
    for (double v : cell.raw) mean += v;
    mean /= 6.0;
    double ss = 0.0;
    for (double v : cell.raw) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / 5.0 / 6.0);
    CHECK(cell.mean_loss == doctest::Approx(mean).epsilon(1e-12));
    CHECK(cell.se == doctest::Approx(se).epsilon(1e-12));
    CHECK(cell.reps == 6);
    CHECK(cell.valid);

    // stationary cell exists and the csv has one row per cell
    CHECK_NOTHROW(r1.cell("stationary", 60));
    int lines = 0;
    std::istringstream stream(c1.str());
    std::string line;
    while (std::getline(stream, line)) ++lines;
    CHECK(lines == 3); // header + 2 cells
}

TEST_CASE("pred experiment and qq pairing") {
    ExperimentConfig cfg;
    cfg.experiment = "pred_mse";
    cfg.model = ProcessKind::model_a;
    cfg.mean = MeanKind::III;
    cfg.sample_sizes = {64};
    cfg.replications = 5;
    cfg.master_seed = 4;
    cfg.t_pred = 0.5;
    cfg.l0 = 1;
    cfg.l1 = 2;
    const auto report = run_pred_experiment(cfg);
    const auto& cell = report.cell("predictor", 64);
    CHECK(cell.reps == 5);
    CHECK(report.standardized_errors.size() == 5);

    const auto table = emit_qq(cfg);
    REQUIRE(table.empirical.size() == 5);
    REQUIRE(table.theoretical.size() == 5);
    for (std::size_t i = 1; i < table.empirical.size(); ++i) {
        CHECK(table.empirical[i] >= table.empirical[i - 1]);
        CHECK(table.theoretical[i] >= table.theoretical[i - 1]);
    }
    // plotting positions (i-0.5)/N against the standard normal
    InnovationLaw normal(InnovationFamily::std_normal);
    CHECK(table.theoretical[0] == doctest::Approx(normal.quantile(0.1)).epsilon(1e-12));

    // perfectly matched pairs have squared correlation 1
    QQTable ideal;
    for (int i = 1; i <= 50; ++i) {
        const double q = normal.quantile((i - 0.5) / 50.0);
        ideal.empirical.push_back(q);
        ideal.theoretical.push_back(q);
    }
    CHECK(ideal.squared_correlation() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("market loading and transforms") {
    const auto path = write_temp("walk.csv", random_walk_csv(120, 5));
    AnalyzeOptions options;
    options.column = "close";
    options.log_abs_returns = true;
    const auto series = load_market_csv(path, options);
    CHECK(series.rows_before == 120);
    CHECK(series.rows_after == 119); // returns lose one row, none dropped here
    CHECK(series.dropped_rows.empty());

    // a flat stretch produces -inf log|return| and is dropped
    const auto path2 = write_temp("flat.csv",
                                  "date,close\n"
                                  "d1,100\nd2,100\nd3,101\nd4,99\nd5,99\n");
    const auto series2 = load_market_csv(path2, options);
    CHECK(series2.rows_after == 2); // returns: 0 (drop), +, -, 0 (drop)
    CHECK(series2.dropped_rows.size() == 2);

    // constant prices: everything drops
    const auto path3 = write_temp("const.csv", "date,close\nd1,50\nd2,50\nd3,50\n");
    CHECK_THROWS_AS(load_market_csv(path3, options), EmptyAfterCleaning);

    // unknown column
    options.column = "adj";
    CHECK_THROWS_AS(load_market_csv(path, options), ParseError);

    // non-numeric data
    const auto path4 = write_temp("bad.csv", "date,close\nd1,oops\n");
    options.column = "close";
    CHECK_THROWS_AS(load_market_csv(path4, options), ParseError);

    std::remove(path.c_str());
    std::remove(path2.c_str());
    std::remove(path3.c_str());
    std::remove(path4.c_str());
}

TEST_CASE("analyze: counting and byte-identical reruns") {
    const auto path = write_temp("series.csv", random_walk_csv(120, 6));
    AnalyzeOptions options;
    options.column = "close";
    options.log_abs_returns = true;
    options.start = 105;
    options.predictor.l0 = 1;
    options.predictor.l1 = 2;

    const auto report = analyze_csv(path, options);
    CHECK(report.steps.size() == 119 - 105 + 1);

    std::ostringstream run1, run2;
    report.write_csv(run1);
    analyze_csv(path, options).write_csv(run2);
    CHECK(run1.str() == run2.str());
    std::remove(path.c_str());
}
