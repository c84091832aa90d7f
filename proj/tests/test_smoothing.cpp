#include <doctest.h>

#include <cmath>
#include <random>

#include "lsts/errors.hpp"
#include "lsts/smoothing.hpp"
#include "oracles.hpp"

using namespace lsts;

namespace {
const KernelSpec kBiweight = KernelSpec::biweight();
}

TEST_CASE("constant series is reproduced exactly at every grid point") {
    const int n = 40;
    std::vector<double> y(n, 5.0);
    const auto fit = local_linear_fit(y, n, design_grid(n, n), 0.17, kBiweight);
    for (double level : fit.level) CHECK(level == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("linear trend is reproduced exactly, boundaries included") {
    const int n = 50;
    std::vector<double> y(n);
    for (int i = 1; i <= n; ++i) y[i - 1] = 2.0 * i / n;
    const std::vector<double> grid{1.0 / n, 0.123, 0.5, 0.987, 1.0};
    const auto fit = local_linear_fit(y, n, grid, 0.2, kBiweight);
    for (std::size_t g = 0; g < grid.size(); ++g)
        CHECK(fit.level[g] == doctest::Approx(2.0 * grid[g]).epsilon(1e-10));
    // slope of the fitted line is the true slope
    CHECK(fit.slope[2] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("closed form equals the 2x2 normal-equations solve") {
    // fixed-seed noisy input, the spec's n=10 case plus random configurations
    std::mt19937_64 rng(20240811);
    {
        const int n = 10;
        const auto y = oracles::random_vector(rng, n);
        const auto fit = local_linear_fit(y, n, {0.5}, 0.3, kBiweight);
        const auto ref = oracles::normal_equations_fit(y, n, 0.5, 0.3, kBiweight);
        CHECK(fit.level[0] == doctest::Approx(ref.level).epsilon(1e-12));
        CHECK(fit.slope[0] == doctest::Approx(ref.slope).epsilon(1e-12));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 12 + static_cast<int>(rng() % 60);
        const int n = m + static_cast<int>(rng() % 40);
        const double tau = 0.15 + 0.3 * std::generate_canonical<double, 53>(rng);
        const double t = (0.1 + 0.8 * std::generate_canonical<double, 53>(rng)) * m / n;
        const auto y = oracles::random_vector(rng, m, 2.0);
        const auto fit = local_linear_fit(y, n, {t}, tau, kBiweight);
        const auto ref = oracles::normal_equations_fit(y, n, t, tau, kBiweight);
        CHECK(fit.level[0] == doctest::Approx(ref.level).epsilon(1e-12));
        CHECK(fit.slope[0] == doctest::Approx(ref.slope).epsilon(1e-12));
    }
}

TEST_CASE("hat diagonal matches dense smoother-row construction") {
    const int m = 23, n = 30;
    const double tau = 0.21;
    const auto diag = hat_diagonal(m, n, tau, kBiweight);
    for (int i = 1; i <= m; ++i) {
        const auto row = oracles::smoother_row(m, n, static_cast<double>(i) / n, tau, kBiweight);
        CHECK(diag[i - 1] == doctest::Approx(row[i - 1]).epsilon(1e-12));
        CHECK(diag[i - 1] > 0.0);
    }
}

TEST_CASE("hat diagonal reduces to the straight-line fit when the window covers everything") {
    // m = 5 design points; enormous bandwidth flattens the kernel weights so the
    // local fit becomes the global least-squares line
    const int m = 5, n = 5;
    const auto diag = hat_diagonal(m, n, 1e6, kBiweight);
    double xbar = 0.0;
    for (int i = 1; i <= m; ++i) xbar += static_cast<double>(i) / n;
    xbar /= m;
    double sxx = 0.0;
    for (int i = 1; i <= m; ++i) {
        const double d = static_cast<double>(i) / n - xbar;
        sxx += d * d;
    }
    for (int i = 1; i <= m; ++i) {
        const double d = static_cast<double>(i) / n - xbar;
        const double ols = 1.0 / m + d * d / sxx;
        CHECK(diag[i - 1] == doctest::Approx(ols).epsilon(1e-8));
    }
    // at moderate bandwidth the weighted dense oracle is the exact reference
    const auto diag2 = hat_diagonal(m, n, 1.5, kBiweight);
    for (int i = 1; i <= m; ++i) {
        const auto row = oracles::smoother_row(m, n, static_cast<double>(i) / n, 1.5, kBiweight);
        CHECK(diag2[i - 1] == doctest::Approx(row[i - 1]).epsilon(1e-12));
    }
}

TEST_CASE("degenerate windows are rejected") {
    const int n = 200;
    std::vector<double> y(20, 1.0); // m = 20 points at 1/200..20/200
    // grid point far beyond the data keeps every kernel weight at zero
    CHECK_THROWS_AS(local_linear_fit(y, n, {0.9}, 0.01, kBiweight), DegenerateWindow);
    CHECK_THROWS_AS(local_linear_fit({1.0}, n, {0.005}, 0.2, kBiweight), DegenerateWindow);
    CHECK_THROWS_AS(gcv_select(y, n, {0.001, 0.002}, kBiweight), AllDegenerate);
}

TEST_CASE("gcv selects the argmin and records all scores") {
    std::mt19937_64 rng(7);
    const int n = 80;
    auto y = oracles::random_vector(rng, n);
    for (int i = 1; i <= n; ++i) y[i - 1] += 2.0 * std::sin(2 * M_PI * i / n);
    const auto grid = default_bandwidth_grid(n, n);
    const auto search = gcv_select(y, n, grid, kBiweight);
    REQUIRE(search.scores.size() == grid.size());
    double best = search.scores[0];
    for (double s : search.scores) best = std::min(best, s);
    bool found = false;
    for (std::size_t c = 0; c < grid.size(); ++c)
        if (grid[c] == search.selected) {
            CHECK(search.scores[c] == doctest::Approx(best).epsilon(1e-15));
            found = true;
        }
    CHECK(found);
    // scores agree with the dense brute-force evaluation
    for (std::size_t c = 0; c < grid.size(); c += 5)
        CHECK(search.scores[c] ==
              doctest::Approx(oracles::gcv_score(y, n, grid[c], kBiweight)).epsilon(1e-10));
}

TEST_CASE("near-noiseless linear data selects the largest candidate") {
    std::mt19937_64 rng(99);
    const int n = 60;
    std::vector<double> y(n);
    for (int i = 1; i <= n; ++i) y[i - 1] = 0.7 * i / n;
    for (auto& v : y) v += 1e-8 * std::generate_canonical<double, 53>(rng);
    const auto grid = default_bandwidth_grid(n, n);
    const auto search = gcv_select(y, n, grid, kBiweight);
    CHECK(search.selected == doctest::Approx(grid.back()).epsilon(1e-15));
}

TEST_CASE("shift and scale equivariance of the fit, scale invariance of gcv") {
    std::mt19937_64 rng(31337);
    const int n = 70;
    auto y = oracles::random_vector(rng, n);
    for (int i = 1; i <= n; ++i) y[i - 1] += std::cos(2 * M_PI * i / n);
    const auto grid = design_grid(n, n);
    const auto base = local_linear_fit(y, n, grid, 0.2, kBiweight);

    auto shifted = y;
    for (auto& v : shifted) v += 3.25;
    const auto fit_shift = local_linear_fit(shifted, n, grid, 0.2, kBiweight);
    for (int i = 0; i < n; ++i)
        CHECK(fit_shift.level[i] - base.level[i] == doctest::Approx(3.25).epsilon(1e-10));

    auto scaled = y;
    for (auto& v : scaled) v *= -4.0;
    const auto fit_scale = local_linear_fit(scaled, n, grid, 0.2, kBiweight);
    for (int i = 0; i < n; ++i)
        CHECK(fit_scale.level[i] == doctest::Approx(-4.0 * base.level[i]).epsilon(1e-10));

    const auto cands = default_bandwidth_grid(n, n);
    CHECK(gcv_select(y, n, cands, kBiweight).selected ==
          gcv_select(scaled, n, cands, kBiweight).selected);
}

TEST_CASE("default bandwidth grid spans [max(0.6 n^{-1/5}, 4/m), 0.5]") {
    const auto grid = default_bandwidth_grid(500, 500);
    REQUIRE(grid.size() == 20);
    CHECK(grid.front() == doctest::Approx(0.6 * std::pow(500.0, -0.2)).epsilon(1e-12));
    CHECK(grid.back() == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
    // tiny window: the 4/m floor takes over
    const auto small = default_bandwidth_grid(10, 2000);
    CHECK(small.front() == doctest::Approx(0.4).epsilon(1e-12));
}
