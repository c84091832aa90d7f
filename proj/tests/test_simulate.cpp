#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lsts/errors.hpp"
#include "lsts/simulate.hpp"

using namespace lsts;

TEST_CASE("innovation laws are standardized to mean zero and unit variance") {
    const int N = 1000000;
    for (auto family : {InnovationFamily::std_normal, InnovationFamily::std_t6,
                        InnovationFamily::std_chisq5, InnovationFamily::std_chisq6}) {
        InnovationLaw law(family);
        auto rng = replication_rng(42, static_cast<unsigned long long>(family));
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < N; ++i) {
            const double x = law.sample(rng);
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / N;
        const double var = sumsq / N - mean * mean;
        CHECK(std::fabs(mean) < 0.004);
        CHECK(std::fabs(var - 1.0) < 0.012);
    }
}

TEST_CASE("innovation quantiles and cdf agree with reference values") {
    InnovationLaw normal(InnovationFamily::std_normal);
    CHECK(normal.quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(normal.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));

    InnovationLaw chi6(InnovationFamily::std_chisq6);
    // (chi2_6 quantiles - 6)/sqrt(12), reference values from a high-precision table
    CHECK(chi6.quantile(0.5) == doctest::Approx(-0.18818136561128537).epsilon(1e-7));
    CHECK(chi6.quantile(0.95) == doctest::Approx(1.9028273347812443).epsilon(1e-7));
    CHECK(chi6.quantile(0.05) == doctest::Approx(-1.2599564304347142).epsilon(1e-7));
    CHECK(chi6.cdf(chi6.quantile(0.3)) == doctest::Approx(0.3).epsilon(1e-9));

    InnovationLaw t6(InnovationFamily::std_t6);
    CHECK_THROWS_AS(t6.quantile(0.5), Unsupported);
}

TEST_CASE("mean functions") {
    const auto specI = ProcessSpec::make(ProcessKind::model_a, MeanKind::I);
    const auto specII = ProcessSpec::make(ProcessKind::model_a, MeanKind::II);
    const auto specIII = ProcessSpec::make(ProcessKind::model_a, MeanKind::III);
    CHECK(specI.mean_at(0.25) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(specI.mean_at(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(specII.mean_at(0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(specII.mean_at(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(specIII.mean_at(0.77) == 0.0);
}

TEST_CASE("moving-average coefficients") {
    // model a: geometric with ratio 0.3
    const auto a = ProcessSpec::make(ProcessKind::model_a, MeanKind::III);
    const auto ca = a.ma_coefficients(0.31);
    CHECK(ca[0] == doctest::Approx(1.0));
    CHECK(ca[3] == doctest::Approx(0.027).epsilon(1e-12));

    // model b at t = 0.5: the AR ratio vanishes, single coefficient
    const auto b = ProcessSpec::make(ProcessKind::model_b, MeanKind::III);
    CHECK(b.ma_coefficients(0.5).size() == 1);
    CHECK(b.scale_at(0.5) == doctest::Approx(0.8));

    // tvma6 has exactly 7 coefficients, leading 1
    const auto ma = ProcessSpec::make(ProcessKind::tvma6, MeanKind::III);
    const auto cm = ma.ma_coefficients(0.37);
    REQUIRE(cm.size() == 7);
    CHECK(cm[0] == doctest::Approx(1.0));

    // model c has no linear representation
    const auto c = ProcessSpec::make(ProcessKind::model_c, MeanKind::III);
    CHECK_THROWS_AS(c.ma_coefficients(0.4), Unsupported);
    CHECK(!c.linear());
}

TEST_CASE("truncated tails stay below the tolerance") {
    for (auto kind : {ProcessKind::model_a, ProcessKind::model_b, ProcessKind::tvar6}) {
        auto spec = ProcessSpec::make(kind, MeanKind::III);
        auto long_spec = ProcessSpec::make(kind, MeanKind::III);
        long_spec.set_truncation_tol(1e-16);
        for (double t = 0.05; t <= 1.0; t += 0.05) {
            const auto c = spec.ma_coefficients(t);
            const auto full = long_spec.ma_coefficients(t);
            REQUIRE(full.size() >= c.size());
            double tail = 0.0;
            for (std::size_t j = c.size(); j < full.size(); ++j) tail += std::fabs(full[j]);
            CHECK(tail <= 1e-10);
        }
    }
}

TEST_CASE("paths are deterministic given the rng state") {
    const auto spec = ProcessSpec::make(ProcessKind::tvar6, MeanKind::I);
    auto rng1 = replication_rng(7, 3);
    auto rng2 = replication_rng(7, 3);
    const auto p1 = simulate_path(spec, 64, rng1);
    const auto p2 = simulate_path(spec, 64, rng2);
    CHECK(p1.x == p2.x);
    CHECK(p1.errors == p2.errors);
    auto rng3 = replication_rng(7, 4);
    const auto p3 = simulate_path(spec, 64, rng3);
    CHECK(p1.x != p3.x);
    CHECK_THROWS_AS(simulate_path(spec, 5, rng1), DomainError);
}

TEST_CASE("path mean structure follows the mean function") {
    const auto spec = ProcessSpec::make(ProcessKind::model_a, MeanKind::I);
    auto rng = replication_rng(123, 0);
    const auto path = simulate_path(spec, 200, rng);
    for (int i = 1; i <= 200; ++i)
        CHECK(path.x[i - 1] - path.errors[i - 1] ==
              doctest::Approx(2.0 * std::sin(2.0 * M_PI * i / 200.0)).epsilon(1e-12));
}

TEST_CASE("true covariance structures") {
    // model a: Toeplitz with gamma_k = 0.3^k / 0.91
    const auto a = ProcessSpec::make(ProcessKind::model_a, MeanKind::III);
    const auto Ca = true_covariance(a, 40);
    for (int k : {0, 1, 2, 5})
        CHECK(Ca(0, k) == doctest::Approx(std::pow(0.3, k) / 0.91).epsilon(1e-9));
    CHECK(Ca(3, 7) == doctest::Approx(Ca(10, 14)).epsilon(1e-12));

    // model c: diagonal
    const auto c = ProcessSpec::make(ProcessKind::model_c, MeanKind::III);
    const auto Cc = true_covariance(c, 30);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j)
            if (i != j) CHECK(Cc(i, j) == 0.0);
    const double a05 = (std::exp(4.0 * 0.25) + 1.0) / 6.0; // at t near 1
    CHECK(Cc(29, 29) == doctest::Approx(a05 * a05 + 0.36 * (1.0 - 2.0 / M_PI)).epsilon(1e-10));

    // model d: entries vanish beyond |i-j| = 2; known values at t = 0.5
    const auto d = ProcessSpec::make(ProcessKind::model_d, MeanKind::III);
    const int n = 1000;
    const auto Cd = true_covariance(d, n);
    for (int j = 3; j < 10; ++j) CHECK(Cd(0, j) == 0.0);
    // frozen-time values: gamma_0(0.5) = 0.5425, gamma_2(0.5) = -0.15
    CHECK(Cd(n / 2 - 1, n / 2 - 1) == doctest::Approx(0.5425).epsilon(1e-3));
    const double s2 = std::pow((std::cos(M_PI * 0.5) + 2.0) / 4.0, 2);
    CHECK(s2 * 2.17 == doctest::Approx(0.5425).epsilon(1e-12));

    // PSD up to truncation tolerance
    for (auto kind : {ProcessKind::model_b, ProcessKind::tvar6, ProcessKind::tvma6}) {
        const auto spec = ProcessSpec::make(kind, MeanKind::III);
        const auto C = true_covariance(spec, 100);
        CHECK((C - C.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("model b frozen-time variance formula at fixed t") {
    // Var(eps_i) = 0.64 / (1 - 0.49 sin^2(2 pi t)) for the frozen process
    const auto spec = ProcessSpec::make(ProcessKind::model_b, MeanKind::III);
    const auto C = true_covariance(spec, 100);
    for (int i : {24, 49, 74}) {
        const double t = static_cast<double>(i + 1) / 100.0;
        const double s = std::sin(2.0 * M_PI * t);
        CHECK(C(i, i) == doctest::Approx(0.64 / (1.0 - 0.49 * s * s)).epsilon(1e-8));
    }
}

TEST_CASE("parsing helpers") {
    CHECK(parse_process_kind("tvar6") == ProcessKind::tvar6);
    CHECK_THROWS_AS(parse_process_kind("z"), DomainError);
    CHECK(parse_mean_kind("II") == MeanKind::II);
    CHECK_THROWS_AS(parse_mean_kind("IV"), DomainError);
    CHECK(InnovationLaw::parse("chisq6") == InnovationFamily::std_chisq6);
    CHECK(std::string(to_string(ProcessKind::model_d)) == "d");
}
