#include <doctest.h>

#include "lsts/kernel.hpp"
#include "oracles.hpp"

using lsts::KernelSpec;

TEST_CASE("kernels are symmetric, nonnegative densities on [-1,1]") {
    for (auto kernel : {KernelSpec::biweight(), KernelSpec::epanechnikov()}) {
        for (double u = 0.0; u <= 1.2; u += 0.01) {
            CHECK(kernel(u) == doctest::Approx(kernel(-u)).epsilon(1e-15));
            CHECK(kernel(u) >= 0.0);
        }
        CHECK(kernel(1.0) == 0.0);
        CHECK(kernel(-1.3) == 0.0);
        const double integral =
            oracles::trapezoid([&](double u) { return kernel(u); }, -1.0, 1.0, 20000);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("biweight is continuously differentiable across the support edge") {
    const auto kernel = KernelSpec::biweight();
    const double h = 1e-6;
    // one-sided difference quotients at +-1 agree (both ~0)
    const double inside = (kernel(1.0) - kernel(1.0 - h)) / h;
    const double outside = (kernel(1.0 + h) - kernel(1.0)) / h;
    CHECK(std::fabs(inside - outside) < 1e-4);
    CHECK(std::fabs(inside) < 1e-4);
}

TEST_CASE("kernel parsing") {
    CHECK(KernelSpec::parse("biweight").family() == lsts::KernelFamily::biweight);
    CHECK(KernelSpec::parse("epanechnikov").family() == lsts::KernelFamily::epanechnikov);
    CHECK_THROWS_AS(KernelSpec::parse("box"), lsts::DomainError);
}
