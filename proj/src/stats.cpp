#include "lsts/stats.hpp"

#include <cmath>
#include <limits>

#include "lsts/bandselect.hpp"
#include "lsts/errors.hpp"

namespace lsts {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

namespace {

// series expansion, x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw DomainError("gamma_p arguments out of range");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chisq_cdf(double x, double nu) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * nu, 0.5 * x);
}

double chisq_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chisq_quantile argument outside (0,1)");
    // bracket then Newton with bisection fallback
    double lo = 0.0, hi = nu;
    while (chisq_cdf(hi, nu) < p) hi *= 2.0;
    double x = nu * std::pow(1.0 - 2.0 / (9.0 * nu) +
                                 normal_quantile(p) * std::sqrt(2.0 / (9.0 * nu)),
                             3.0); // Wilson-Hilferty start
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = chisq_cdf(x, nu) - p;
        if (f > 0.0) hi = x;
        else lo = x;
        const double density =
            std::exp((0.5 * nu - 1.0) * std::log(x) - 0.5 * x - std::lgamma(0.5 * nu) -
                     0.5 * nu * std::log(2.0));
        double next = x - f / density;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-12 * std::max(1.0, x)) return next;
        x = next;
    }
    return x;
}

} // namespace lsts
