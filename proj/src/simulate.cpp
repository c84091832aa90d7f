#include "lsts/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lsts/bandselect.hpp"
#include "lsts/errors.hpp"
#include "lsts/stats.hpp"

namespace lsts {

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_value(MeanKind mean, double t) {
    switch (mean) {
        case MeanKind::I: return 2.0 * std::sin(2.0 * kPi * t);
        case MeanKind::II: return 2.0 - 8.0 * (t - 0.5) * (t - 0.5);
        case MeanKind::III: return 0.0;
    }
    return 0.0;
}

// time-varying AR factors of the order-6 models
std::array<double, 6> tv6_factors(double t) {
    return {0.6 * std::sin(2.0 * kPi * (t - 0.05)),
            0.3 * std::cos(3.0 * kPi * t) * std::cos(3.0 * kPi * t),
            std::exp(2.0 * (t - 0.6)) / 3.0 - 0.4,
            -0.4 * std::sin(6.0 * kPi * t) - 0.1,
            (t - 0.3) * (t - 0.3) - 0.2,
            0.2};
}

double tv6_scale(double t) { return std::sqrt(1.0 + 0.5 * std::sin(2.0 * kPi * t)); }

// Length at which the analytic tail bound for a product of `factors`
// geometric series with ratio <= rho falls three decades below tol.
int generous_length(double rho, int factors, double tol) {
    if (rho < 1e-12) return factors + 1;
    const double target = std::log(tol) - 3.0 * std::log(10.0);
    for (int j = factors; j < 100000; ++j) {
        const double log_comb =
            std::lgamma(j + factors) - std::lgamma(j + 1.0) - std::lgamma(factors);
        const double log_tail = log_comb + j * std::log(rho) - std::log1p(-rho);
        if (log_tail < target) return j;
    }
    throw UnstableFilter("moving-average tail does not decay");
}

// Trim coefficients so the dropped absolute tail stays below tol.
void trim_tail(std::vector<double>& c, double tol) {
    double tail = 0.0;
    std::size_t keep = c.size();
    while (keep > 1) {
        const double next = tail + std::fabs(c[keep - 1]);
        if (next > tol) break;
        tail = next;
        --keep;
    }
    c.resize(keep);
}

// Divide by (1 - r z): out[j] = in[j] + r out[j-1].
void apply_ar_factor(std::vector<double>& c, double r) {
    for (std::size_t j = 1; j < c.size(); ++j) c[j] += r * c[j - 1];
}

double model_c_factor(double t) { return (std::exp(4.0 * (t - 0.5) * (t - 0.5)) + 1.0) / 6.0; }

const double kMeanAbsNormal = std::sqrt(2.0 / kPi);

} // namespace

double InnovationLaw::sample(std::mt19937_64& rng) const {
    switch (family_) {
        case InnovationFamily::std_normal: {
            std::normal_distribution<double> dist(0.0, 1.0);
            return dist(rng);
        }
        case InnovationFamily::std_t6: {
            std::student_t_distribution<double> dist(6.0);
            return dist(rng) / std::sqrt(1.5);
        }
        case InnovationFamily::std_chisq5: {
            std::chi_squared_distribution<double> dist(5.0);
            return (dist(rng) - 5.0) / std::sqrt(10.0);
        }
        case InnovationFamily::std_chisq6: {
            std::chi_squared_distribution<double> dist(6.0);
            return (dist(rng) - 6.0) / std::sqrt(12.0);
        }
    }
    throw DomainError("unknown innovation family");
}

double InnovationLaw::quantile(double p) const {
    switch (family_) {
        case InnovationFamily::std_normal: return normal_quantile(p);
        case InnovationFamily::std_chisq5: return (chisq_quantile(p, 5.0) - 5.0) / std::sqrt(10.0);
        case InnovationFamily::std_chisq6: return (chisq_quantile(p, 6.0) - 6.0) / std::sqrt(12.0);
        case InnovationFamily::std_t6: break;
    }
    throw Unsupported("quantile not available for this innovation family");
}

double InnovationLaw::cdf(double x) const {
    switch (family_) {
        case InnovationFamily::std_normal: return normal_cdf(x);
        case InnovationFamily::std_chisq5: return chisq_cdf(x * std::sqrt(10.0) + 5.0, 5.0);
        case InnovationFamily::std_chisq6: return chisq_cdf(x * std::sqrt(12.0) + 6.0, 6.0);
        case InnovationFamily::std_t6: break;
    }
    throw Unsupported("cdf not available for this innovation family");
}

InnovationFamily InnovationLaw::parse(const std::string& name) {
    if (name == "normal" || name == "std_normal") return InnovationFamily::std_normal;
    if (name == "t6" || name == "std_t6") return InnovationFamily::std_t6;
    if (name == "chisq5" || name == "std_chisq5") return InnovationFamily::std_chisq5;
    if (name == "chisq6" || name == "std_chisq6") return InnovationFamily::std_chisq6;
    throw DomainError("unknown innovation family: " + name);
}

const char* InnovationLaw::name(InnovationFamily f) {
    switch (f) {
        case InnovationFamily::std_normal: return "std_normal";
        case InnovationFamily::std_t6: return "std_t6";
        case InnovationFamily::std_chisq5: return "std_chisq5";
        case InnovationFamily::std_chisq6: return "std_chisq6";
    }
    return "?";
}

ProcessKind parse_process_kind(const std::string& name) {
    if (name == "a") return ProcessKind::model_a;
    if (name == "b") return ProcessKind::model_b;
    if (name == "c") return ProcessKind::model_c;
    if (name == "d") return ProcessKind::model_d;
    if (name == "tvar6") return ProcessKind::tvar6;
    if (name == "tvma6") return ProcessKind::tvma6;
    throw DomainError("unknown process kind: " + name);
}

MeanKind parse_mean_kind(const std::string& name) {
    if (name == "I") return MeanKind::I;
    if (name == "II") return MeanKind::II;
    if (name == "III") return MeanKind::III;
    throw DomainError("unknown mean function: " + name);
}

const char* to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::model_a: return "a";
        case ProcessKind::model_b: return "b";
        case ProcessKind::model_c: return "c";
        case ProcessKind::model_d: return "d";
        case ProcessKind::tvar6: return "tvar6";
        case ProcessKind::tvma6: return "tvma6";
    }
    return "?";
}

const char* to_string(MeanKind mean) {
    switch (mean) {
        case MeanKind::I: return "I";
        case MeanKind::II: return "II";
        case MeanKind::III: return "III";
    }
    return "?";
}

ProcessSpec ProcessSpec::make(ProcessKind kind, MeanKind mean) {
    InnovationFamily innov = InnovationFamily::std_normal;
    if (kind == ProcessKind::model_b) innov = InnovationFamily::std_t6;
    if (kind == ProcessKind::model_d) innov = InnovationFamily::std_chisq5;
    return make(kind, mean, innov);
}

ProcessSpec ProcessSpec::make(ProcessKind kind, MeanKind mean, InnovationFamily innov) {
    return ProcessSpec(kind, mean, InnovationLaw(innov));
}

double ProcessSpec::mean_at(double t) const { return mean_value(mean_, t); }

double ProcessSpec::scale_at(double t) const {
    switch (kind_) {
        case ProcessKind::model_a: return 1.0;
        case ProcessKind::model_b: return 0.8;
        case ProcessKind::model_c: return model_c_factor(t);
        case ProcessKind::model_d: return 0.25 * (std::cos(kPi * t) + 2.0);
        case ProcessKind::tvar6:
        case ProcessKind::tvma6: return tv6_scale(t);
    }
    return 1.0;
}

std::vector<double> ProcessSpec::ma_coefficients(double t) const {
    switch (kind_) {
        case ProcessKind::model_a: {
            const double r = 0.3;
            std::vector<double> c(generous_length(r, 1, trunc_tol_), 0.0);
            c[0] = 1.0;
            apply_ar_factor(c, r);
            trim_tail(c, trunc_tol_);
            return c;
        }
        case ProcessKind::model_b: {
            const double r = 0.7 * std::sin(2.0 * kPi * t);
            if (std::fabs(r) >= 1.0 - 1e-9) throw UnstableFilter("AR ratio at or above one");
            std::vector<double> c(generous_length(std::fabs(r), 1, trunc_tol_), 0.0);
            c[0] = 1.0;
            apply_ar_factor(c, r);
            trim_tail(c, trunc_tol_);
            return c;
        }
        case ProcessKind::model_d: return {1.0, 0.9, -0.6};
        case ProcessKind::tvar6: {
            const auto a = tv6_factors(t);
            double rho = 0.0;
            for (double r : a) rho = std::max(rho, std::fabs(r));
            if (rho >= 1.0 - 1e-9) throw UnstableFilter("AR factor at or above one");
            std::vector<double> c(generous_length(rho, 6, trunc_tol_), 0.0);
            c[0] = 1.0;
            for (double r : a) apply_ar_factor(c, r);
            trim_tail(c, trunc_tol_);
            return c;
        }
        case ProcessKind::tvma6: {
            const auto a = tv6_factors(t);
            std::vector<double> c{1.0};
            for (double r : a) {
                std::vector<double> next(c.size() + 1, 0.0);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    next[j] += c[j];
                    next[j + 1] -= r * c[j];
                }
                c = std::move(next);
            }
            return c; // exactly 7 coefficients
        }
        case ProcessKind::model_c: break;
    }
    throw Unsupported("model (c) is nonlinear and has no MA representation");
}

std::vector<double> sample_innovations(const InnovationLaw& law, int count,
                                       std::mt19937_64& rng) {
    if (count < 1) throw DomainError("innovation count must be positive");
    std::vector<double> draws(static_cast<std::size_t>(count));
    for (auto& d : draws) d = law.sample(rng);
    return draws;
}

SimulatedPath simulate_path(const ProcessSpec& spec, int n, std::mt19937_64& rng) {
    if (n < 10) throw DomainError("path length must be at least 10");
    SimulatedPath path;
    path.x.resize(static_cast<std::size_t>(n));
    path.errors.resize(static_cast<std::size_t>(n));

    if (spec.kind() == ProcessKind::model_c) {
        // eps_i = a(t) e_i + 0.6 (|e_{i-1}| - E|e|), one pre-sample draw
        const auto e = sample_innovations(spec.law(), n + 1, rng);
        for (int i = 1; i <= n; ++i) {
            const double t = static_cast<double>(i) / n;
            path.errors[i - 1] = model_c_factor(t) * e[static_cast<std::size_t>(i)] +
                                 0.6 * (std::fabs(e[static_cast<std::size_t>(i - 1)]) -
                                        kMeanAbsNormal);
            path.x[i - 1] = spec.mean_at(t) + path.errors[i - 1];
        }
        return path;
    }

    // one innovation stream shared across time; buffer covers the longest filter
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n));
    int buffer = 0;
    for (int i = 1; i <= n; ++i) {
        coeffs[i - 1] = spec.ma_coefficients(static_cast<double>(i) / n);
        buffer = std::max(buffer, static_cast<int>(coeffs[i - 1].size()) - 1);
    }
    const auto e = sample_innovations(spec.law(), n + buffer, rng); // e[j] = eps-innov_{j - buffer + 1}
    for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const auto& c = coeffs[i - 1];
        double sum = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            sum += c[j] * e[static_cast<std::size_t>(i + buffer - 1 - static_cast<int>(j))];
        path.errors[i - 1] = spec.scale_at(t) * sum;
        path.x[i - 1] = spec.mean_at(t) + path.errors[i - 1];
    }
    return path;
}

Eigen::MatrixXd true_covariance(const ProcessSpec& spec, int n) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    if (spec.kind() == ProcessKind::model_c) {
        const double var_abs = 1.0 - 2.0 / kPi;
        for (int i = 1; i <= n; ++i) {
            const double a = model_c_factor(static_cast<double>(i) / n);
            cov(i - 1, i - 1) = a * a + 0.36 * var_abs;
        }
        return cov;
    }
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n));
    std::vector<double> scale(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        coeffs[i - 1] = spec.ma_coefficients(t);
        scale[i - 1] = spec.scale_at(t);
    }
    for (int i = 0; i < n; ++i) {
        const auto& ci = coeffs[static_cast<std::size_t>(i)];
        for (int j = i; j < n; ++j) {
            const auto& cj = coeffs[static_cast<std::size_t>(j)];
            const int d = j - i;
            const int rmax = std::min(static_cast<int>(ci.size()),
                                      static_cast<int>(cj.size()) - d);
            double sum = 0.0;
            for (int r = 0; r < rmax; ++r) sum += ci[static_cast<std::size_t>(r)] *
                                                  cj[static_cast<std::size_t>(r + d)];
            const double value = scale[static_cast<std::size_t>(i)] *
                                 scale[static_cast<std::size_t>(j)] * sum;
            cov(i, j) = value;
            cov(j, i) = value;
        }
    }
    return cov;
}

std::mt19937_64 replication_rng(unsigned long long master_seed, unsigned long long index) {
    std::seed_seq seq{static_cast<unsigned int>(master_seed & 0xffffffffu),
                      static_cast<unsigned int>(master_seed >> 32),
                      static_cast<unsigned int>(index & 0xffffffffu),
                      static_cast<unsigned int>(index >> 32)};
    return std::mt19937_64(seq);
}

} // namespace lsts
