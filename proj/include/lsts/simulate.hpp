#ifndef LSTS_SIMULATE_HPP
#define LSTS_SIMULATE_HPP

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

namespace lsts {

enum class InnovationFamily { std_normal, std_t6, std_chisq5, std_chisq6 };

/// Innovation law standardized to mean 0, variance 1:
/// t(6) scaled by 1/sqrt(1.5); chi^2(nu) as (X-nu)/sqrt(2 nu).
class InnovationLaw {
  public:
    explicit InnovationLaw(InnovationFamily f) : family_(f) {}

    InnovationFamily family() const { return family_; }

    double sample(std::mt19937_64& rng) const;

    /// Quantile/CDF of the standardized law. Unsupported for std_t6.
    double quantile(double p) const;
    double cdf(double x) const;

    static InnovationFamily parse(const std::string& name);
    static const char* name(InnovationFamily f);

  private:
    InnovationFamily family_;
};

enum class ProcessKind { model_a, model_b, model_c, model_d, tvar6, tvma6 };
enum class MeanKind { I, II, III };

ProcessKind parse_process_kind(const std::string& name);
MeanKind parse_mean_kind(const std::string& name);
const char* to_string(ProcessKind kind);
const char* to_string(MeanKind mean);

/// Locally stationary process in frozen-time moving-average form. Linear
/// kinds expose the coefficients c_j(t) with a truncated tail below the
/// configured tolerance; the nonlinear kind (model_c) is handled directly.
class ProcessSpec {
  public:
    static ProcessSpec make(ProcessKind kind, MeanKind mean);
    static ProcessSpec make(ProcessKind kind, MeanKind mean, InnovationFamily innov);

    ProcessKind kind() const { return kind_; }
    MeanKind mean() const { return mean_; }
    const InnovationLaw& law() const { return law_; }
    bool linear() const { return kind_ != ProcessKind::model_c; }

    double mean_at(double t) const;

    /// sigma(t): the scale multiplying the frozen-time filter (and the
    /// one-step innovation scale used to standardize prediction errors).
    double scale_at(double t) const;

    /// Frozen-time MA coefficients c_0..c_J(t); sum of absolute values beyond
    /// the returned range is below truncation_tol(). Unsupported for model_c.
    std::vector<double> ma_coefficients(double t) const;

    double truncation_tol() const { return trunc_tol_; }
    void set_truncation_tol(double tol) { trunc_tol_ = tol; }

  private:
    ProcessSpec(ProcessKind kind, MeanKind mean, InnovationLaw law)
        : kind_(kind), mean_(mean), law_(law) {}

    ProcessKind kind_;
    MeanKind mean_;
    InnovationLaw law_;
    double trunc_tol_ = 1e-10;
};

struct SimulatedPath {
    std::vector<double> x;      ///< X_i = mu(i/n) + eps_i
    std::vector<double> errors; ///< eps_i
};

std::vector<double> sample_innovations(const InnovationLaw& law, int count,
                                       std::mt19937_64& rng);

/// Exact simulation through the frozen-time representation with a pre-sample
/// innovation buffer; model_c uses its explicit two-term formula.
SimulatedPath simulate_path(const ProcessSpec& spec, int n, std::mt19937_64& rng);

/// Dense true covariance of (eps_1,...,eps_n):
/// sigma_{ij} = sigma(t_i) sigma(t_j) sum_r c_r(t_i) c_{r+|i-j|}(t_j).
Eigen::MatrixXd true_covariance(const ProcessSpec& spec, int n);

/// Deterministic per-replication stream derived from (master_seed, index).
std::mt19937_64 replication_rng(unsigned long long master_seed, unsigned long long index);

} // namespace lsts

#endif
