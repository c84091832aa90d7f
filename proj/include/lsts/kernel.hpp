#ifndef LSTS_KERNEL_HPP
#define LSTS_KERNEL_HPP

#include <cmath>
#include <string>

#include "lsts/errors.hpp"

namespace lsts {

enum class KernelFamily { biweight, epanechnikov };

/// Symmetric density kernel supported on [-1,1].
///
/// The biweight kernel (15/16)(1-u^2)^2 is continuously differentiable on the
/// whole real line and is the default throughout; Epanechnikov is kept for
/// comparison runs.
class KernelSpec {
  public:
    static KernelSpec biweight() { return KernelSpec(KernelFamily::biweight); }
    static KernelSpec epanechnikov() { return KernelSpec(KernelFamily::epanechnikov); }

    static KernelSpec parse(const std::string& name) {
        if (name == "biweight") return biweight();
        if (name == "epanechnikov") return epanechnikov();
        throw DomainError("unknown kernel family: " + name);
    }

    KernelFamily family() const { return family_; }

    double operator()(double u) const {
        const double a = std::fabs(u);
        if (a >= 1.0) return 0.0;
        const double w = 1.0 - u * u;
        if (family_ == KernelFamily::biweight) return 0.9375 * w * w;
        return 0.75 * w;
    }

  private:
    explicit KernelSpec(KernelFamily f) : family_(f) {}
    KernelFamily family_;
};

} // namespace lsts

#endif
