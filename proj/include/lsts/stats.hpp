#ifndef LSTS_STATS_HPP
#define LSTS_STATS_HPP

namespace lsts {

double normal_cdf(double x);
double normal_pdf(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Chi-square CDF and quantile with nu degrees of freedom.
double chisq_cdf(double x, double nu);
double chisq_quantile(double p, double nu);

} // namespace lsts

#endif
