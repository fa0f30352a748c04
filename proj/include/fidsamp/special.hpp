#pragma once

#include <optional>

namespace fidsamp {

// Digamma function for x > 0.  Absolute error below 1e-10 on (0, 1e6]:
// upward recurrence to x >= 10, then the asymptotic series in 1/x^2
// truncated after the 1/x^10 term.
double digamma(double x);

// Log-gamma wrapper (thread-safe; uses lgamma_r where available).
double log_gamma(double x);

// Regularized lower incomplete gamma P(alpha, x) = gamma(alpha,x)/Gamma(alpha),
// i.e. the CDF of Gamma(alpha, 1).  Series for x < alpha+1, continued
// fraction otherwise; absolute error ~1e-14.
double gamma_cdf(double x, double alpha);

// Inverse of gamma_cdf in x: the u-quantile of Gamma(alpha, 1).  Bracketed
// bisection/secant iteration on the CDF itself, so monotonicity of the
// quantile map is inherited from the CDF rather than from any closed-form
// approximation.  `hint` (if given and > 0) seeds the bracket near an
// expected solution, which makes repeated nearby inversions cheap.
double gamma_inv_cdf(double u, double alpha,
                     std::optional<double> hint = std::nullopt);

// Standard normal CDF via erfc.
double normal_cdf(double x);

}  // namespace fidsamp
