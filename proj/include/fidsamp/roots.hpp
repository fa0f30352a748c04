#pragma once

#include <functional>
#include <limits>
#include <optional>

namespace fidsamp {

// Controls for find_root_monotone.
struct RootOptions {
  // Initial bracket.  When absent, a bracket is grown around `guess` by
  // doubling (additive steps on the full line, multiplicative steps when the
  // domain is the positive half line), up to max_expansions rounds.
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;
  double guess = 1.0;

  // Hard domain clamps for the expansion.
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();

  // Expansion is multiplicative iff the domain is nonnegative.
  int max_expansions = 60;

  // Stop when |f(x) - target| <= f_tol * max(1,|target|)
  //       or the bracket width <= x_tol * max(|a|,|b|), i.e. the width stop
  //       is relative to the iterate scale so tiny roots stay resolvable.
  double f_tol = 1e-10;
  double x_tol = 1e-12;

  int max_iterations = 200;
};

// Root of the monotone (increasing or decreasing) function f against
// `target`.  Brent-style safeguarded secant/inverse-quadratic steps inside a
// maintained bracket; throws NoRootError when no sign change can be
// established within the expansion budget.
double find_root_monotone(const std::function<double(double)>& f, double target,
                          const RootOptions& opts = {});

}  // namespace fidsamp
