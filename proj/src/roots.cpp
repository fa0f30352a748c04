#include "fidsamp/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fidsamp/errors.hpp"

namespace fidsamp {

namespace {

struct Bracket {
  double a, b;    // a < b
  double ga, gb;  // g = f - target at the endpoints, opposite signs
};

bool straddles(double ga, double gb) {
  return (ga <= 0.0 && gb >= 0.0) || (ga >= 0.0 && gb <= 0.0);
}

// Grow a bracket around opts.guess.  Multiplicative growth on a nonnegative
// domain (scale-type parameters), symmetric doubling steps otherwise.
Bracket expand_bracket(const std::function<double(double)>& f, double target,
                       const RootOptions& opts) {
  const bool multiplicative = opts.domain_lo >= 0.0;
  double a, b;
  if (multiplicative) {
    double g0 = opts.guess;
    if (!(g0 > 0.0)) g0 = 1.0;
    a = b = g0;
  } else {
    a = b = opts.guess;
  }
  a = std::max(a, opts.domain_lo);
  b = std::min(b, opts.domain_hi);
  double ga = f(a) - target;
  double gb = (a == b) ? ga : f(b) - target;
  double step = std::max(1.0, std::fabs(opts.guess)) * 0.5;
  for (int round = 0; round < opts.max_expansions; ++round) {
    if (straddles(ga, gb)) return {a, b, ga, gb};
    if (multiplicative) {
      const double na = std::max(a * 0.5, opts.domain_lo);
      const double nb = std::min(b * 2.0, opts.domain_hi);
      if (na != a) { a = na; ga = f(a) - target; }
      if (straddles(ga, gb)) return {a, b, ga, gb};
      if (nb != b) { b = nb; gb = f(b) - target; }
    } else {
      const double na = std::max(a - step, opts.domain_lo);
      const double nb = std::min(b + step, opts.domain_hi);
      step *= 2.0;
      if (na != a) { a = na; ga = f(a) - target; }
      if (straddles(ga, gb)) return {a, b, ga, gb};
      if (nb != b) { b = nb; gb = f(b) - target; }
    }
  }
  if (straddles(ga, gb)) return {a, b, ga, gb};
  throw NoRootError("find_root_monotone: no sign change after bracket expansion");
}

}  // namespace

double find_root_monotone(const std::function<double(double)>& f, double target,
                          const RootOptions& opts) {
  if (!f) throw std::invalid_argument("find_root_monotone: empty function");

  Bracket br{};
  if (opts.bracket_lo && opts.bracket_hi) {
    double a = *opts.bracket_lo, b = *opts.bracket_hi;
    if (!(a <= b)) std::swap(a, b);
    const double ga = f(a) - target;
    const double gb = f(b) - target;
    if (!straddles(ga, gb))
      throw NoRootError("find_root_monotone: supplied bracket does not straddle the target");
    br = {a, b, ga, gb};
  } else {
    br = expand_bracket(f, target, opts);
  }

  const double fscale = std::max(1.0, std::fabs(target));

  // Brent: a is the contrapoint, b the best iterate.
  double a = br.a, b = br.b, fa = br.ga, fb = br.gb;
  if (std::fabs(fa) < std::fabs(fb)) { std::swap(a, b); std::swap(fa, fb); }
  double c = a, fc = fa;
  bool mflag = true;
  double d = 0.0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (std::fabs(fb) <= opts.f_tol * fscale) return b;
    // Width stop is relative to the iterate scale so roots far below 1
    // (e.g. extreme quantiles) are still resolved; the denormal floor only
    // matters when the root is exactly zero.
    const double xscale = std::max({std::fabs(a), std::fabs(b),
                                    std::numeric_limits<double>::min()});
    if (std::fabs(b - a) <= opts.x_tol * xscale) return b;

    double s;
    if (fa != fc && fb != fc) {
      // Inverse quadratic interpolation.
      s = a * fb * fc / ((fa - fb) * (fa - fc)) +
          b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      // Secant.
      s = b - fb * (b - a) / (fb - fa);
    }

    const double lo = std::min((3.0 * a + b) / 4.0, b);
    const double hi = std::max((3.0 * a + b) / 4.0, b);
    const bool bad_interp = !(s > lo && s < hi) ||
        (mflag && std::fabs(s - b) >= std::fabs(b - c) / 2.0) ||
        (!mflag && std::fabs(s - b) >= std::fabs(c - d) / 2.0) ||
        (mflag && std::fabs(b - c) < opts.x_tol * xscale) ||
        (!mflag && std::fabs(c - d) < opts.x_tol * xscale);
    if (bad_interp) {
      s = 0.5 * (a + b);
      mflag = true;
    } else {
      mflag = false;
    }

    const double fs = f(s) - target;
    d = c;
    c = b;
    fc = fb;
    if ((fa < 0.0) != (fs < 0.0)) {
      b = s; fb = fs;
    } else {
      a = s; fa = fs;
    }
    if (std::fabs(fa) < std::fabs(fb)) { std::swap(a, b); std::swap(fa, fb); }
  }
  return b;
}

}  // namespace fidsamp
