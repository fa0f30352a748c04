#pragma once

// Shared helpers for the test suites: independent numeric oracles and small
// generators.  Everything here is deliberately written with different
// algorithms (or much higher internal precision) than the library code it
// checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fidsamp/linalg.hpp"

namespace testutil {

// Digamma oracle: long-double recurrence up to x >= 32, asymptotic series
// through the 1/x^18 Bernoulli term.  Absolute error far below 1e-13, and
// both shift point and truncation order differ from the library routine.
inline long double digamma_oracle(long double x) {
  long double acc = 0.0L;
  while (x < 32.0L) {
    acc -= 1.0L / x;
    x += 1.0L;
  }
  const long double i2 = 1.0L / (x * x);
  // B_2/2, B_4/4, ... up to B_18/18 as series coefficients.
  const long double tail =
      i2 * (1.0L / 12.0L -
      i2 * (1.0L / 120.0L -
      i2 * (1.0L / 252.0L -
      i2 * (1.0L / 240.0L -
      i2 * (1.0L / 132.0L -
      i2 * (691.0L / 32760.0L -
      i2 * (1.0L / 12.0L -
      i2 * (3617.0L / 8160.0L -
      i2 * (43867.0L / 14364.0L)))))))));
  return acc + std::log(x) - 0.5L / x - tail;
}

// Adaptive Simpson quadrature, used to integrate gamma densities as an
// independent CDF oracle.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 40) {
  const auto simpson = [&f](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  std::function<double(double, double, double, int)> rec =
      [&](double lo, double hi, double whole, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid);
    const double right = simpson(mid, hi);
    if (d <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
  };
  return rec(a, b, simpson(a, b), depth);
}

// Gamma(alpha,1) CDF oracle by quadrature.  For alpha < 1 the density is
// singular at zero, so the integral is taken after the substitution
// t = s^(1/alpha), which gives the smooth form
//   P(alpha, x) = (1 / Gamma(alpha + 1)) * Int_0^{x^alpha} exp(-s^{1/alpha}) ds.
inline double gamma_cdf_oracle(double x, double alpha) {
  if (x <= 0.0) return 0.0;
  if (alpha < 1.0) {
    const double inv = 1.0 / alpha;
    const auto g = [inv](double s) {
      return s <= 0.0 ? 1.0 : std::exp(-std::pow(s, inv));
    };
    const double val = adaptive_simpson(g, 0.0, std::pow(x, alpha), 1e-13);
    return std::min(1.0, val / std::exp(std::lgamma(alpha + 1.0)));
  }
  const double lg = std::lgamma(alpha);
  const auto dens = [alpha, lg](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp((alpha - 1.0) * std::log(t) - t - lg);
  };
  return adaptive_simpson(dens, 0.0, x, 1e-13);
}

// Random symmetric positive definite matrix A = B B^T + eps I.
inline fidsamp::Matrix random_spd(int p, std::mt19937_64& eng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  fidsamp::Matrix b(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) b.at(i, j) = nd(eng);
  fidsamp::Matrix a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (int k = 0; k < p; ++k) s += b.at(i, k) * b.at(j, k);
      a.at(i, j) = s;
    }
  for (int i = 0; i < p; ++i) a.at(i, i) += 0.05 * p;
  return a;
}

// Two-sided Kolmogorov-Smirnov critical value, asymptotic form:
// c(alpha) * sqrt((n+m)/(n*m)) with c = sqrt(-ln(alpha/2)/2).
inline double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt((static_cast<double>(n) + static_cast<double>(m)) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

// Random Latin square of the given order: a random isotope of the cyclic
// table, i.e. table[i][j] = sigma((pi(i) + tau(j)) mod n).
inline std::vector<int> random_latin_square(int n, std::mt19937_64& eng) {
  auto perm = [&](int k) {
    std::vector<int> p(k);
    for (int i = 0; i < k; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), eng);
    return p;
  };
  const std::vector<int> sigma = perm(n), pi = perm(n), tau = perm(n);
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t[static_cast<std::size_t>(i) * n + j] = sigma[(pi[i] + tau[j]) % n];
  return t;
}

}  // namespace testutil
