#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fidsamp/errors.hpp"
#include "fidsamp/group.hpp"
#include "fidsamp/linalg.hpp"
#include "fidsamp/random.hpp"
#include "testutil.hpp"

using namespace fidsamp;

namespace {

// Random group element with a well-conditioned triangular part.
LocScaleElement random_element(int p, RandomStream& s) {
  LocScaleElement g;
  g.mu.resize(static_cast<std::size_t>(p));
  for (double& v : g.mu) v = s.normal();
  g.L = LowerTriangular(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < i; ++j) g.L.at(i, j) = 0.3 * s.normal();
    g.L.at(i, i) = std::exp(0.4 * s.normal());
  }
  return g;
}

double element_distance(const LocScaleElement& a, const LocScaleElement& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.mu.size(); ++i)
    d = std::max(d, std::fabs(a.mu[i] - b.mu[i]));
  for (int i = 0; i < a.L.dim(); ++i)
    for (int j = 0; j <= i; ++j) d = std::max(d, std::fabs(a.L.at(i, j) - b.L.at(i, j)));
  return d;
}

LocScaleElement scalar_element(double mu, double l) {
  LocScaleElement g;
  g.mu = {mu};
  g.L = LowerTriangular(1);
  g.L.at(0, 0) = l;
  return g;
}

}  // namespace

// ----------------------------------------------------------- group algebra

TEST_CASE("scalar composition follows the affine rule") {
  // [1,2][3,4] acts as x -> 1 + 2(3 + 4x) = 7 + 8x.
  const auto c = group_mul(scalar_element(1.0, 2.0), scalar_element(3.0, 4.0));
  CHECK(c.mu[0] == 7.0);
  CHECK(c.L.at(0, 0) == 8.0);
}

TEST_CASE("identity is two-sided") {
  RandomStream s(42);
  for (int p = 1; p <= 5; ++p) {
    const auto e = group_identity(p);
    const auto g = random_element(p, s);
    CHECK(element_distance(group_mul(e, g), g) <= 1e-15);
    CHECK(element_distance(group_mul(g, e), g) <= 1e-15);
  }
}

TEST_CASE("composition is associative on random triples") {
  RandomStream s(42);
  for (int rep = 0; rep < 10000; ++rep) {
    const int p = 1 + static_cast<int>(s.next_u64() % 5);
    const auto a = random_element(p, s);
    const auto b = random_element(p, s);
    const auto c = random_element(p, s);
    const auto left = group_mul(group_mul(a, b), c);
    const auto right = group_mul(a, group_mul(b, c));
    CHECK(element_distance(left, right) <= 1e-10);
  }
}

TEST_CASE("scalar inverse matches the closed form") {
  // [2,4]^{-1} = [-1/2, 1/4].
  const auto inv = group_inv(scalar_element(2.0, 4.0));
  CHECK(inv.mu[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(inv.L.at(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("inverse round trips and cancels") {
  RandomStream s(7);
  for (int rep = 0; rep < 1000; ++rep) {
    const int p = 1 + static_cast<int>(s.next_u64() % 5);
    const auto g = random_element(p, s);
    CHECK(element_distance(group_inv(group_inv(g)), g) <= 1e-12);
    const auto e = group_identity(p);
    CHECK(element_distance(group_mul(g, group_inv(g)), e) <= 1e-10);
    CHECK(element_distance(group_mul(group_inv(g), g), e) <= 1e-10);
  }
}

TEST_CASE("group action composes") {
  RandomStream s(9);
  const auto a = random_element(3, s);
  const auto b = random_element(3, s);
  const std::vector<double> x = {0.3, -1.2, 2.0};
  const auto via_product = group_act(group_mul(a, b), x);
  const auto stepwise = group_act(a, group_act(b, x));
  for (int i = 0; i < 3; ++i)
    CHECK(via_product[static_cast<std::size_t>(i)] ==
          doctest::Approx(stepwise[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

// ----------------------------------------------------- sufficient statistic

TEST_CASE("scalar sufficient statistic is mean and divisor-n deviation") {
  Matrix data(1, 3);
  data.at(0, 0) = 1.0;
  data.at(0, 1) = 2.0;
  data.at(0, 2) = 3.0;
  const auto t = mvn_sufficient_statistic(data);
  CHECK(t.mu[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(t.L.at(0, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("sufficient statistic reconstructs the empirical covariance") {
  std::mt19937_64 eng(123);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int p = 3, n = 10;
  Matrix data(p, n);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n; ++j) data.at(i, j) = nd(eng) + 0.5 * i;
  const auto t = mvn_sufficient_statistic(data);

  // Independent computation of mean and divisor-n covariance.
  std::vector<double> mean(p, 0.0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < n; ++j) mean[static_cast<std::size_t>(i)] += data.at(i, j);
    mean[static_cast<std::size_t>(i)] /= n;
  }
  for (int i = 0; i < p; ++i)
    CHECK(t.mu[static_cast<std::size_t>(i)] ==
          doctest::Approx(mean[static_cast<std::size_t>(i)]).epsilon(1e-13));

  for (int a = 0; a < p; ++a)
    for (int b = 0; b <= a; ++b) {
      double cov = 0.0;
      for (int j = 0; j < n; ++j)
        cov += (data.at(a, j) - mean[static_cast<std::size_t>(a)]) *
               (data.at(b, j) - mean[static_cast<std::size_t>(b)]);
      cov /= n;
      double ll = 0.0;
      for (int k = 0; k <= b; ++k) ll += t.L.at(a, k) * t.L.at(b, k);
      CHECK(std::fabs(ll - cov) <= 1e-12);
    }
}

TEST_CASE("sufficient statistic rejects degenerate input") {
  Matrix flat(2, 5);
  for (int j = 0; j < 5; ++j) {
    flat.at(0, j) = 1.0;  // identical rows of constants: zero covariance
    flat.at(1, j) = 2.0;
  }
  CHECK_THROWS_AS(mvn_sufficient_statistic(flat), DecompositionError);

  Matrix thin(3, 3);  // n < p + 1
  CHECK_THROWS_AS(mvn_sufficient_statistic(thin), std::invalid_argument);
}

// ----------------------------------------------------------- fiducial draws

TEST_CASE("mvn fiducial draws close the observation equation") {
  RandomStream s(42);
  for (int p = 1; p <= 3; ++p) {
    const auto t = random_element(p, s);
    const long n_obs = p + 5;
    const auto draws = mvn_fiducial_sample(t, n_obs, 200, s);
    REQUIRE(draws.size() == 200);
    for (const auto& d : draws) {
      // theta * (theta^{-1} t) must recover t: the stability of the group
      // arithmetic at realized draw magnitudes.
      LocScaleElement theta;
      theta.mu = d.mu;
      theta.L = d.sigma_chol;
      const auto v = group_mul(group_inv(theta), t);
      const auto back = group_mul(theta, v);
      CHECK(element_distance(back, t) <= 1e-8);
    }
  }
}

TEST_CASE("scalar mvn fiducial concentrates near the statistic") {
  // p = 1: the location cloud is centered near mu_t with spread sd_t.
  const auto t = scalar_element(3.0, 2.0);
  RandomStream s(42);
  const auto draws = mvn_fiducial_sample(t, 30, 4000, s);
  double mean_mu = 0.0;
  for (const auto& d : draws) mean_mu += d.mu[0];
  mean_mu /= static_cast<double>(draws.size());
  CHECK(std::fabs(mean_mu - 3.0) <= 0.05);
  for (const auto& d : draws) CHECK(d.sigma_chol.at(0, 0) > 0.0);
}

// ------------------------------------------------------------- correlation

TEST_CASE("correlation from a Cholesky factor") {
  LowerTriangular c(2);
  c.at(0, 0) = 2.0;
  c.at(1, 0) = 0.6;
  c.at(1, 1) = 0.8;
  // Sigma = C C^T has rho = 0.6 / sqrt(0.36 + 0.64) = 0.6.
  CHECK(correlation_from_chol(c) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("correlation fiducial at r = 0 is centered") {
  RandomStream s(42);
  const auto d = correlation_fiducial(0.0, 20, 100000, s);
  CHECK(std::fabs(d.quantile(0.5)) <= 0.02);
  CHECK(d.min() > -1.0);
  CHECK(d.max() < 1.0);
}

TEST_CASE("correlation fiducial rejects invalid input") {
  RandomStream s(1);
  CHECK_THROWS_AS(correlation_fiducial(1.0, 20, 10, s), std::invalid_argument);
  CHECK_THROWS_AS(correlation_fiducial(0.0, 3, 10, s), std::invalid_argument);
}

TEST_CASE("implied correlation cloud is invariant to componentwise affine maps") {
  // Replaying the same stream, the draws at t and at g0 t (diagonal scale
  // plus shift) are exact group translates, so the implied correlations
  // match path by path.
  RandomStream s1(42), s2(42);
  LocScaleElement t;
  t.mu = {0.0, 0.0};
  t.L = LowerTriangular(2);
  t.L.at(0, 0) = 1.0;
  t.L.at(1, 0) = 0.35;
  t.L.at(1, 1) = std::sqrt(1.0 - 0.35 * 0.35);

  LocScaleElement g0;
  g0.mu = {5.0, -2.0};
  g0.L = LowerTriangular(2);
  g0.L.at(0, 0) = 3.0;
  g0.L.at(1, 1) = 0.25;

  const auto base = mvn_fiducial_sample(t, 12, 2000, s1);
  const auto moved = mvn_fiducial_sample(group_mul(g0, t), 12, 2000, s2);
  REQUIRE(base.size() == moved.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double r1 = correlation_from_chol(base[i].sigma_chol);
    const double r2 = correlation_from_chol(moved[i].sigma_chol);
    CHECK(std::fabs(r1 - r2) <= 1e-12);
  }
}
