#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fidsamp/empirical.hpp"
#include "fidsamp/fiducial.hpp"
#include "fidsamp/random.hpp"

namespace fidsamp {

// ------------------------------------------------------------ location model

// Observation T = theta + U with known noise law.
struct LocationModel {
  std::function<double(RandomStream&)> noise_sampler;
  std::function<double(double)> noise_density;  // needed for posterior work
};

// Convenience: centered normal noise with the given standard deviation.
LocationModel normal_location_model(double sd = 1.0);

// The location model as a fiducial model: tau(u,theta) = theta + u,
// solve_theta = t - u, solve_u = t - theta (conventional, simple, pivotal).
FiducialModel location_fiducial_model(const LocationModel& m);

// Posterior density values on theta_grid for prior pi:
// p(theta | t) proportional to f(t - theta) pi(theta), trapezoid-normalized
// on the grid.  A non-finite or nonpositive normalizer raises
// SigmaFinitenessError.
std::vector<double> location_posterior_density(const LocationModel& m, double t,
                                               const std::function<double(double)>& prior,
                                               const std::vector<double>& theta_grid);

// ------------------------------------------------------------ two-point model

// Singular example: U takes two values, T = theta + U.  Posterior from a
// prior density pi is exactly two atoms.
struct TwoPointModel {
  double u1 = 0.0, u2 = 1.0;
  double p1 = 0.5, p2 = 0.5;
};

struct TwoPointPosterior {
  std::array<double, 2> theta;  // x - u1, x - u2
  std::array<double, 2> mass;   // q_i / (q_1 + q_2), q_i = pi(x - u_i) p_i
  EmpiricalDistribution to_distribution() const;
};

TwoPointPosterior two_point_posterior(const TwoPointModel& m, double x,
                                      const std::function<double(double)>& prior);

// ------------------------------------------------------------- normal mean

// Fiducial distribution for a normal mean from t = observed average of n
// observations with known sigma0: Normal(t, sigma0^2 / n).
struct NormalMeanFiducial {
  double t = 0.0;
  double sigma0 = 1.0;
  long n = 1;
  double mean = 0.0;
  double sd = 1.0;  // sigma0 / sqrt(n)
  FiducialModel model;

  // Expanded-uncertainty interval t +/- k sd (k = 1.96 for 95%).
  std::pair<double, double> expanded_interval(double k = 1.96) const;
  double cdf(double theta) const;
  double quantile(double p) const;
  EmpiricalDistribution sample(long m, RandomStream& stream) const;
};

NormalMeanFiducial normal_mean_fiducial(double t, double sigma0, long n);

// ------------------------------------------------------------- gamma scale

// n observations from Gamma(alpha, theta) with known shape alpha, summarized
// by the average t.  T = theta V with V ~ Gamma(n alpha, 1/n); the fiducial
// parameter t / V is inverse-gamma with shape n alpha and scale n t.
struct GammaScaleSpec {
  double alpha = 1.0;
  long n = 1;
  double t = 1.0;
};

struct GammaScaleFiducial {
  GammaScaleSpec spec;
  double shape = 1.0;  // n alpha
  double scale = 1.0;  // n t
  FiducialModel model;

  bool has_mean() const { return shape > 1.0; }
  double mean() const;             // t / (alpha - 1/n), requires shape > 1
  double cdf(double theta) const;  // inverse-gamma CDF
  double quantile(double p) const;
  EmpiricalDistribution sample(long m, RandomStream& stream) const;
};

GammaScaleFiducial gamma_scale_fiducial(const GammaScaleSpec& spec);

// Scale-equivariant estimator minimizing invariant quadratic-in-log loss,
// plus the posterior log-scale location it derives from.
struct GammaScaleEquivariant {
  double theta_tilde = 0.0;        // (t/alpha) * correction
  double correction = 1.0;         // exp(ln(n alpha) - digamma(n alpha))
  double log_scale_estimate = 0.0; // ln(n t) - digamma(n alpha)
};

GammaScaleEquivariant gamma_scale_best_equivariant(const GammaScaleSpec& spec);

// --------------------------------------------------- CDF-inversion fiducial

// A one-parameter family of sampling CDFs t -> F(t | theta), strictly
// increasing in t, monotone in theta with the declared direction.  Domains
// bound the solvers (may be infinite).
struct Cdf1D {
  std::function<double(double /*t*/, double /*theta*/)> F;
  enum class Direction { increasing, decreasing };
  Direction direction = Direction::decreasing;
  double t_lo, t_hi;
  double theta_lo, theta_hi;
};

// Families used throughout tests and the CLI.
Cdf1D normal_location_cdf(double sd = 1.0);
Cdf1D gamma_scale_sampling_cdf(double alpha, long n);

// Solve F(t | theta) = target for theta inside the declared domain.
double cdf_solve_theta(const Cdf1D& c, double t, double target);

// One quantile-coupled fiducial draw: theta solving F(t|theta) = u for an
// increasing family, = 1-u for a decreasing one (so theta is increasing in u
// either way).
double fisher_solve(const Cdf1D& c, double t, double u);

// n draws of the CDF-inversion fiducial at observation t.
EmpiricalDistribution fisher_fiducial_from_cdf(const Cdf1D& c, double t, long n,
                                               RandomStream& stream);

// The same family as a pivotal fiducial model on scalar spaces:
// tau(u, theta) = F^{-1}(u | theta) in t, solve_theta inverts in theta,
// solve_u = F(t | theta).
FiducialModel cdf_fiducial_model(const Cdf1D& c);

// -------------------------------------------------------------- gamma shape

// n observations from Gamma(theta, 1) with unknown shape, summarized by
// t = average of log observations.  Structural equation:
// mean_i ln F^{-1}(u_i; theta) = t, strictly increasing in theta.
struct GammaShapeSpec {
  long n = 1;
  double t = 0.0;
};

// Monte Carlo fiducial sample; every draw solves the structural equation by
// monotone root finding inside theta in [1e-8, 1e8].  Draws whose root
// escapes are flagged and redrawn; more than 0.1% flagged aborts with
// SolverBudgetError.
EmpiricalDistribution gamma_shape_fiducial(const GammaShapeSpec& spec, long n_samples,
                                           RandomStream& stream);

// ------------------------------------------------------- separability probe

// Numeric check of the separability criterion for posterior-compatible
// families: F is separable when F(t|theta) = S(G(t) - H(theta)), which makes
// ln R(t, theta) = ln(-dF/dtheta / dF/dt) additively separable, so its
// second mixed difference vanishes on a grid.
struct SeparabilityResult {
  double max_residual = 0.0;
  bool separable = false;
  double threshold = 0.0;
  // Interior nodes with reconstructed G and H (only filled when separable).
  std::vector<double> t_nodes, G;
  std::vector<double> theta_nodes, H;
};

// Central differences of F on the grid; raises NonMonotoneError if dF/dt <= 0
// or R <= 0 anywhere on the interior grid.
SeparabilityResult lindley_separability_test(const Cdf1D& c,
                                             const std::vector<double>& t_grid,
                                             const std::vector<double>& theta_grid,
                                             double threshold = 0.01);

// -------------------------------------------- empirical correlation family

// Empirical correlation of n_obs bivariate standard-normal pairs with
// correlation rho; one draw of the statistic r.
double sample_bivariate_correlation(double rho, int n_obs, RandomStream& stream);

// Monte Carlo construction of the sampling CDF of r given rho on a rho-grid
// (sorted replicate tables, interpolated in both arguments).  A small
// uniform mixture keeps the CDF strictly increasing in r even in tail cells.
struct CorrelationCdfOptions {
  int n_obs = 5;
  long replicates_per_node = 100000;
  int rho_node_count = 21;
  double rho_lo = -0.9, rho_hi = 0.9;
  double r_lo = -0.9, r_hi = 0.9;
  double uniform_mix = 1e-3;
};

Cdf1D correlation_cdf_monte_carlo(const CorrelationCdfOptions& opts, RandomStream& stream);

}  // namespace fidsamp
