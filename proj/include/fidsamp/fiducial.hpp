#pragma once

#include <functional>
#include <vector>

#include "fidsamp/empirical.hpp"
#include "fidsamp/random.hpp"

namespace fidsamp {

// A Monte Carlo model for one scalar observation summary: a sampler for the
// auxiliary variable U together with the map tau(u, theta) -> t.  When the
// observation equation tau(u, theta) = t has a unique theta-solution the
// model is "simple" and solve_theta inverts it; "pivotal" additionally means
// tau is a bijection in each argument, with solve_u the u-inverse.
// "conventional" records that the law of U does not depend on theta (all
// built-in models are conventional).
struct FiducialModel {
  std::function<double(RandomStream&)> sample_u;
  std::function<double(double /*u*/, double /*theta*/)> tau;
  std::function<double(double /*u*/, double /*t*/)> solve_theta;   // empty if not simple
  std::function<double(double /*theta*/, double /*t*/)> solve_u;   // empty if not pivotal
  bool conventional = true;
  bool simple = false;
  bool pivotal = false;
};

// Forward-simulate n draws of T at a fixed parameter.
std::vector<double> simulate_model(const FiducialModel& model, double theta, long n,
                                   RandomStream& stream);

// Fiducial sample at observation t: the law of solve_theta(U, t).  Draws
// whose solver fails are redrawn; if failures exceed 0.1% of attempts the
// whole run aborts with SolverBudgetError rather than returning a silently
// biased cloud.
EmpiricalDistribution sample_fiducial(const FiducialModel& model, double t, long n,
                                      RandomStream& stream);

// Which reference measure a density is taken against.
enum class MeasureTag { counting, length };

// Inputs for posterior sampling: the model, the density f of U (with its
// measure), and the prior-predictive density w(t, u) of tau(u, Theta) under
// the parameter prior.  For counting-measure U the support atoms are listed
// explicitly.
struct PosteriorProblem {
  FiducialModel model;
  std::function<double(double)> u_density;          // f
  MeasureTag u_measure = MeasureTag::length;
  std::vector<double> u_atoms;                      // used when u_measure == counting
  std::function<double(double, double)> tau_prior_density;  // w(t, u)
  MeasureTag t_measure = MeasureTag::length;
};

// Joint density of (U, T) against nu x mu: f(u) w(t, u).
double joint_density(const PosteriorProblem& problem, double u, double t);

// Posterior sample at observation t.
//  - counting-measure U: exact reweighting of the atoms by w(t,u_i) f(u_i),
//    mapped through solve_theta; returns weighted atoms.
//  - length-measure U: sampling-importance-resampling with the U law as
//    proposal and w(t, .) as weight; returns n_out independent-style draws.
// All weights zero raises DegeneratePosteriorError.  An effective sample
// size below 1% of n_proposals attaches a warning note to the output.
EmpiricalDistribution posterior_sample(const PosteriorProblem& problem, double t,
                                       long n_proposals, long n_out,
                                       RandomStream& stream);

// Result of the sigma-finiteness probe of u |-> f(u) w(t, u).
struct SigmaFinitenessResult {
  double normalizer = 0.0;   // integral / sum estimate on the final support
  bool finite = false;
  int doublings_used = 0;
  double tail_fraction = 0.0;  // last relative tail contribution observed
};

// Estimate the normalizer over the supplied support (grid for length
// measure, atoms for counting measure).  For grids the support is widened by
// doubling, up to ten times; the integral counts as finite when one doubling
// adds less than 1% mass.
SigmaFinitenessResult sigma_finiteness_check(const PosteriorProblem& problem, double t,
                                             const std::vector<double>& support);

// Consistency probe for "the fiducial equals a Bayesian posterior": if the
// law of tau(u, Theta) under the prior does not depend on u, the probe
// distributions coincide.  Returns the maximum pairwise two-sample KS
// distance over the probe u values (>= 2 probes, n draws per probe, each
// probe on its own substream).
double fiducial_posterior_diagnostic(const FiducialModel& model,
                                     const std::function<double(RandomStream&)>& prior_sampler,
                                     const std::vector<double>& u_probes, long n,
                                     RandomStream& stream);

}  // namespace fidsamp
