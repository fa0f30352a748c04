#include "fidsamp/fiducial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fidsamp/errors.hpp"

namespace fidsamp {

std::vector<double> simulate_model(const FiducialModel& model, double theta, long n,
                                   RandomStream& stream) {
  if (!model.sample_u || !model.tau)
    throw UnsupportedModelError("simulate_model: model needs sample_u and tau");
  if (n <= 0) throw std::invalid_argument("simulate_model: n must be positive");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(model.tau(model.sample_u(stream), theta));
  return out;
}

EmpiricalDistribution sample_fiducial(const FiducialModel& model, double t, long n,
                                      RandomStream& stream) {
  if (!model.simple || !model.solve_theta)
    throw UnsupportedModelError("sample_fiducial: model is not simple (no solve_theta)");
  if (!model.conventional)
    throw UnsupportedModelError("sample_fiducial: model is not conventional");
  if (n <= 0) throw std::invalid_argument("sample_fiducial: n must be positive");

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  long failures = 0;
  while (static_cast<long>(values.size()) < n) {
    const double u = model.sample_u(stream);
    try {
      const double theta = model.solve_theta(u, t);
      if (!std::isfinite(theta)) throw NoRootError("non-finite solution");
      values.push_back(theta);
    } catch (const std::exception&) {
      ++failures;
      const long attempts = static_cast<long>(values.size()) + failures;
      if (failures * 1000 > attempts && failures > 1)
        throw SolverBudgetError(
            "sample_fiducial: solver failure rate above 0.1% of draws");
    }
  }
  return EmpiricalDistribution(std::move(values));
}

double joint_density(const PosteriorProblem& problem, double u, double t) {
  if (!problem.u_density || !problem.tau_prior_density)
    throw std::invalid_argument("joint_density: problem needs u_density and tau_prior_density");
  return problem.u_density(u) * problem.tau_prior_density(t, u);
}

EmpiricalDistribution posterior_sample(const PosteriorProblem& problem, double t,
                                       long n_proposals, long n_out,
                                       RandomStream& stream) {
  const FiducialModel& model = problem.model;
  if (!model.simple || !model.solve_theta)
    throw UnsupportedModelError("posterior_sample: model is not simple (no solve_theta)");
  if (!problem.tau_prior_density)
    throw std::invalid_argument("posterior_sample: missing tau_prior_density");

  if (problem.u_measure == MeasureTag::counting) {
    if (problem.u_atoms.empty())
      throw std::invalid_argument("posterior_sample: counting measure but no atoms");
    if (!problem.u_density)
      throw std::invalid_argument("posterior_sample: missing u_density");
    std::vector<double> thetas, masses;
    thetas.reserve(problem.u_atoms.size());
    masses.reserve(problem.u_atoms.size());
    double total = 0.0;
    for (double u : problem.u_atoms) {
      const double q = problem.tau_prior_density(t, u) * problem.u_density(u);
      if (!(q >= 0.0) || !std::isfinite(q))
        throw std::invalid_argument("posterior_sample: invalid atom weight");
      thetas.push_back(model.solve_theta(u, t));
      masses.push_back(q);
      total += q;
    }
    if (!(total > 0.0))
      throw DegeneratePosteriorError("posterior_sample: all atom weights are zero");
    return EmpiricalDistribution(std::move(thetas), std::move(masses));
  }

  // Continuous auxiliary variable: sampling-importance-resampling.
  if (!model.sample_u)
    throw UnsupportedModelError("posterior_sample: model needs sample_u");
  if (n_proposals <= 0 || n_out <= 0)
    throw std::invalid_argument("posterior_sample: sample sizes must be positive");

  std::vector<double> us(static_cast<std::size_t>(n_proposals));
  std::vector<double> cumw(static_cast<std::size_t>(n_proposals));
  double total = 0.0, sumsq = 0.0;
  for (long i = 0; i < n_proposals; ++i) {
    const double u = model.sample_u(stream);
    const double w = problem.tau_prior_density(t, u);
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("posterior_sample: invalid importance weight");
    us[static_cast<std::size_t>(i)] = u;
    total += w;
    sumsq += w * w;
    cumw[static_cast<std::size_t>(i)] = total;
  }
  if (!(total > 0.0))
    throw DegeneratePosteriorError("posterior_sample: every importance weight is zero");

  const double ess = total * total / sumsq;

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_out));
  for (long k = 0; k < n_out; ++k) {
    const double r = stream.uniform01() * total;
    const auto it = std::lower_bound(cumw.begin(), cumw.end(), r);
    const std::size_t idx = (it == cumw.end()) ? cumw.size() - 1
                                               : static_cast<std::size_t>(it - cumw.begin());
    values.push_back(model.solve_theta(us[idx], t));
  }
  EmpiricalDistribution out(std::move(values));
  if (ess < 0.01 * static_cast<double>(n_proposals)) {
    out.add_note("low effective sample size: " + std::to_string(ess) + " of " +
                 std::to_string(n_proposals) + " proposals");
  }
  return out;
}

SigmaFinitenessResult sigma_finiteness_check(const PosteriorProblem& problem, double t,
                                             const std::vector<double>& support) {
  if (support.size() < 2)
    throw std::invalid_argument("sigma_finiteness_check: support needs at least 2 points");

  SigmaFinitenessResult res;

  if (problem.u_measure == MeasureTag::counting) {
    double total = 0.0;
    for (double u : support) total += joint_density(problem, u, t);
    res.normalizer = total;
    res.finite = std::isfinite(total);
    res.tail_fraction = 0.0;
    return res;
  }

  // Trapezoid on the supplied grid, then widen by doubling the half-width
  // while keeping the original step, until the added tail mass is < 1%.
  const double lo0 = support.front();
  const double hi0 = support.back();
  if (!(hi0 > lo0))
    throw std::invalid_argument("sigma_finiteness_check: support must be increasing");
  const double h = (hi0 - lo0) / static_cast<double>(support.size() - 1);
  const auto integrand = [&](double u) { return joint_density(problem, u, t); };

  const auto trapz = [&](double lo, double hi) {
    const long m = std::max(2L, static_cast<long>(std::llround((hi - lo) / h)) + 1);
    const double step = (hi - lo) / static_cast<double>(m - 1);
    double s = 0.5 * (integrand(lo) + integrand(hi));
    for (long i = 1; i < m - 1; ++i) s += integrand(lo + step * static_cast<double>(i));
    return s * step;
  };

  double core = trapz(lo0, hi0);
  if (!std::isfinite(core)) {
    res.normalizer = core;
    res.finite = false;
    res.tail_fraction = 1.0;
    return res;
  }

  const double center = 0.5 * (lo0 + hi0);
  double half = 0.5 * (hi0 - lo0);
  double total = core;
  for (int k = 1; k <= 10; ++k) {
    const double new_half = half * 2.0;
    const double tail = trapz(center - new_half, center - half) +
                        trapz(center + half, center + new_half);
    half = new_half;
    res.doublings_used = k;
    if (!std::isfinite(tail) || !std::isfinite(total + tail)) {
      res.normalizer = total + tail;
      res.finite = false;
      res.tail_fraction = 1.0;
      return res;
    }
    total += tail;
    res.tail_fraction = (total > 0.0) ? tail / total : 0.0;
    if (res.tail_fraction < 0.01) {
      res.normalizer = total;
      res.finite = true;
      return res;
    }
  }
  res.normalizer = total;
  res.finite = false;
  return res;
}

double fiducial_posterior_diagnostic(const FiducialModel& model,
                                     const std::function<double(RandomStream&)>& prior_sampler,
                                     const std::vector<double>& u_probes, long n,
                                     RandomStream& stream) {
  if (u_probes.size() < 2)
    throw std::invalid_argument("fiducial_posterior_diagnostic: need at least 2 probe points");
  if (!prior_sampler)
    throw std::invalid_argument("fiducial_posterior_diagnostic: missing prior sampler");
  if (!model.tau) throw UnsupportedModelError("fiducial_posterior_diagnostic: model needs tau");
  if (n <= 1) throw std::invalid_argument("fiducial_posterior_diagnostic: n must be > 1");

  std::vector<std::vector<double>> clouds;
  clouds.reserve(u_probes.size());
  for (std::size_t p = 0; p < u_probes.size(); ++p) {
    RandomStream sub = stream.substream(p);
    std::vector<double> cloud(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) cloud[static_cast<std::size_t>(i)] =
        model.tau(u_probes[p], prior_sampler(sub));
    clouds.push_back(std::move(cloud));
  }
  double dmax = 0.0;
  for (std::size_t a = 0; a < clouds.size(); ++a)
    for (std::size_t b = a + 1; b < clouds.size(); ++b)
      dmax = std::max(dmax, ks_two_sample(clouds[a], clouds[b]));
  return dmax;
}

}  // namespace fidsamp
