#include "fidsamp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fidsamp {

Summary summarize(const EmpiricalDistribution& d) {
  if (d.size() == 0) throw std::invalid_argument("summarize: empty distribution");
  Summary s;
  s.mean = d.mean();
  s.sd = d.sd();
  for (std::size_t i = 0; i < kSummaryQuantiles.size(); ++i)
    s.quantiles[i] = d.quantile(kSummaryQuantiles[i]);
  return s;
}

namespace {

Interval symmetric_interval(const EmpiricalDistribution& d, double level) {
  const double a = 0.5 * (1.0 - level);
  Interval out;
  out.lo = d.quantile(a);
  out.hi = d.quantile(1.0 - a);
  // Mass of the closed interval [lo, hi]: cdf(hi) minus everything strictly
  // below lo.
  const std::vector<double>& sv = d.sorted_values();
  const std::vector<double>& cw = d.sorted_cumweights();
  const std::size_t i =
      static_cast<std::size_t>(std::lower_bound(sv.begin(), sv.end(), out.lo) - sv.begin());
  const double below = (i == 0) ? 0.0 : cw[i - 1];
  out.realized = d.cdf(out.hi) - below;
  out.superset = out.realized - level > 1e-12;
  return out;
}

Interval shortest_interval(const EmpiricalDistribution& d, double level) {
  const std::vector<double>& sv = d.sorted_values();
  const std::vector<double>& cw = d.sorted_cumweights();
  const std::size_t n = sv.size();

  Interval best;
  bool found = false;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < n; ++hi) {
    // Smallest lo with mass(lo..hi) >= level; window mass only shrinks as lo
    // moves right, so the two-pointer scan is exact.
    const auto mass = [&](std::size_t l, std::size_t h) {
      return cw[h] - (l == 0 ? 0.0 : cw[l - 1]);
    };
    if (mass(lo, hi) < level) continue;
    while (lo < hi && mass(lo + 1, hi) >= level) ++lo;
    const double width = sv[hi] - sv[lo];
    if (!found || width < best.hi - best.lo) {
      best.lo = sv[lo];
      best.hi = sv[hi];
      best.realized = mass(lo, hi);
      found = true;
    }
  }
  if (!found) {
    // Level exceeds total mass only through rounding; fall back to the full
    // support.
    best.lo = sv.front();
    best.hi = sv.back();
    best.realized = 1.0;
  }
  best.superset = best.realized - level > 1e-12;
  return best;
}

}  // namespace

Interval interval(const EmpiricalDistribution& d, const IntervalSpec& spec) {
  if (d.size() == 0) throw std::invalid_argument("interval: empty distribution");
  if (!(spec.level > 0.0 && spec.level < 1.0))
    throw std::invalid_argument("interval: level outside (0,1)");
  return spec.kind == IntervalSpec::Kind::symmetric ? symmetric_interval(d, spec.level)
                                                    : shortest_interval(d, spec.level);
}

EquivariantEstimates equivariant_estimates(const EmpiricalDistribution& d) {
  if (d.size() == 0) throw std::invalid_argument("equivariant_estimates: empty distribution");
  EquivariantEstimates e;
  e.direct = d.mean();
  const std::vector<double>& v = d.values();
  const std::vector<double>& w = d.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (!(v[i] > 0.0))
      throw std::domain_error("equivariant_estimates: nonpositive support, log scale undefined");
    s += w[i] * std::log(v[i]);
  }
  e.log_scale = std::exp(s);
  return e;
}

CoverageReport coverage_experiment(const CoverageProblem& problem, const IntervalSpec& spec,
                                   long replications, RandomStream& stream) {
  if (!problem.true_parameter || !problem.procedure)
    throw std::invalid_argument("coverage_experiment: incomplete problem");
  if (replications < 1)
    throw std::invalid_argument("coverage_experiment: replications must be >= 1");

  CoverageReport r;
  r.attempted = replications;
  for (long k = 0; k < replications; ++k) {
    RandomStream sub = stream.substream(static_cast<std::uint64_t>(k));
    try {
      const double truth = problem.true_parameter(sub);
      const EmpiricalDistribution cloud = problem.procedure(truth, sub);
      const Interval iv = interval(cloud, spec);
      if (iv.lo <= truth && truth <= iv.hi) ++r.hits;
    } catch (const std::exception&) {
      ++r.failures;
    }
  }
  r.replications = r.attempted - r.failures;
  if (r.replications > 0) {
    r.rate = static_cast<double>(r.hits) / static_cast<double>(r.replications);
    r.standard_error =
        std::sqrt(std::max(0.0, r.rate * (1.0 - r.rate)) / static_cast<double>(r.replications));
  }
  return r;
}

}  // namespace fidsamp
