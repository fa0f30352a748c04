#pragma once

#include <array>
#include <functional>

#include "fidsamp/empirical.hpp"
#include "fidsamp/random.hpp"

namespace fidsamp {

// Quantile levels reported by summarize, in this order.
inline constexpr std::array<double, 7> kSummaryQuantiles = {0.025, 0.05, 0.25, 0.5,
                                                            0.75,  0.95, 0.975};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  std::array<double, 7> quantiles{};  // at kSummaryQuantiles
};

Summary summarize(const EmpiricalDistribution& d);

struct IntervalSpec {
  enum class Kind { symmetric, shortest };
  double level = 0.95;
  Kind kind = Kind::symmetric;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  // Probability mass the cloud actually assigns to [lo, hi]; at least the
  // requested level by construction.
  double realized = 0.0;
  // Set when the atoms cannot realize the level exactly, so the interval is
  // the smallest superset window.
  bool superset = false;
};

// symmetric: central interval between the (1-level)/2 and 1-(1-level)/2
// quantiles.  shortest: minimal-width window over the sorted atoms holding
// at least `level` mass.
Interval interval(const EmpiricalDistribution& d, const IntervalSpec& spec);

struct EquivariantEstimates {
  double direct = 0.0;     // E Theta: optimal under squared error on the direct scale
  double log_scale = 0.0;  // exp(E log Theta): optimal on the logarithmic scale
};

// Throws std::domain_error when the cloud has nonpositive support (the log
// estimate is undefined there).
EquivariantEstimates equivariant_estimates(const EmpiricalDistribution& d);

struct CoverageReport {
  long attempted = 0;
  long failures = 0;      // replications whose procedure threw; excluded
  long replications = 0;  // completed = attempted - failures
  long hits = 0;
  double rate = 0.0;            // hits / replications
  double standard_error = 0.0;  // binomial, sqrt(rate (1-rate) / replications)
};

struct CoverageProblem {
  // Draws (or fixes) the true parameter for one replication.
  std::function<double(RandomStream&)> true_parameter;
  // Simulates one data set at the true parameter and returns the fiducial
  // cloud the procedure produces for it.
  std::function<EmpiricalDistribution(double theta_true, RandomStream&)> procedure;
};

// Repeated-sampling check that interval coverage matches the nominal level.
// Each replication runs on stream.substream(k), so results are deterministic
// given the seed and independent of scheduling.
CoverageReport coverage_experiment(const CoverageProblem& problem, const IntervalSpec& spec,
                                   long replications, RandomStream& stream);

}  // namespace fidsamp
