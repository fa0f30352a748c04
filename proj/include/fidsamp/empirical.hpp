#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fidsamp {

// Weighted empirical distribution over scalar values.
//
// Weights are normalized on construction.  Values keep their insertion
// order (the order draws were produced in), which is what gets serialized;
// a sorted index is built alongside for CDF/quantile queries.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values);
  EmpiricalDistribution(std::vector<double> values, std::vector<double> weights);

  std::size_t size() const { return values_.size(); }
  bool is_weighted() const { return weighted_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }

  double mean() const;
  double sd() const;
  double min() const { return sorted_values_.front(); }
  double max() const { return sorted_values_.back(); }

  // P(X <= x) under the atom weights.
  double cdf(double x) const;

  // Left-continuous generalized inverse: smallest atom whose cumulative
  // weight reaches p.  p in [0,1].
  double quantile(double p) const;

  // Atoms sorted by value with cumulative weights; used by interval scans.
  const std::vector<double>& sorted_values() const { return sorted_values_; }
  const std::vector<double>& sorted_cumweights() const { return sorted_cumw_; }
  const std::vector<double>& sorted_weights() const { return sorted_w_; }

  // Free-form diagnostics attached by producers (e.g. low effective sample
  // size warnings from importance resampling).
  const std::vector<std::string>& notes() const { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

 private:
  void finalize();

  std::vector<double> values_;
  std::vector<double> weights_;
  bool weighted_ = false;
  std::vector<double> sorted_values_;
  std::vector<double> sorted_w_;
  std::vector<double> sorted_cumw_;
  std::vector<std::string> notes_;
};

// Kolmogorov-Smirnov distance between an empirical distribution and a CDF.
double ks_statistic(const EmpiricalDistribution& d, const std::function<double(double)>& cdf);

// Two-sample KS distance between unweighted draw vectors.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sided critical value at significance alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

}  // namespace fidsamp
