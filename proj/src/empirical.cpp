#include "fidsamp/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fidsamp {

namespace {

// Neumaier compensated sum: keeps normalization and moment errors at
// rounding level even for 1e6+ atoms.
double stable_sum(const std::vector<double>& v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      comp += (s - t) + x;
    else
      comp += (x - t) + s;
    s = t;
  }
  return s + comp;
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)),
      weights_(values_.size(), 0.0),
      weighted_(false) {
  if (values_.empty()) throw std::invalid_argument("EmpiricalDistribution: no values");
  const double w = 1.0 / static_cast<double>(values_.size());
  std::fill(weights_.begin(), weights_.end(), w);
  finalize();
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values,
                                             std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)), weighted_(true) {
  if (values_.empty()) throw std::invalid_argument("EmpiricalDistribution: no values");
  if (values_.size() != weights_.size())
    throw std::invalid_argument("EmpiricalDistribution: values/weights size mismatch");
  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("EmpiricalDistribution: weights must be finite and >= 0");
  const double total = stable_sum(weights_);
  if (!(total > 0.0))
    throw std::invalid_argument("EmpiricalDistribution: total weight must be positive");
  for (double& w : weights_) w /= total;
  finalize();
}

void EmpiricalDistribution::finalize() {
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("EmpiricalDistribution: values must be finite");
  std::vector<std::size_t> order(values_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  sorted_values_.resize(values_.size());
  sorted_w_.resize(values_.size());
  sorted_cumw_.resize(values_.size());
  double cum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted_values_[k] = values_[order[k]];
    sorted_w_[k] = weights_[order[k]];
    // compensated running sum
    const double x = sorted_w_[k];
    const double t = cum + x;
    if (std::fabs(cum) >= std::fabs(x))
      comp += (cum - t) + x;
    else
      comp += (x - t) + cum;
    cum = t;
    sorted_cumw_[k] = cum + comp;
  }
  sorted_cumw_.back() = 1.0;  // pin the top against rounding drift
}

double EmpiricalDistribution::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += weights_[i] * values_[i];
  return s;
}

double EmpiricalDistribution::sd() const {
  const double m = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double d = values_[i] - m;
    s += weights_[i] * d * d;
  }
  return std::sqrt(s);
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sorted_values_.begin(), sorted_values_.end(), x);
  if (it == sorted_values_.begin()) return 0.0;
  const std::size_t k = static_cast<std::size_t>(it - sorted_values_.begin()) - 1;
  return sorted_cumw_[k];
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("EmpiricalDistribution::quantile: p outside [0,1]");
  if (p <= 0.0) return sorted_values_.front();
  const auto it = std::lower_bound(sorted_cumw_.begin(), sorted_cumw_.end(), p);
  const std::size_t k = (it == sorted_cumw_.end())
                            ? sorted_cumw_.size() - 1
                            : static_cast<std::size_t>(it - sorted_cumw_.begin());
  return sorted_values_[k];
}

double ks_statistic(const EmpiricalDistribution& d, const std::function<double(double)>& cdf) {
  if (!cdf) throw std::invalid_argument("ks_statistic: empty cdf");
  const auto& xs = d.sorted_values();
  const auto& cw = d.sorted_cumweights();
  double dmax = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    dmax = std::max(dmax, std::fabs(cw[i] - F));
    dmax = std::max(dmax, std::fabs(prev - F));
    prev = cw[i];
  }
  return dmax;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double dmax = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    dmax = std::max(dmax, std::fabs(static_cast<double>(i) / na -
                                    static_cast<double>(j) / nb));
  }
  return dmax;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0) throw std::invalid_argument("ks_two_sample_critical: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ks_two_sample_critical: alpha outside (0,1)");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace fidsamp
