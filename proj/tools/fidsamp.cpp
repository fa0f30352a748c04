// fidsamp: Monte Carlo fiducial inference from the command line.
//
// Subcommands:
//   sample       draw a fiducial cloud for a registered model
//   posterior    exact or importance-resampled posterior for a model + prior
//   coverage     repeated-sampling interval coverage experiment
//   separability separability residual of a sampling-CDF family
//   loop-check   quasigroup/loop axioms for a finite Cayley table
//
// Every run is deterministic given the seed: --seed wins, otherwise the
// FIDSAMP_SEED environment variable, otherwise the documented default 42.
// Sample files are CSV (`value,weight`, full round-trip precision); a summary
// JSON document always goes to standard output.
//
// Exit codes: 0 success, 2 usage error, 1 numeric/model/IO error.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fidsamp/empirical.hpp"
#include "fidsamp/fiducial.hpp"
#include "fidsamp/group.hpp"
#include "fidsamp/inference.hpp"
#include "fidsamp/loops.hpp"
#include "fidsamp/models1d.hpp"
#include "fidsamp/random.hpp"

using json = nlohmann::ordered_json;
using fidsamp::EmpiricalDistribution;
using fidsamp::RandomStream;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

using Params = std::map<std::string, double>;

std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
  if (seed_given) return seed_flag;
  if (const char* env = std::getenv("FIDSAMP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return static_cast<std::uint64_t>(v);
    throw std::runtime_error("FIDSAMP_SEED is not an unsigned integer");
  }
  return kDefaultSeed;
}

long as_count(const Params& p, const std::string& key) {
  const double v = p.at(key);
  const long n = std::lround(v);
  if (std::fabs(v - static_cast<double>(n)) > 1e-9 || n < 1)
    throw std::invalid_argument("--" + key + " must be a positive integer");
  return n;
}

// ------------------------------------------------------------ emission

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const EmpiricalDistribution& d) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across runs
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "value,weight\n";
  const std::vector<double>& v = d.values();
  const std::vector<double>& w = d.weights();
  for (std::size_t i = 0; i < v.size(); ++i)
    out << format_full(v[i]) << ',' << format_full(w[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

json summary_json(const EmpiricalDistribution& d, const fidsamp::IntervalSpec& spec) {
  const fidsamp::Summary s = fidsamp::summarize(d);
  const fidsamp::Interval iv = fidsamp::interval(d, spec);
  json q = json::object();
  for (std::size_t i = 0; i < fidsamp::kSummaryQuantiles.size(); ++i) {
    char key[16];
    std::snprintf(key, sizeof key, "%g", fidsamp::kSummaryQuantiles[i]);
    q[key] = s.quantiles[i];
  }
  json out;
  out["summary"] = {{"mean", s.mean}, {"sd", s.sd}, {"quantiles", q}};
  out["interval"] = {{"level", spec.level}, {"lo", iv.lo}, {"hi", iv.hi}};
  return out;
}

json params_json(const Params& p, const std::vector<std::string>& order) {
  json out = json::object();
  for (const std::string& k : order) out[k] = p.at(k);
  return out;
}

void emit_result(const std::string& model, const Params& p,
                 const std::vector<std::string>& param_order, std::uint64_t seed,
                 const EmpiricalDistribution& d, const fidsamp::IntervalSpec& spec,
                 const std::string& out_path, const std::string& format) {
  json doc;
  doc["model"] = model;
  doc["params"] = params_json(p, param_order);
  doc["seed"] = seed;
  const json body = summary_json(d, spec);
  doc["summary"] = body["summary"];
  doc["interval"] = body["interval"];
  if (!d.notes().empty()) doc["notes"] = d.notes();

  if (!out_path.empty()) {
    if (format == "csv") {
      write_csv(out_path, d);
    } else {
      json with_samples = doc;
      json samples = json::array();
      const std::vector<double>& v = d.values();
      const std::vector<double>& w = d.weights();
      for (std::size_t i = 0; i < v.size(); ++i) samples.push_back(json::array({v[i], w[i]}));
      with_samples["samples"] = std::move(samples);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open output file: " + out_path);
      out << with_samples.dump(2) << '\n';
      if (!out) throw std::runtime_error("write failed: " + out_path);
    }
  }
  std::fputs(doc.dump(2).c_str(), stdout);
  std::fputc('\n', stdout);
}

// ------------------------------------------------------- model registries

struct SampleEntry {
  std::vector<std::string> required;
  std::vector<std::pair<std::string, double>> optional;
  EmpiricalDistribution (*run)(const Params&, long, RandomStream&);
};

EmpiricalDistribution run_sample_normal_mean(const Params& p, long m, RandomStream& s) {
  return fidsamp::normal_mean_fiducial(p.at("t"), p.at("sigma0"), as_count(p, "n-obs"))
      .sample(m, s);
}
EmpiricalDistribution run_sample_gamma_scale(const Params& p, long m, RandomStream& s) {
  fidsamp::GammaScaleSpec spec;
  spec.alpha = p.at("alpha");
  spec.n = as_count(p, "n-obs");
  spec.t = p.at("t");
  return fidsamp::gamma_scale_fiducial(spec).sample(m, s);
}
EmpiricalDistribution run_sample_gamma_shape(const Params& p, long m, RandomStream& s) {
  fidsamp::GammaShapeSpec spec;
  spec.n = as_count(p, "n-obs");
  spec.t = p.at("t");
  return fidsamp::gamma_shape_fiducial(spec, m, s);
}
EmpiricalDistribution run_sample_correlation(const Params& p, long m, RandomStream& s) {
  return fidsamp::correlation_fiducial(p.at("r"), as_count(p, "n-obs"), m, s);
}

const std::map<std::string, SampleEntry>& sample_models() {
  static const std::map<std::string, SampleEntry> table = {
      {"normal-mean", {{"t", "sigma0", "n-obs"}, {}, &run_sample_normal_mean}},
      {"gamma-scale", {{"alpha", "n-obs", "t"}, {}, &run_sample_gamma_scale}},
      {"gamma-shape", {{"n-obs", "t"}, {}, &run_sample_gamma_shape}},
      {"correlation", {{"r", "n-obs"}, {}, &run_sample_correlation}},
  };
  return table;
}

struct PosteriorEntry {
  std::vector<std::string> required;
  std::vector<std::pair<std::string, double>> optional;
  EmpiricalDistribution (*run)(const Params&, long, RandomStream&);
};

EmpiricalDistribution run_posterior_two_point(const Params& p, long /*m*/, RandomStream&) {
  fidsamp::TwoPointModel m;
  m.u1 = p.at("u1");
  m.u2 = p.at("u2");
  m.p1 = p.at("p1");
  m.p2 = p.at("p2");
  std::function<double(double)> prior = [](double) { return 1.0; };
  const auto mean_it = p.find("prior-mean");
  const auto sd_it = p.find("prior-sd");
  if (mean_it != p.end() || sd_it != p.end()) {
    if (mean_it == p.end() || sd_it == p.end())
      throw std::invalid_argument("two-point: give both --prior-mean and --prior-sd or neither");
    const double mu = mean_it->second, sd = sd_it->second;
    if (!(sd > 0.0)) throw std::invalid_argument("two-point: --prior-sd must be > 0");
    prior = [mu, sd](double th) {
      const double z = (th - mu) / sd;
      return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
    };
  }
  return fidsamp::two_point_posterior(m, p.at("x"), prior).to_distribution();
}

EmpiricalDistribution run_posterior_location_normal(const Params& p, long m, RandomStream& s) {
  const double lo = p.at("prior-lo"), hi = p.at("prior-hi");
  if (!(hi > lo)) throw std::invalid_argument("location-normal: prior-hi must exceed prior-lo");
  const fidsamp::LocationModel lm = fidsamp::normal_location_model(p.at("sigma"));
  fidsamp::PosteriorProblem prob;
  prob.model = fidsamp::location_fiducial_model(lm);
  prob.u_density = lm.noise_density;
  prob.u_measure = fidsamp::MeasureTag::length;
  prob.t_measure = fidsamp::MeasureTag::length;
  const double density = 1.0 / (hi - lo);
  prob.tau_prior_density = [lo, hi, density](double t, double u) {
    const double theta = t - u;
    return (theta >= lo && theta <= hi) ? density : 0.0;
  };
  long proposals = std::lround(p.at("proposals"));
  if (proposals <= 0) proposals = std::max<long>(10 * m, 100000);
  return fidsamp::posterior_sample(prob, p.at("t"), proposals, m, s);
}

const std::map<std::string, PosteriorEntry>& posterior_models() {
  static const std::map<std::string, PosteriorEntry> table = {
      {"two-point", {{"x", "u1", "u2", "p1", "p2"}, {}, &run_posterior_two_point}},
      {"location-normal",
       {{"t", "prior-lo", "prior-hi"},
        {{"sigma", 1.0}, {"proposals", 0.0}},
        &run_posterior_location_normal}},
  };
  return table;
}

struct CoverageEntry {
  std::vector<std::string> required;  // beyond defaults below
  std::vector<std::pair<std::string, double>> optional;
  fidsamp::CoverageReport (*run)(const Params&, const fidsamp::IntervalSpec&, long, long,
                                 RandomStream&);
};

fidsamp::CoverageReport run_cov_normal_mean(const Params& p, const fidsamp::IntervalSpec& spec,
                                            long reps, long m, RandomStream& s) {
  const double theta = p.at("theta"), sigma0 = p.at("sigma0");
  const long n = as_count(p, "n-obs");
  fidsamp::CoverageProblem cp;
  cp.true_parameter = [theta](RandomStream&) { return theta; };
  cp.procedure = [sigma0, n, m](double th, RandomStream& sub) {
    const double t = th + sigma0 / std::sqrt(static_cast<double>(n)) * sub.normal();
    return fidsamp::normal_mean_fiducial(t, sigma0, n).sample(m, sub);
  };
  return fidsamp::coverage_experiment(cp, spec, reps, s);
}

fidsamp::CoverageReport run_cov_gamma_scale(const Params& p, const fidsamp::IntervalSpec& spec,
                                            long reps, long m, RandomStream& s) {
  const double theta = p.at("theta"), alpha = p.at("alpha");
  const long n = as_count(p, "n-obs");
  fidsamp::CoverageProblem cp;
  cp.true_parameter = [theta](RandomStream&) { return theta; };
  cp.procedure = [alpha, n, m](double th, RandomStream& sub) {
    double acc = 0.0;
    for (long i = 0; i < n; ++i) acc += th * sub.gamma(alpha);
    fidsamp::GammaScaleSpec spec2;
    spec2.alpha = alpha;
    spec2.n = n;
    spec2.t = acc / static_cast<double>(n);
    return fidsamp::gamma_scale_fiducial(spec2).sample(m, sub);
  };
  return fidsamp::coverage_experiment(cp, spec, reps, s);
}

fidsamp::CoverageReport run_cov_gamma_shape(const Params& p, const fidsamp::IntervalSpec& spec,
                                            long reps, long m, RandomStream& s) {
  const double theta = p.at("theta");
  const long n = as_count(p, "n-obs");
  if (!(theta > 0.0)) throw std::invalid_argument("gamma-shape: --theta must be > 0");
  fidsamp::CoverageProblem cp;
  cp.true_parameter = [theta](RandomStream&) { return theta; };
  cp.procedure = [n, m](double th, RandomStream& sub) {
    double acc = 0.0;
    for (long i = 0; i < n; ++i) acc += std::log(sub.gamma(th));
    fidsamp::GammaShapeSpec spec2;
    spec2.n = n;
    spec2.t = acc / static_cast<double>(n);
    return fidsamp::gamma_shape_fiducial(spec2, m, sub);
  };
  return fidsamp::coverage_experiment(cp, spec, reps, s);
}

EmpiricalDistribution mvn_p1_cloud(double mu, double sigma, long n, long m, bool want_mu,
                                   RandomStream& sub) {
  fidsamp::Matrix data(1, static_cast<int>(n));
  for (int j = 0; j < static_cast<int>(n); ++j) data.at(0, j) = mu + sigma * sub.normal();
  const fidsamp::LocScaleElement t = fidsamp::mvn_sufficient_statistic(data);
  const std::vector<fidsamp::MvnFiducialDraw> draws =
      fidsamp::mvn_fiducial_sample(t, n, m, sub);
  std::vector<double> v;
  v.reserve(draws.size());
  for (const fidsamp::MvnFiducialDraw& d : draws)
    v.push_back(want_mu ? d.mu[0] : d.sigma_chol.at(0, 0));
  return EmpiricalDistribution(std::move(v));
}

fidsamp::CoverageReport run_cov_mvn_mean(const Params& p, const fidsamp::IntervalSpec& spec,
                                         long reps, long m, RandomStream& s) {
  const double mu = p.at("mu"), sigma = p.at("sigma");
  const long n = as_count(p, "n-obs");
  if (!(sigma > 0.0)) throw std::invalid_argument("mvn-mean: --sigma must be > 0");
  fidsamp::CoverageProblem cp;
  cp.true_parameter = [mu](RandomStream&) { return mu; };
  cp.procedure = [mu, sigma, n, m](double, RandomStream& sub) {
    return mvn_p1_cloud(mu, sigma, n, m, /*want_mu=*/true, sub);
  };
  return fidsamp::coverage_experiment(cp, spec, reps, s);
}

fidsamp::CoverageReport run_cov_mvn_sigma(const Params& p, const fidsamp::IntervalSpec& spec,
                                          long reps, long m, RandomStream& s) {
  const double mu = p.at("mu"), sigma = p.at("sigma");
  const long n = as_count(p, "n-obs");
  if (!(sigma > 0.0)) throw std::invalid_argument("mvn-sigma: --sigma must be > 0");
  fidsamp::CoverageProblem cp;
  cp.true_parameter = [sigma](RandomStream&) { return sigma; };
  cp.procedure = [mu, sigma, n, m](double, RandomStream& sub) {
    return mvn_p1_cloud(mu, sigma, n, m, /*want_mu=*/false, sub);
  };
  return fidsamp::coverage_experiment(cp, spec, reps, s);
}

fidsamp::CoverageReport run_cov_correlation(const Params& p, const fidsamp::IntervalSpec& spec,
                                            long reps, long m, RandomStream& s) {
  const double rho = p.at("rho");
  const long n = as_count(p, "n-obs");
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("correlation: --rho must be in (-1, 1)");
  fidsamp::CoverageProblem cp;
  cp.true_parameter = [rho](RandomStream&) { return rho; };
  cp.procedure = [n, m](double r_true, RandomStream& sub) {
    const double r = fidsamp::sample_bivariate_correlation(r_true, static_cast<int>(n), sub);
    return fidsamp::correlation_fiducial(r, n, m, sub);
  };
  return fidsamp::coverage_experiment(cp, spec, reps, s);
}

const std::map<std::string, CoverageEntry>& coverage_models() {
  static const std::map<std::string, CoverageEntry> table = {
      {"normal-mean",
       {{}, {{"theta", 0.0}, {"sigma0", 1.0}, {"n-obs", 10}}, &run_cov_normal_mean}},
      {"gamma-scale",
       {{}, {{"theta", 2.0}, {"alpha", 2.0}, {"n-obs", 5}}, &run_cov_gamma_scale}},
      {"gamma-shape", {{}, {{"theta", 2.0}, {"n-obs", 10}}, &run_cov_gamma_shape}},
      {"mvn-mean", {{}, {{"mu", 0.0}, {"sigma", 1.0}, {"n-obs", 10}}, &run_cov_mvn_mean}},
      {"mvn-sigma", {{}, {{"mu", 0.0}, {"sigma", 1.0}, {"n-obs", 10}}, &run_cov_mvn_sigma}},
      {"correlation", {{}, {{"rho", 0.5}, {"n-obs", 20}}, &run_cov_correlation}},
  };
  return table;
}

struct SeparabilityEntry {
  std::vector<std::pair<std::string, double>> optional;
  fidsamp::SeparabilityResult (*run)(const Params&, double, RandomStream&);
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

fidsamp::SeparabilityResult run_sep_normal_location(const Params& p, double threshold,
                                                    RandomStream&) {
  const fidsamp::Cdf1D c = fidsamp::normal_location_cdf(p.at("sigma"));
  return fidsamp::lindley_separability_test(c, linspace(-2.0, 2.0, 21),
                                            linspace(-2.0, 2.0, 21), threshold);
}
fidsamp::SeparabilityResult run_sep_gamma_scale(const Params& p, double threshold,
                                                RandomStream&) {
  const fidsamp::Cdf1D c =
      fidsamp::gamma_scale_sampling_cdf(p.at("alpha"), as_count(p, "n-obs"));
  return fidsamp::lindley_separability_test(c, linspace(1.5, 6.0, 25),
                                            linspace(1.5, 6.0, 25), threshold);
}
fidsamp::SeparabilityResult run_sep_correlation(const Params& p, double threshold,
                                                RandomStream& s) {
  fidsamp::CorrelationCdfOptions opts;
  opts.n_obs = static_cast<int>(as_count(p, "n-obs"));
  const fidsamp::Cdf1D c = fidsamp::correlation_cdf_monte_carlo(opts, s);
  return fidsamp::lindley_separability_test(c, linspace(-0.6, 0.6, 13),
                                            linspace(-0.6, 0.6, 13), threshold);
}

const std::map<std::string, SeparabilityEntry>& separability_models() {
  static const std::map<std::string, SeparabilityEntry> table = {
      {"normal-location", {{{"sigma", 1.0}}, &run_sep_normal_location}},
      {"gamma-scale", {{{"alpha", 2.0}, {"n-obs", 5}}, &run_sep_gamma_scale}},
      {"correlation", {{{"n-obs", 5}}, &run_sep_correlation}},
  };
  return table;
}

// --------------------------------------------------------------- plumbing

// Numeric flags a subcommand understands; values recorded when given.
struct FlagSet {
  CLI::App* cmd = nullptr;
  std::map<std::string, double>* store = nullptr;
  std::map<std::string, double> bound;

  void add(CLI::App* c, std::map<std::string, double>* s,
           const std::vector<std::pair<std::string, std::string>>& flags) {
    cmd = c;
    store = s;
    for (const auto& [name, help] : flags) bound[name] = 0.0;
    for (auto& [name, slot] : bound) {
      std::string help;
      for (const auto& [n, h] : flags)
        if (n == name) help = h;
      c->add_option("--" + name, slot, help);
    }
  }
  void collect() {
    for (const auto& [name, slot] : bound)
      if (cmd->count("--" + name) > 0) (*store)[name] = slot;
  }
};

template <typename Entry>
const Entry& lookup_model(const std::map<std::string, Entry>& table, const std::string& id) {
  const auto it = table.find(id);
  if (it == table.end()) throw CLI::ValidationError("--model", "unknown model id: " + id);
  return it->second;
}

// Apply defaults, then verify required parameters are present; returns the
// canonical parameter order for JSON echo.
template <typename Entry>
std::vector<std::string> finalize_params(const Entry& entry, Params& p) {
  std::vector<std::string> order;
  for (const std::string& k : entry.required) {
    if (!p.count(k)) throw CLI::RequiredError("--" + k);
    order.push_back(k);
  }
  for (const auto& [k, v] : entry.optional) {
    if (!p.count(k)) p[k] = v;
    order.push_back(k);
  }
  for (const auto& [k, v] : p)
    if (std::find(order.begin(), order.end(), k) == order.end()) order.push_back(k);
  return order;
}

fidsamp::IntervalSpec make_spec(double level, const std::string& kind) {
  fidsamp::IntervalSpec spec;
  spec.level = level;
  spec.kind = kind == "shortest" ? fidsamp::IntervalSpec::Kind::shortest
                                 : fidsamp::IntervalSpec::Kind::symmetric;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo fiducial inference toolkit"};
  app.require_subcommand(1);

  // shared state
  std::string model, out_path, format = "csv", kind = "symmetric", table_path;
  long n_samples = 100000, replications = 1000, cloud = 1000;
  double level = 0.95, threshold = 0.01;
  std::uint64_t seed_flag = kDefaultSeed;
  Params given;
  FlagSet sample_flags, posterior_flags, coverage_flags, separability_flags;

  const auto add_common = [&](CLI::App* c, bool with_samples) {
    c->add_option("--model", model, "model id (see --help of this subcommand)")->required();
    if (with_samples) c->add_option("--samples", n_samples, "number of draws (default 100000)");
    c->add_option("--seed", seed_flag,
                  "RNG seed (default 42; FIDSAMP_SEED overrides when absent)");
    c->add_option("--out", out_path, "write draws to this file");
    c->add_option("--format", format, "output file format: csv | json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--level", level, "interval level (default 0.95)");
    c->add_option("--kind", kind, "interval kind: symmetric | shortest")
        ->check(CLI::IsMember({"symmetric", "shortest"}));
  };

  CLI::App* sample = app.add_subcommand(
      "sample", "fiducial draws; models: normal-mean, gamma-scale, gamma-shape, correlation");
  add_common(sample, true);
  sample_flags.add(sample, &given,
                   {{"t", "observed statistic"},
                    {"sigma0", "known observation sd (normal-mean)"},
                    {"alpha", "known shape (gamma-scale)"},
                    {"n-obs", "number of observations behind the statistic"},
                    {"r", "observed correlation (correlation)"}});

  CLI::App* posterior = app.add_subcommand(
      "posterior", "posterior draws; models: two-point, location-normal");
  add_common(posterior, true);
  posterior_flags.add(posterior, &given,
                      {{"x", "observed value (two-point)"},
                       {"u1", "first noise atom (two-point)"},
                       {"u2", "second noise atom (two-point)"},
                       {"p1", "mass of first atom (two-point)"},
                       {"p2", "mass of second atom (two-point)"},
                       {"prior-mean", "normal prior mean (two-point, optional)"},
                       {"prior-sd", "normal prior sd (two-point, optional)"},
                       {"t", "observed value (location-normal)"},
                       {"sigma", "noise sd (location-normal, default 1)"},
                       {"prior-lo", "uniform prior lower end (location-normal)"},
                       {"prior-hi", "uniform prior upper end (location-normal)"},
                       {"proposals", "importance proposals (default 10x samples)"}});

  CLI::App* coverage = app.add_subcommand(
      "coverage",
      "interval coverage experiment; models: normal-mean, gamma-scale, gamma-shape, "
      "mvn-mean, mvn-sigma, correlation");
  add_common(coverage, false);
  coverage->add_option("--replications", replications,
                       "number of repeated-sampling replications (default 1000)");
  coverage->add_option("--cloud", cloud, "fiducial draws per replication (default 1000)");
  coverage_flags.add(coverage, &given,
                     {{"theta", "true parameter (normal-mean / gamma-scale / gamma-shape)"},
                      {"sigma0", "known observation sd (normal-mean)"},
                      {"alpha", "known shape (gamma-scale)"},
                      {"mu", "true mean (mvn models)"},
                      {"sigma", "true sd (mvn models)"},
                      {"rho", "true correlation (correlation)"},
                      {"n-obs", "observations per replication"}});

  CLI::App* separability = app.add_subcommand(
      "separability",
      "separability residual of a sampling-CDF family; models: normal-location, "
      "gamma-scale, correlation");
  separability->add_option("--model", model, "model id")->required();
  separability->add_option("--threshold", threshold, "separability threshold (default 0.01)");
  separability->add_option("--seed", seed_flag,
                           "RNG seed (default 42; FIDSAMP_SEED overrides when absent)");
  separability_flags.add(separability, &given,
                         {{"sigma", "noise sd (normal-location, default 1)"},
                          {"alpha", "known shape (gamma-scale, default 2)"},
                          {"n-obs", "observations behind the statistic"}});

  CLI::App* loop_check =
      app.add_subcommand("loop-check", "quasigroup/loop axioms of a finite Cayley table");
  loop_check->add_option("--table", table_path,
                         "table file: first line order n, then n rows of n zero-based indices")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    if (sample->parsed() || posterior->parsed()) {
      FlagSet& flags = sample->parsed() ? sample_flags : posterior_flags;
      flags.collect();
      const bool s_given = flags.cmd->count("--seed") > 0;
      if (n_samples < 1)
        throw CLI::ValidationError("--samples", "must be a positive integer");
      const std::uint64_t seed = resolve_seed(s_given, seed_flag);
      RandomStream stream(seed);
      std::vector<std::string> order;
      EmpiricalDistribution d({0.0});
      if (sample->parsed()) {
        const SampleEntry& entry = lookup_model(sample_models(), model);
        order = finalize_params(entry, given);
        d = entry.run(given, n_samples, stream);
      } else {
        const PosteriorEntry& entry = lookup_model(posterior_models(), model);
        order = finalize_params(entry, given);
        d = entry.run(given, n_samples, stream);
      }
      emit_result(model, given, order, seed, d, make_spec(level, kind), out_path, format);
      return 0;
    }

    if (coverage->parsed()) {
      coverage_flags.collect();
      const bool s_given = coverage->count("--seed") > 0;
      const std::uint64_t seed = resolve_seed(s_given, seed_flag);
      RandomStream stream(seed);
      const CoverageEntry& entry = lookup_model(coverage_models(), model);
      const std::vector<std::string> order = finalize_params(entry, given);
      const fidsamp::CoverageReport rep =
          entry.run(given, make_spec(level, kind), replications, cloud, stream);
      json doc;
      doc["model"] = model;
      doc["params"] = params_json(given, order);
      doc["seed"] = seed;
      doc["level"] = level;
      doc["kind"] = kind;
      doc["cloud"] = cloud;
      doc["attempted"] = rep.attempted;
      doc["failures"] = rep.failures;
      doc["replications"] = rep.replications;
      doc["hits"] = rep.hits;
      doc["rate"] = rep.rate;
      doc["standard_error"] = rep.standard_error;
      std::fputs(doc.dump(2).c_str(), stdout);
      std::fputc('\n', stdout);
      return 0;
    }

    if (separability->parsed()) {
      separability_flags.collect();
      const bool s_given = separability->count("--seed") > 0;
      const std::uint64_t seed = resolve_seed(s_given, seed_flag);
      RandomStream stream(seed);
      const SeparabilityEntry& entry = lookup_model(separability_models(), model);
      Params p = given;
      std::vector<std::string> order;
      for (const auto& [k, v] : entry.optional) {
        if (!p.count(k)) p[k] = v;
        order.push_back(k);
      }
      const fidsamp::SeparabilityResult res = entry.run(p, threshold, stream);
      json doc;
      doc["model"] = model;
      doc["params"] = params_json(p, order);
      doc["seed"] = seed;
      doc["threshold"] = res.threshold;
      doc["max_residual"] = res.max_residual;
      doc["separable"] = res.separable;
      std::fputs(doc.dump(2).c_str(), stdout);
      std::fputc('\n', stdout);
      return 0;
    }

    if (loop_check->parsed()) {
      const fidsamp::LoopTable tbl = fidsamp::load_loop_table(table_path);
      const fidsamp::QuasigroupCheck check = fidsamp::quasigroup_check(tbl);
      json doc;
      doc["order"] = tbl.order;
      doc["quasigroup"] = check.is_quasigroup;
      doc["loop"] = check.is_loop;
      doc["identity"] = check.identity ? json(*check.identity) : json(nullptr);
      if (check.is_quasigroup) {
        const fidsamp::InvariantMeasureResult m = fidsamp::finite_loop_invariant_measure(tbl);
        doc["nullspace_dimension"] = m.nullspace_dimension;
        doc["invariant_weight"] = m.weights.front();
      }
      std::fputs(doc.dump(2).c_str(), stdout);
      std::fputc('\n', stdout);
      return 0;
    }
  } catch (const CLI::RequiredError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fidsamp: %s\n", e.what());
    return 1;
  }
  return 0;
}
