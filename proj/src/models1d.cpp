#include "fidsamp/models1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "fidsamp/errors.hpp"
#include "fidsamp/roots.hpp"
#include "fidsamp/special.hpp"

namespace fidsamp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- location

LocationModel normal_location_model(double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("normal_location_model: sd must be > 0");
  LocationModel m;
  m.noise_sampler = [sd](RandomStream& s) { return sd * s.normal(); };
  const double inv = 1.0 / sd;
  const double norm = inv / std::sqrt(2.0 * M_PI);
  m.noise_density = [norm, inv](double u) {
    const double z = u * inv;
    return norm * std::exp(-0.5 * z * z);
  };
  return m;
}

FiducialModel location_fiducial_model(const LocationModel& m) {
  if (!m.noise_sampler)
    throw std::invalid_argument("location_fiducial_model: missing noise sampler");
  FiducialModel f;
  f.sample_u = m.noise_sampler;
  f.tau = [](double u, double theta) { return theta + u; };
  f.solve_theta = [](double u, double t) { return t - u; };
  f.solve_u = [](double theta, double t) { return t - theta; };
  f.conventional = true;
  f.simple = true;
  f.pivotal = true;
  return f;
}

std::vector<double> location_posterior_density(const LocationModel& m, double t,
                                               const std::function<double(double)>& prior,
                                               const std::vector<double>& theta_grid) {
  if (!m.noise_density)
    throw std::invalid_argument("location_posterior_density: missing noise density");
  if (!prior) throw std::invalid_argument("location_posterior_density: missing prior");
  if (theta_grid.size() < 2)
    throw std::invalid_argument("location_posterior_density: grid needs >= 2 points");

  std::vector<double> dens(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const double v = m.noise_density(t - theta_grid[i]) * prior(theta_grid[i]);
    if (!(v >= 0.0))
      throw std::invalid_argument("location_posterior_density: negative integrand");
    dens[i] = v;
  }
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < theta_grid.size(); ++i) {
    const double h = theta_grid[i + 1] - theta_grid[i];
    if (!(h > 0.0))
      throw std::invalid_argument("location_posterior_density: grid must be increasing");
    norm += 0.5 * h * (dens[i] + dens[i + 1]);
  }
  if (!std::isfinite(norm) || !(norm > 0.0))
    throw SigmaFinitenessError("location_posterior_density: normalizer is zero or divergent");
  for (double& v : dens) v /= norm;
  return dens;
}

// --------------------------------------------------------------- two point

EmpiricalDistribution TwoPointPosterior::to_distribution() const {
  return EmpiricalDistribution({theta[0], theta[1]}, {mass[0], mass[1]});
}

TwoPointPosterior two_point_posterior(const TwoPointModel& m, double x,
                                      const std::function<double(double)>& prior) {
  if (!prior) throw std::invalid_argument("two_point_posterior: missing prior");
  if (m.u1 == m.u2) throw std::invalid_argument("two_point_posterior: atoms must differ");
  if (!(m.p1 > 0.0 && m.p2 > 0.0))
    throw std::invalid_argument("two_point_posterior: atom probabilities must be positive");

  TwoPointPosterior out;
  out.theta = {x - m.u1, x - m.u2};
  const double q1 = prior(out.theta[0]) * m.p1;
  const double q2 = prior(out.theta[1]) * m.p2;
  if (!(q1 >= 0.0 && q2 >= 0.0) || !std::isfinite(q1) || !std::isfinite(q2))
    throw std::invalid_argument("two_point_posterior: prior produced invalid weight");
  const double total = q1 + q2;
  if (!(total > 0.0))
    throw DegeneratePosteriorError("two_point_posterior: both posterior masses are zero");
  out.mass = {q1 / total, q2 / total};
  return out;
}

// -------------------------------------------------------------- normal mean

std::pair<double, double> NormalMeanFiducial::expanded_interval(double k) const {
  return {t - k * sd, t + k * sd};
}

double NormalMeanFiducial::cdf(double theta) const { return normal_cdf((theta - t) / sd); }

double NormalMeanFiducial::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("NormalMeanFiducial::quantile: p outside (0,1)");
  RootOptions opts;
  opts.guess = 0.0;
  const double z = find_root_monotone([](double x) { return normal_cdf(x); }, p, opts);
  return t + sd * z;
}

EmpiricalDistribution NormalMeanFiducial::sample(long m, RandomStream& stream) const {
  return sample_fiducial(model, t, m, stream);
}

NormalMeanFiducial normal_mean_fiducial(double t, double sigma0, long n) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("normal_mean_fiducial: sigma0 must be > 0");
  if (n < 1) throw std::invalid_argument("normal_mean_fiducial: n must be >= 1");
  NormalMeanFiducial f;
  f.t = t;
  f.sigma0 = sigma0;
  f.n = n;
  f.mean = t;
  f.sd = sigma0 / std::sqrt(static_cast<double>(n));
  const double sd = f.sd;
  f.model.sample_u = [](RandomStream& s) { return s.normal(); };
  f.model.tau = [sd](double u, double theta) { return theta + sd * u; };
  f.model.solve_theta = [sd](double u, double t_) { return t_ - sd * u; };
  f.model.solve_u = [sd](double theta, double t_) { return (t_ - theta) / sd; };
  f.model.conventional = true;
  f.model.simple = true;
  f.model.pivotal = true;
  return f;
}

// -------------------------------------------------------------- gamma scale

double GammaScaleFiducial::mean() const {
  if (!has_mean())
    throw std::domain_error("GammaScaleFiducial::mean: undefined for shape <= 1");
  return scale / (shape - 1.0);
}

double GammaScaleFiducial::cdf(double theta) const {
  if (!(theta > 0.0)) return 0.0;
  return 1.0 - gamma_cdf(scale / theta, shape);
}

double GammaScaleFiducial::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("GammaScaleFiducial::quantile: p outside (0,1)");
  return scale / gamma_inv_cdf(1.0 - p, shape);
}

EmpiricalDistribution GammaScaleFiducial::sample(long m, RandomStream& stream) const {
  return sample_fiducial(model, spec.t, m, stream);
}

GammaScaleFiducial gamma_scale_fiducial(const GammaScaleSpec& spec) {
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("gamma_scale_fiducial: alpha must be > 0");
  if (spec.n < 1) throw std::invalid_argument("gamma_scale_fiducial: n must be >= 1");
  if (!(spec.t > 0.0)) throw std::invalid_argument("gamma_scale_fiducial: t must be > 0");

  GammaScaleFiducial f;
  f.spec = spec;
  f.shape = static_cast<double>(spec.n) * spec.alpha;
  f.scale = static_cast<double>(spec.n) * spec.t;
  const double shape = f.shape;
  const double inv_n = 1.0 / static_cast<double>(spec.n);
  // V = (average of n Gamma(alpha,1) draws) ~ Gamma(n alpha, 1/n).
  f.model.sample_u = [shape, inv_n](RandomStream& s) { return s.gamma(shape) * inv_n; };
  f.model.tau = [](double v, double theta) { return theta * v; };
  f.model.solve_theta = [](double v, double t) {
    if (!(v > 0.0)) throw std::domain_error("gamma scale: nonpositive auxiliary value");
    return t / v;
  };
  f.model.solve_u = [](double theta, double t) {
    if (!(theta > 0.0)) throw std::domain_error("gamma scale: nonpositive parameter");
    return t / theta;
  };
  f.model.conventional = true;
  f.model.simple = true;
  f.model.pivotal = true;
  return f;
}

GammaScaleEquivariant gamma_scale_best_equivariant(const GammaScaleSpec& spec) {
  if (!(spec.alpha > 0.0) || spec.n < 1 || !(spec.t > 0.0))
    throw std::invalid_argument("gamma_scale_best_equivariant: invalid spec");
  const double na = static_cast<double>(spec.n) * spec.alpha;
  const double nt = static_cast<double>(spec.n) * spec.t;
  GammaScaleEquivariant e;
  e.correction = std::exp(std::log(na) - digamma(na));
  e.theta_tilde = (spec.t / spec.alpha) * e.correction;
  e.log_scale_estimate = std::log(nt) - digamma(na);
  return e;
}

// ---------------------------------------------------- CDF-inversion fiducial

Cdf1D normal_location_cdf(double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("normal_location_cdf: sd must be > 0");
  Cdf1D c;
  c.F = [sd](double t, double theta) { return normal_cdf((t - theta) / sd); };
  c.direction = Cdf1D::Direction::decreasing;
  c.t_lo = -kInf;
  c.t_hi = kInf;
  c.theta_lo = -kInf;
  c.theta_hi = kInf;
  return c;
}

Cdf1D gamma_scale_sampling_cdf(double alpha, long n) {
  if (!(alpha > 0.0) || n < 1)
    throw std::invalid_argument("gamma_scale_sampling_cdf: invalid parameters");
  const double shape = static_cast<double>(n) * alpha;
  const double nn = static_cast<double>(n);
  Cdf1D c;
  c.F = [shape, nn](double t, double theta) {
    if (!(theta > 0.0)) throw std::domain_error("gamma_scale_sampling_cdf: theta must be > 0");
    if (t <= 0.0) return 0.0;
    return gamma_cdf(nn * t / theta, shape);
  };
  c.direction = Cdf1D::Direction::decreasing;
  c.t_lo = 0.0;
  c.t_hi = kInf;
  c.theta_lo = 0.0;
  c.theta_hi = kInf;
  return c;
}

double cdf_solve_theta(const Cdf1D& c, double t, double target) {
  if (!c.F) throw std::invalid_argument("cdf_solve_theta: missing F");
  RootOptions opts;
  // A CDF is flat in its tails, so a loose f-tolerance there translates into
  // a large parameter error; drive the iteration by the (relative) width
  // stop instead.
  opts.f_tol = 1e-15;
  opts.domain_lo = c.theta_lo;
  opts.domain_hi = c.theta_hi;
  if (std::isfinite(c.theta_lo) && std::isfinite(c.theta_hi)) {
    opts.bracket_lo = c.theta_lo;
    opts.bracket_hi = c.theta_hi;
  } else if (c.theta_lo >= 0.0) {
    opts.guess = std::isfinite(t) && t > 0.0 ? std::max(t, 1e-6) : 1.0;
  } else {
    opts.guess = std::isfinite(t) ? t : 0.0;
  }
  return find_root_monotone([&c, t](double theta) { return c.F(t, theta); }, target, opts);
}

double fisher_solve(const Cdf1D& c, double t, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("fisher_solve: u outside (0,1)");
  const double target = (c.direction == Cdf1D::Direction::increasing) ? u : 1.0 - u;
  return cdf_solve_theta(c, t, target);
}

EmpiricalDistribution fisher_fiducial_from_cdf(const Cdf1D& c, double t, long n,
                                               RandomStream& stream) {
  if (n <= 0) throw std::invalid_argument("fisher_fiducial_from_cdf: n must be positive");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) values.push_back(fisher_solve(c, t, stream.uniform01()));
  return EmpiricalDistribution(std::move(values));
}

FiducialModel cdf_fiducial_model(const Cdf1D& c) {
  if (!c.F) throw std::invalid_argument("cdf_fiducial_model: missing F");
  const Cdf1D cc = c;  // capture by value; the closures own the family
  FiducialModel m;
  m.sample_u = [](RandomStream& s) { return s.uniform01(); };
  m.tau = [cc](double u, double theta) {
    RootOptions opts;
    opts.f_tol = 1e-15;  // tail flatness: let the width stop govern
    opts.domain_lo = cc.t_lo;
    opts.domain_hi = cc.t_hi;
    if (std::isfinite(cc.t_lo) && std::isfinite(cc.t_hi)) {
      opts.bracket_lo = cc.t_lo;
      opts.bracket_hi = cc.t_hi;
    } else if (cc.t_lo >= 0.0) {
      opts.guess = 1.0;
    } else {
      opts.guess = 0.0;
    }
    return find_root_monotone([&cc, theta](double t) { return cc.F(t, theta); }, u, opts);
  };
  m.solve_theta = [cc](double u, double t) { return cdf_solve_theta(cc, t, u); };
  m.solve_u = [cc](double theta, double t) { return cc.F(t, theta); };
  m.conventional = true;
  m.simple = true;
  m.pivotal = true;
  return m;
}

// --------------------------------------------------------------- gamma shape

EmpiricalDistribution gamma_shape_fiducial(const GammaShapeSpec& spec, long n_samples,
                                           RandomStream& stream) {
  if (spec.n < 1) throw std::invalid_argument("gamma_shape_fiducial: n must be >= 1");
  if (!std::isfinite(spec.t)) throw std::invalid_argument("gamma_shape_fiducial: t not finite");
  if (n_samples <= 0)
    throw std::invalid_argument("gamma_shape_fiducial: n_samples must be positive");

  const std::size_t n = static_cast<std::size_t>(spec.n);
  const double inv_n = 1.0 / static_cast<double>(spec.n);

  // Initial parameter guess: digamma(theta) ~ mean log observation.
  RootOptions psi_opts;
  psi_opts.domain_lo = 1e-8;
  psi_opts.domain_hi = 1e8;
  psi_opts.guess = 1.0;
  psi_opts.f_tol = 1e-6;
  psi_opts.x_tol = 1e-8;
  double theta_guess =
      find_root_monotone([](double x) { return digamma(x); }, spec.t, psi_opts);

  std::vector<double> u(n);
  std::vector<double> hints(n);

  // mean_i ln F^{-1}(u_i; theta), warm-starting each quantile at the value
  // found for the previous theta -- nearby evaluations dominate the root
  // search, so the hint usually lands within a couple of iterations.
  const auto objective = [&](double theta) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = gamma_inv_cdf(u[i], theta,
                                     hints[i] > 0.0 ? std::optional<double>(hints[i])
                                                    : std::nullopt);
      hints[i] = x;
      if (!(x > 0.0)) throw NoRootError("gamma_shape_fiducial: quantile underflow");
      s += std::log(x);
    }
    return s * inv_n;
  };

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_samples));
  long flagged = 0;
  while (static_cast<long>(values.size()) < n_samples) {
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = stream.uniform01();
      hints[i] = 0.0;
    }
    RootOptions opts;
    opts.domain_lo = 1e-8;
    opts.domain_hi = 1e8;
    opts.guess = theta_guess;
    opts.f_tol = 1e-10;
    opts.x_tol = 1e-10;
    try {
      const double theta = find_root_monotone(objective, spec.t, opts);
      values.push_back(theta);
      theta_guess = theta;  // draws cluster; reuse as next seed
    } catch (const std::exception&) {
      ++flagged;
      const long attempts = static_cast<long>(values.size()) + flagged;
      if (flagged * 1000 > attempts && flagged > 1)
        throw SolverBudgetError("gamma_shape_fiducial: more than 0.1% flagged draws");
    }
  }
  EmpiricalDistribution out(std::move(values));
  if (flagged > 0)
    out.add_note("flagged draws redrawn: " + std::to_string(flagged));
  return out;
}

// --------------------------------------------------------- separability test

SeparabilityResult lindley_separability_test(const Cdf1D& c,
                                             const std::vector<double>& t_grid,
                                             const std::vector<double>& theta_grid,
                                             double threshold) {
  if (!c.F) throw std::invalid_argument("lindley_separability_test: missing F");
  if (t_grid.size() < 4 || theta_grid.size() < 4)
    throw std::invalid_argument("lindley_separability_test: grids need >= 4 points");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i + 1] > t_grid[i]))
      throw std::invalid_argument("lindley_separability_test: t grid must be increasing");
  for (std::size_t j = 0; j + 1 < theta_grid.size(); ++j)
    if (!(theta_grid[j + 1] > theta_grid[j]))
      throw std::invalid_argument("lindley_separability_test: theta grid must be increasing");

  const std::size_t nt = t_grid.size(), nh = theta_grid.size();
  std::vector<double> F(nt * nh);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nh; ++j) {
      const double v = c.F(t_grid[i], theta_grid[j]);
      if (!std::isfinite(v))
        throw std::invalid_argument("lindley_separability_test: F not finite on grid");
      F[i * nh + j] = v;
    }

  // ln R on the interior grid, R = -(dF/dtheta)/(dF/dt) by central
  // differences.
  std::vector<double> lnR((nt - 2) * (nh - 2));
  for (std::size_t i = 1; i + 1 < nt; ++i)
    for (std::size_t j = 1; j + 1 < nh; ++j) {
      const double dFdt =
          (F[(i + 1) * nh + j] - F[(i - 1) * nh + j]) / (t_grid[i + 1] - t_grid[i - 1]);
      const double dFdh =
          (F[i * nh + (j + 1)] - F[i * nh + (j - 1)]) / (theta_grid[j + 1] - theta_grid[j - 1]);
      if (!(dFdt > 0.0))
        throw NonMonotoneError("lindley_separability_test: dF/dt <= 0 on grid");
      const double R = -dFdh / dFdt;
      if (!(R > 0.0))
        throw NonMonotoneError("lindley_separability_test: R <= 0 on grid");
      lnR[(i - 1) * (nh - 2) + (j - 1)] = std::log(R);
    }

  SeparabilityResult res;
  res.threshold = threshold;
  const std::size_t mt = nt - 2, mh = nh - 2;
  for (std::size_t i = 0; i + 1 < mt; ++i)
    for (std::size_t j = 0; j + 1 < mh; ++j) {
      const double d = lnR[(i + 1) * mh + (j + 1)] - lnR[(i + 1) * mh + j] -
                       lnR[i * mh + (j + 1)] + lnR[i * mh + j];
      res.max_residual = std::max(res.max_residual, std::fabs(d));
    }
  res.separable = res.max_residual <= threshold;

  if (res.separable) {
    // R = h(theta)/g(t); anchor both factors at the central interior node.
    const std::size_t i0 = mt / 2, j0 = mh / 2;
    const double r00 = std::exp(lnR[i0 * mh + j0]);
    res.t_nodes.assign(t_grid.begin() + 1, t_grid.end() - 1);
    res.theta_nodes.assign(theta_grid.begin() + 1, theta_grid.end() - 1);
    std::vector<double> g(mt), h(mh);
    for (std::size_t i = 0; i < mt; ++i) g[i] = r00 / std::exp(lnR[i * mh + j0]);
    for (std::size_t j = 0; j < mh; ++j) h[j] = std::exp(lnR[i0 * mh + j]);
    res.G.assign(mt, 0.0);
    for (std::size_t i = 1; i < mt; ++i)
      res.G[i] = res.G[i - 1] +
                 0.5 * (g[i] + g[i - 1]) * (res.t_nodes[i] - res.t_nodes[i - 1]);
    res.H.assign(mh, 0.0);
    for (std::size_t j = 1; j < mh; ++j)
      res.H[j] = res.H[j - 1] +
                 0.5 * (h[j] + h[j - 1]) * (res.theta_nodes[j] - res.theta_nodes[j - 1]);
  }
  return res;
}

// ------------------------------------------------ empirical correlation CDF

double sample_bivariate_correlation(double rho, int n_obs, RandomStream& stream) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("sample_bivariate_correlation: |rho| must be < 1");
  if (n_obs < 3)
    throw std::invalid_argument("sample_bivariate_correlation: n_obs must be >= 3");
  const double mix = std::sqrt(1.0 - rho * rho);
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n_obs; ++i) {
    const double z1 = stream.normal();
    const double z2 = stream.normal();
    const double x = z1;
    const double y = rho * z1 + mix * z2;
    sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
  }
  const double n = static_cast<double>(n_obs);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  const double cxy = sxy / n - (sx / n) * (sy / n);
  const double denom = std::sqrt(vx * vy);
  if (!(denom > 0.0)) return 0.0;  // measure-zero degeneracy
  return std::max(-1.0, std::min(1.0, cxy / denom));
}

namespace {

struct CorrelationTable {
  std::vector<double> rho_nodes;
  std::vector<std::vector<double>> sorted_r;  // one sorted replicate set per node
  double r_lo = -0.9, r_hi = 0.9;
  double mix = 1e-3;

  // Piecewise-linear CDF through plotting positions (i+1)/(N+1), anchored at
  // (r_lo, 0) and (r_hi, 1).
  double node_cdf(std::size_t k, double r) const {
    const std::vector<double>& s = sorted_r[k];
    if (r <= r_lo) return 0.0;
    if (r >= r_hi) return 1.0;
    const double N = static_cast<double>(s.size());
    const std::size_t j =
        static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), r) - s.begin());
    const double lo_x = (j == 0) ? r_lo : s[j - 1];
    const double lo_F = static_cast<double>(j) / (N + 1.0);
    const double hi_x = (j == s.size()) ? r_hi : s[j];
    const double hi_F = (j == s.size()) ? 1.0 : (static_cast<double>(j) + 1.0) / (N + 1.0);
    if (!(hi_x > lo_x)) return hi_F;
    const double w = (r - lo_x) / (hi_x - lo_x);
    return lo_F + w * (hi_F - lo_F);
  }

  double eval(double r, double rho) const {
    const double rc = std::max(rho_nodes.front(), std::min(rho_nodes.back(), rho));
    const auto it = std::upper_bound(rho_nodes.begin(), rho_nodes.end(), rc);
    std::size_t k = (it == rho_nodes.begin())
                        ? 0
                        : static_cast<std::size_t>(it - rho_nodes.begin()) - 1;
    if (k + 1 >= rho_nodes.size()) k = rho_nodes.size() - 2;
    const double w = (rc - rho_nodes[k]) / (rho_nodes[k + 1] - rho_nodes[k]);
    const double base = (1.0 - w) * node_cdf(k, r) + w * node_cdf(k + 1, r);
    const double unif =
        std::max(0.0, std::min(1.0, (r - r_lo) / (r_hi - r_lo)));
    return (1.0 - mix) * base + mix * unif;
  }
};

}  // namespace

Cdf1D correlation_cdf_monte_carlo(const CorrelationCdfOptions& opts, RandomStream& stream) {
  if (opts.n_obs < 3)
    throw std::invalid_argument("correlation_cdf_monte_carlo: n_obs must be >= 3");
  if (opts.replicates_per_node < 100)
    throw std::invalid_argument("correlation_cdf_monte_carlo: too few replicates");
  if (opts.rho_node_count < 3)
    throw std::invalid_argument("correlation_cdf_monte_carlo: need >= 3 rho nodes");
  if (!(opts.rho_lo < opts.rho_hi) || !(opts.r_lo < opts.r_hi))
    throw std::invalid_argument("correlation_cdf_monte_carlo: empty domain");
  if (!(opts.uniform_mix >= 0.0 && opts.uniform_mix < 0.5))
    throw std::invalid_argument("correlation_cdf_monte_carlo: uniform_mix outside [0, 0.5)");

  auto table = std::make_shared<CorrelationTable>();
  table->r_lo = opts.r_lo;
  table->r_hi = opts.r_hi;
  table->mix = opts.uniform_mix;
  table->rho_nodes.resize(static_cast<std::size_t>(opts.rho_node_count));
  for (int k = 0; k < opts.rho_node_count; ++k)
    table->rho_nodes[static_cast<std::size_t>(k)] =
        opts.rho_lo + (opts.rho_hi - opts.rho_lo) * static_cast<double>(k) /
                          static_cast<double>(opts.rho_node_count - 1);

  table->sorted_r.resize(table->rho_nodes.size());
  for (std::size_t k = 0; k < table->rho_nodes.size(); ++k) {
    RandomStream sub = stream.substream(k);
    std::vector<double>& s = table->sorted_r[k];
    s.resize(static_cast<std::size_t>(opts.replicates_per_node));
    for (long i = 0; i < opts.replicates_per_node; ++i) {
      double r = sample_bivariate_correlation(table->rho_nodes[k], opts.n_obs, sub);
      // censor at the evaluation boundary so interpolation anchors stay ordered
      r = std::max(opts.r_lo, std::min(opts.r_hi, r));
      s[static_cast<std::size_t>(i)] = r;
    }
    std::sort(s.begin(), s.end());
  }

  Cdf1D c;
  c.F = [table](double r, double rho) { return table->eval(r, rho); };
  c.direction = Cdf1D::Direction::decreasing;
  c.t_lo = opts.r_lo;
  c.t_hi = opts.r_hi;
  c.theta_lo = opts.rho_lo;
  c.theta_hi = opts.rho_hi;
  return c;
}

}  // namespace fidsamp
