#include "fidsamp/group.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fidsamp/errors.hpp"

namespace fidsamp {

LocScaleElement group_identity(int p) {
  if (p < 1) throw std::invalid_argument("group_identity: dimension must be >= 1");
  LocScaleElement e;
  e.mu.assign(static_cast<std::size_t>(p), 0.0);
  e.L = LowerTriangular::identity(p);
  return e;
}

LocScaleElement group_mul(const LocScaleElement& a, const LocScaleElement& b) {
  if (a.dim() != b.dim() || a.mu.size() != b.mu.size() ||
      a.mu.size() != static_cast<std::size_t>(a.dim()))
    throw std::invalid_argument("group_mul: dimension mismatch");
  LocScaleElement out;
  out.mu = a.L.matvec(b.mu);
  for (std::size_t i = 0; i < out.mu.size(); ++i) out.mu[i] += a.mu[i];
  out.L = a.L.mul(b.L);
  return out;
}

LocScaleElement group_inv(const LocScaleElement& a) {
  if (a.mu.size() != static_cast<std::size_t>(a.dim()))
    throw std::invalid_argument("group_inv: dimension mismatch");
  LocScaleElement out;
  out.L = a.L.inverse();
  out.mu = out.L.matvec(a.mu);
  for (double& v : out.mu) v = -v;
  return out;
}

std::vector<double> group_act(const LocScaleElement& g, const std::vector<double>& x) {
  std::vector<double> y = g.L.matvec(x);
  if (y.size() != g.mu.size()) throw std::invalid_argument("group_act: dimension mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += g.mu[i];
  return y;
}

LocScaleElement mvn_sufficient_statistic(const Matrix& data) {
  const int p = data.rows();
  const int n = data.cols();
  if (p < 1) throw std::invalid_argument("mvn_sufficient_statistic: empty data");
  if (n < p + 1)
    throw std::invalid_argument(
        "mvn_sufficient_statistic: need at least p + 1 observations, got " +
        std::to_string(n));

  LocScaleElement t;
  t.mu.assign(static_cast<std::size_t>(p), 0.0);
  for (int i = 0; i < p; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += data.at(i, j);
    t.mu[static_cast<std::size_t>(i)] = s / static_cast<double>(n);
  }

  Matrix cov(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = a; b < p; ++b) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += (data.at(a, j) - t.mu[static_cast<std::size_t>(a)]) *
             (data.at(b, j) - t.mu[static_cast<std::size_t>(b)]);
      const double v = s / static_cast<double>(n);
      cov.at(a, b) = v;
      cov.at(b, a) = v;
    }
  t.L = cholesky(cov);
  return t;
}

std::vector<MvnFiducialDraw> mvn_fiducial_sample(const LocScaleElement& t, long n_obs,
                                                 long m, RandomStream& stream) {
  const int p = t.dim();
  if (p < 1 || t.mu.size() != static_cast<std::size_t>(p))
    throw std::invalid_argument("mvn_fiducial_sample: malformed statistic");
  if (n_obs < p + 1)
    throw std::invalid_argument("mvn_fiducial_sample: n_obs must be >= p + 1");
  if (m < 1) throw std::invalid_argument("mvn_fiducial_sample: m must be >= 1");

  std::vector<MvnFiducialDraw> out;
  out.reserve(static_cast<std::size_t>(m));
  Matrix z(p, static_cast<int>(n_obs));
  for (long k = 0; k < m; ++k) {
    int tries = 0;
    for (;;) {
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < static_cast<int>(n_obs); ++j) z.at(i, j) = stream.normal();
      try {
        const LocScaleElement v = mvn_sufficient_statistic(z);
        const LocScaleElement theta = group_mul(t, group_inv(v));
        MvnFiducialDraw d;
        d.mu = theta.mu;
        d.sigma_chol = theta.L;
        out.push_back(std::move(d));
        break;
      } catch (const DecompositionError&) {
        if (++tries > 10)
          throw DecompositionError(
              "mvn_fiducial_sample: 10 consecutive singular auxiliary draws");
      }
    }
  }
  return out;
}

double correlation_from_chol(const LowerTriangular& c) {
  if (c.dim() != 2) throw std::invalid_argument("correlation_from_chol: need p = 2");
  // Sigma = C C^T: Sigma11 = c00^2, Sigma21 = c00 c10, Sigma22 = c10^2 + c11^2.
  const double c10 = c.at(1, 0);
  const double c11 = c.at(1, 1);
  const double denom = std::sqrt(c10 * c10 + c11 * c11);
  if (!(denom > 0.0))
    throw DecompositionError("correlation_from_chol: degenerate scale factor");
  const double rho = (c.at(0, 0) > 0.0 ? 1.0 : -1.0) * c10 / denom;
  return std::max(-1.0, std::min(1.0, rho));
}

EmpiricalDistribution correlation_fiducial(double r, long n_obs, long m,
                                           RandomStream& stream) {
  if (!(r > -1.0 && r < 1.0))
    throw std::invalid_argument("correlation_fiducial: |r| must be < 1");
  if (n_obs < 4) throw std::invalid_argument("correlation_fiducial: n_obs must be >= 4");

  LocScaleElement t;
  t.mu = {0.0, 0.0};
  t.L = LowerTriangular(2);
  t.L.at(0, 0) = 1.0;
  t.L.at(1, 0) = r;
  t.L.at(1, 1) = std::sqrt(1.0 - r * r);

  const std::vector<MvnFiducialDraw> draws = mvn_fiducial_sample(t, n_obs, m, stream);
  std::vector<double> rho;
  rho.reserve(draws.size());
  for (const MvnFiducialDraw& d : draws) rho.push_back(correlation_from_chol(d.sigma_chol));
  return EmpiricalDistribution(std::move(rho));
}

}  // namespace fidsamp
