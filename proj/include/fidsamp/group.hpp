#pragma once

#include <cstddef>
#include <vector>

#include "fidsamp/empirical.hpp"
#include "fidsamp/linalg.hpp"
#include "fidsamp/random.hpp"

namespace fidsamp {

// Element of the location-scale group on R^p: a location vector mu and a
// lower-triangular scale factor L with positive diagonal.  The element acts
// on a point x as mu + L x, so composition is
//   [mu1, L1][mu2, L2] = [mu1 + L1 mu2, L1 L2].
struct LocScaleElement {
  std::vector<double> mu;
  LowerTriangular L;

  int dim() const { return L.dim(); }
};

LocScaleElement group_identity(int p);
LocScaleElement group_mul(const LocScaleElement& a, const LocScaleElement& b);
// [mu, L]^{-1} = [-L^{-1} mu, L^{-1}]; throws DecompositionError on a
// zero/near-zero diagonal.
LocScaleElement group_inv(const LocScaleElement& a);
// g . x = mu + L x
std::vector<double> group_act(const LocScaleElement& g, const std::vector<double>& x);

// Sufficient statistic of a p x n data matrix (columns are observations):
// the sample mean vector and the lower Cholesky factor of the divisor-n
// empirical covariance.  Requires n >= p + 1; throws DecompositionError when
// the empirical covariance is singular (e.g. identical columns).
LocScaleElement mvn_sufficient_statistic(const Matrix& data);

// One draw of the multivariate-normal fiducial for (mu, Sigma): location mu
// and lower Cholesky factor of Sigma.
struct MvnFiducialDraw {
  std::vector<double> mu;
  LowerTriangular sigma_chol;
};

// m fiducial draws given the observed statistic t of an n_obs-column sample:
// per draw generate a fresh p x n_obs standard-normal matrix, take its
// statistic V, and emit t V^{-1}.  A numerically singular V is redrawn, at
// most 10 times per draw.
std::vector<MvnFiducialDraw> mvn_fiducial_sample(const LocScaleElement& t, long n_obs,
                                                 long m, RandomStream& stream);

// Correlation implied by a 2x2 lower Cholesky factor C of Sigma = C C^T.
double correlation_from_chol(const LowerTriangular& c);

// Fiducial cloud of the correlation coefficient given an observed empirical
// correlation r from n_obs bivariate observations: builds the canonical
// statistic t = [0, chol([[1, r], [r, 1]])], runs the p = 2 fiducial
// sampler, and maps each draw to its implied correlation.  Requires |r| < 1
// and n_obs >= 4.
EmpiricalDistribution correlation_fiducial(double r, long n_obs, long m,
                                           RandomStream& stream);

}  // namespace fidsamp
