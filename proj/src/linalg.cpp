#include "fidsamp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fidsamp/errors.hpp"

namespace fidsamp {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
}

LowerTriangular::LowerTriangular(int p)
    : p_(p), a_(static_cast<std::size_t>(p) * (p + 1) / 2, 0.0) {
  if (p < 0) throw std::invalid_argument("LowerTriangular: negative dimension");
}

LowerTriangular LowerTriangular::identity(int p) {
  LowerTriangular l(p);
  for (int i = 0; i < p; ++i) l.at(i, i) = 1.0;
  return l;
}

double& LowerTriangular::at(int i, int j) {
  if (i < 0 || i >= p_ || j < 0 || j > i)
    throw std::invalid_argument("LowerTriangular::at: index outside lower triangle");
  return a_[idx(i, j)];
}

double LowerTriangular::at(int i, int j) const {
  if (i < 0 || i >= p_ || j < 0 || j > i)
    throw std::invalid_argument("LowerTriangular::at: index outside lower triangle");
  return a_[idx(i, j)];
}

LowerTriangular LowerTriangular::mul(const LowerTriangular& rhs) const {
  if (p_ != rhs.p_) throw std::invalid_argument("LowerTriangular::mul: dimension mismatch");
  LowerTriangular out(p_);
  for (int i = 0; i < p_; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = j; k <= i; ++k) s += a_[idx(i, k)] * rhs.a_[rhs.idx(k, j)];
      out.a_[out.idx(i, j)] = s;
    }
  return out;
}

std::vector<double> LowerTriangular::matvec(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != p_)
    throw std::invalid_argument("LowerTriangular::matvec: dimension mismatch");
  std::vector<double> y(p_, 0.0);
  for (int i = 0; i < p_; ++i) {
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += a_[idx(i, j)] * x[j];
    y[i] = s;
  }
  return y;
}

LowerTriangular LowerTriangular::inverse() const {
  LowerTriangular inv(p_);
  std::vector<double> e(p_, 0.0);
  for (int j = 0; j < p_; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const std::vector<double> col = tri_solve(*this, e, false);
    for (int i = j; i < p_; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

double LowerTriangular::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

LowerTriangular cholesky(const Matrix& a) {
  const int p = a.rows();
  if (p != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
  if (p == 0) return LowerTriangular(0);
  double max_diag = 0.0;
  for (int i = 0; i < p; ++i) max_diag = std::max(max_diag, std::fabs(a.at(i, i)));
  const double pivot_floor = 1e-12 * max_diag;

  LowerTriangular l(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (!(s > pivot_floor))
          throw DecompositionError("cholesky: matrix not positive definite (pivot below tolerance)");
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return l;
}

std::vector<double> tri_solve(const LowerTriangular& L, const std::vector<double>& b,
                              bool transposed) {
  const int p = L.dim();
  if (static_cast<int>(b.size()) != p)
    throw std::invalid_argument("tri_solve: dimension mismatch");
  for (int i = 0; i < p; ++i)
    if (L.at(i, i) == 0.0) throw DecompositionError("tri_solve: zero diagonal");
  std::vector<double> x(b);
  if (!transposed) {
    for (int i = 0; i < p; ++i) {
      double s = x[i];
      for (int j = 0; j < i; ++j) s -= L.at(i, j) * x[j];
      x[i] = s / L.at(i, i);
    }
  } else {
    for (int i = p - 1; i >= 0; --i) {
      double s = x[i];
      for (int j = i + 1; j < p; ++j) s -= L.at(j, i) * x[j];
      x[i] = s / L.at(i, i);
    }
  }
  return x;
}

}  // namespace fidsamp
