#pragma once

#include <cstddef>
#include <vector>

namespace fidsamp {

// Minimal dense matrix, row major.  Only what the samplers need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Lower-triangular p x p matrix, packed row major: p(p+1)/2 entries.
class LowerTriangular {
 public:
  LowerTriangular() = default;
  explicit LowerTriangular(int p);
  static LowerTriangular identity(int p);

  int dim() const { return p_; }
  double& at(int i, int j);
  double at(int i, int j) const;
  const std::vector<double>& packed() const { return a_; }

  LowerTriangular mul(const LowerTriangular& rhs) const;
  std::vector<double> matvec(const std::vector<double>& x) const;
  // Inverse via triangular back-substitution on unit columns; throws
  // DecompositionError on a zero diagonal.
  LowerTriangular inverse() const;
  double max_abs() const;

 private:
  int p_ = 0;
  std::vector<double> a_;
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (i + 1) / 2 + j; }
};

// Cholesky factor L (lower, positive diagonal) of a symmetric positive
// definite matrix: A = L L^T.  A pivot at or below 1e-12 * max diagonal
// raises DecompositionError: treat near-semidefinite input as an error
// rather than silently completing an unstable factorization.
LowerTriangular cholesky(const Matrix& a);

// Solve L x = b (or L^T x = b when transposed) by substitution.
std::vector<double> tri_solve(const LowerTriangular& L, const std::vector<double>& b,
                              bool transposed = false);

}  // namespace fidsamp
