#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fidsamp/fiducial.hpp"

namespace fidsamp {

// Finite binary operation given by its Cayley table: entry (i, j) is i * j.
struct LoopTable {
  int order = 0;
  std::vector<int> table;  // row major, order x order

  int at(int i, int j) const { return table[static_cast<std::size_t>(i) * order + j]; }
  int& at(int i, int j) { return table[static_cast<std::size_t>(i) * order + j]; }
};

// Text format: first line the order n, then n rows of n space-separated
// zero-based indices.
LoopTable load_loop_table(const std::string& path);

// Cyclic-group addition table on {0, ..., n-1}.
LoopTable zn_addition_table(int n);

struct QuasigroupCheck {
  bool is_quasigroup = false;  // every row and column a permutation
  bool is_loop = false;        // quasigroup with a two-sided identity
  std::optional<int> identity;
};

QuasigroupCheck quasigroup_check(const LoopTable& tbl);

struct InvariantMeasureResult {
  std::vector<double> weights;  // normalized to total mass 1
  // Dimension of the solution space of the right-invariance constraints
  // m(x * g) = m(x); equals 1 exactly when the invariant measure is unique
  // up to scale.
  int nullspace_dimension = 0;
};

// Solves m(x * g) = m(x) for all (x, g) over a finite quasigroup.  Right
// translations act transitively, so the unique answer is the uniform vector;
// the solver verifies that by rank computation rather than assuming it.
// Throws std::invalid_argument when the table is not a quasigroup.
InvariantMeasureResult finite_loop_invariant_measure(const LoopTable& tbl);

// Loop on an interval of the real line: a binary operation with a two-sided
// identity and exact division in each argument.
//   left_divide(a, b)  returns the x solving op(a, x) = b
//   right_divide(a, b) returns the x solving op(x, a) = b
// When periodic is set the domain is a circle: op wraps modulo (hi - lo) and
// translations never leave the domain.
struct SmoothLoop1D {
  std::function<double(double, double)> op;
  std::function<double(double, double)> left_divide;
  std::function<double(double, double)> right_divide;
  double identity = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
};

// Addition modulo 1 on [0, 1): the circle group.
SmoothLoop1D additive_torus_loop();

struct SmoothLoopResidual {
  // Root-mean-square defect of the right-invariance condition at the best
  // grid density (mean fixed to 1); near zero means an invariant measure
  // exists at this resolution.
  double residual = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
  long rows_used = 0;
  long rows_clipped = 0;  // translations leaving the domain, dropped
};

// Discretizes the right-invariance condition for a density m on a grid of
// grid_size points: for each translation g (translation_count of them spread
// over the domain) and each grid node y, the pushforward row
//   m(right_divide(g, y)) * |d right_divide(g, y) / dy|  -  m(y)  =  0.
// Solves the least-squares system for m subject to mean(m) = 1 and returns
// the RMS row defect.  Rows whose translated point leaves [lo, hi] (or whose
// division fails to solve) are clipped and counted, not extrapolated.
SmoothLoopResidual smooth_loop_invariance_residual(const SmoothLoop1D& loop, int grid_size,
                                                   int translation_count);

// Relabels a pivotal simple scalar model through the bijections at a base
// point so the induced operation on the observation space has a two-sided
// identity at base_t:
//   op(a, b) = tau(solve_u(theta0, a), solve_theta(base_u, b)),
// with theta0 = solve_theta(base_u, base_t).  lo/hi set the domain of
// interest recorded on the loop.  Throws UnsupportedModelError when the
// model is not flagged pivotal and simple.
SmoothLoop1D pivotal_to_loop(const FiducialModel& model, double base_t, double base_u,
                             double lo, double hi);

}  // namespace fidsamp
