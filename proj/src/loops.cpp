#include "fidsamp/loops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fidsamp/errors.hpp"
#include "fidsamp/linalg.hpp"

namespace fidsamp {

LoopTable load_loop_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_loop_table: cannot open " + path);
  LoopTable t;
  if (!(in >> t.order) || t.order < 1)
    throw std::runtime_error("load_loop_table: bad order in " + path);
  t.table.assign(static_cast<std::size_t>(t.order) * t.order, 0);
  for (int i = 0; i < t.order; ++i)
    for (int j = 0; j < t.order; ++j) {
      int v;
      if (!(in >> v))
        throw std::runtime_error("load_loop_table: truncated table in " + path);
      if (v < 0 || v >= t.order)
        throw std::runtime_error("load_loop_table: entry out of range in " + path);
      t.at(i, j) = v;
    }
  return t;
}

LoopTable zn_addition_table(int n) {
  if (n < 1) throw std::invalid_argument("zn_addition_table: n must be >= 1");
  LoopTable t;
  t.order = n;
  t.table.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.at(i, j) = (i + j) % n;
  return t;
}

QuasigroupCheck quasigroup_check(const LoopTable& tbl) {
  const int n = tbl.order;
  if (n < 1 || tbl.table.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("quasigroup_check: malformed table");
  for (int v : tbl.table)
    if (v < 0 || v >= n) throw std::invalid_argument("quasigroup_check: entry out of range");

  QuasigroupCheck out;
  std::vector<char> seen(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n; ++j) {
      if (seen[static_cast<std::size_t>(tbl.at(i, j))]) return out;  // repeated in row
      seen[static_cast<std::size_t>(tbl.at(i, j))] = 1;
    }
  }
  for (int j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int i = 0; i < n; ++i) {
      if (seen[static_cast<std::size_t>(tbl.at(i, j))]) return out;  // repeated in column
      seen[static_cast<std::size_t>(tbl.at(i, j))] = 1;
    }
  }
  out.is_quasigroup = true;

  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j)
      if (tbl.at(e, j) != j || tbl.at(j, e) != j) ok = false;
    if (ok) {
      out.is_loop = true;
      out.identity = e;
      break;
    }
  }
  return out;
}

InvariantMeasureResult finite_loop_invariant_measure(const LoopTable& tbl) {
  const QuasigroupCheck check = quasigroup_check(tbl);
  if (!check.is_quasigroup)
    throw std::invalid_argument("finite_loop_invariant_measure: table is not a quasigroup");

  const int n = tbl.order;
  // Stack the constraints m(x * g) - m(x) = 0 and compute the rank by
  // Gaussian elimination; the solution space should be spanned by the
  // uniform vector alone.
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) {
      const int y = tbl.at(x, g);
      if (y == x) continue;
      std::vector<double> row(static_cast<std::size_t>(n), 0.0);
      row[static_cast<std::size_t>(y)] += 1.0;
      row[static_cast<std::size_t>(x)] -= 1.0;
      rows.push_back(std::move(row));
    }

  int rank = 0;
  const std::size_t ncols = static_cast<std::size_t>(n);
  for (std::size_t col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = rows.size();
    double best = 1e-9;
    for (std::size_t r = static_cast<std::size_t>(rank); r < rows.size(); ++r)
      if (std::fabs(rows[r][col]) > best) {
        best = std::fabs(rows[r][col]);
        pivot = r;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
    const std::vector<double>& prow = rows[static_cast<std::size_t>(rank)];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank)) continue;
      const double f = rows[r][col] / prow[col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= f * prow[c];
    }
    ++rank;
  }

  InvariantMeasureResult out;
  out.nullspace_dimension = n - rank;
  out.weights.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  return out;
}

SmoothLoop1D additive_torus_loop() {
  SmoothLoop1D l;
  l.lo = 0.0;
  l.hi = 1.0;
  l.periodic = true;
  l.identity = 0.0;
  const auto wrap = [](double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;
    return y;
  };
  l.op = [wrap](double a, double b) { return wrap(a + b); };
  l.left_divide = [wrap](double a, double b) { return wrap(b - a); };
  l.right_divide = [wrap](double a, double b) { return wrap(b - a); };
  return l;
}

namespace {

// Linear interpolation weights of a point x on the grid; periodic grids wrap
// around the seam.  Returns false when x falls outside a non-periodic grid.
struct InterpHit {
  std::size_t i0, i1;
  double w0, w1;
};

bool interp_weights(double x, const std::vector<double>& grid, bool periodic, double period,
                    InterpHit& hit) {
  const std::size_t n = grid.size();
  if (periodic) {
    double y = x - grid.front();
    y -= period * std::floor(y / period);
    const double h = period / static_cast<double>(n);
    std::size_t k = static_cast<std::size_t>(std::floor(y / h));
    if (k >= n) k = n - 1;
    double w = y / h - static_cast<double>(k);
    w = std::max(0.0, std::min(1.0, w));
    hit = {k, (k + 1) % n, 1.0 - w, w};
    return true;
  }
  if (x < grid.front() || x > grid.back()) return false;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t k = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  if (k + 1 >= n) k = n - 2;
  const double w = (x - grid[k]) / (grid[k + 1] - grid[k]);
  hit = {k, k + 1, 1.0 - w, std::max(0.0, std::min(1.0, w))};
  return true;
}

}  // namespace

SmoothLoopResidual smooth_loop_invariance_residual(const SmoothLoop1D& loop, int grid_size,
                                                   int translation_count) {
  if (!loop.op || !loop.right_divide)
    throw std::invalid_argument("smooth_loop_invariance_residual: loop missing operations");
  if (grid_size < 8)
    throw std::invalid_argument("smooth_loop_invariance_residual: grid too small");
  if (translation_count < 2)
    throw std::invalid_argument("smooth_loop_invariance_residual: need >= 2 translations");
  if (!(loop.hi > loop.lo))
    throw std::invalid_argument("smooth_loop_invariance_residual: empty domain");

  const std::size_t n = static_cast<std::size_t>(grid_size);
  const double period = loop.hi - loop.lo;
  std::vector<double> grid(n);
  if (loop.periodic) {
    for (std::size_t i = 0; i < n; ++i)
      grid[i] = loop.lo + period * static_cast<double>(i) / static_cast<double>(n);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      grid[i] = loop.lo + period * static_cast<double>(i) / static_cast<double>(n - 1);
  }

  // Translations: spread over the domain interior, skipping points too close
  // to the ends on a non-periodic domain (their rows would all clip).
  std::vector<double> gs(static_cast<std::size_t>(translation_count));
  for (int k = 0; k < translation_count; ++k) {
    const double frac = (static_cast<double>(k) + 0.5) / static_cast<double>(translation_count);
    gs[static_cast<std::size_t>(k)] =
        loop.periodic ? loop.lo + period * frac
                      : loop.lo + period * (0.25 + 0.5 * frac);
  }

  struct Row {
    InterpHit hit;
    double jac;        // |d right_divide(g, y) / dy|
    std::size_t ynode;
  };
  std::vector<Row> rows;
  rows.reserve(n * gs.size());
  long clipped = 0;
  const double delta = period / (8.0 * static_cast<double>(n));

  const auto wrap_diff = [&](double d) {
    if (!loop.periodic) return d;
    d -= period * std::round(d / period);
    return d;
  };

  for (const double g : gs)
    for (std::size_t yi = 0; yi < n; ++yi) {
      const double y = grid[yi];
      const double yp = loop.periodic ? y + delta : std::min(y + delta, loop.hi);
      const double ym = loop.periodic ? y - delta : std::max(y - delta, loop.lo);
      double x, xp, xm;
      try {
        x = loop.right_divide(g, y);
        xp = loop.right_divide(g, yp);
        xm = loop.right_divide(g, ym);
      } catch (const std::exception&) {
        ++clipped;
        continue;
      }
      if (!(yp > ym)) {
        ++clipped;
        continue;
      }
      const double jac = std::fabs(wrap_diff(xp - xm) / (yp - ym));
      InterpHit hit;
      if (!std::isfinite(x) || !std::isfinite(jac) ||
          !interp_weights(x, grid, loop.periodic, period, hit)) {
        ++clipped;
        continue;
      }
      rows.push_back({hit, jac, yi});
    }

  if (rows.size() < n)
    throw std::invalid_argument(
        "smooth_loop_invariance_residual: almost all rows clipped; domain too narrow");

  // Normal equations for min ||A m||^2 with a soft constraint mean(m) = 1,
  // plus a tiny ridge for numerical definiteness.
  Matrix ata(static_cast<int>(n), static_cast<int>(n), 0.0);
  std::vector<double> rhs(n, 0.0);
  const auto add_row = [&](const std::size_t idx[3], const double coef[3], int nz, double b) {
    for (int a = 0; a < nz; ++a) {
      rhs[idx[a]] += coef[a] * b;
      for (int c = 0; c < nz; ++c)
        ata.at(static_cast<int>(idx[a]), static_cast<int>(idx[c])) += coef[a] * coef[c];
    }
  };
  for (const Row& r : rows) {
    if (r.hit.i0 == r.ynode) {
      const std::size_t idx[3] = {r.hit.i1, r.ynode, 0};
      const double coef[3] = {r.hit.w1 * r.jac, r.hit.w0 * r.jac - 1.0, 0.0};
      add_row(idx, coef, 2, 0.0);
    } else if (r.hit.i1 == r.ynode) {
      const std::size_t idx[3] = {r.hit.i0, r.ynode, 0};
      const double coef[3] = {r.hit.w0 * r.jac, r.hit.w1 * r.jac - 1.0, 0.0};
      add_row(idx, coef, 2, 0.0);
    } else {
      const std::size_t idx[3] = {r.hit.i0, r.hit.i1, r.ynode};
      const double coef[3] = {r.hit.w0 * r.jac, r.hit.w1 * r.jac, -1.0};
      add_row(idx, coef, 3, 0.0);
    }
  }
  // mean(m) = 1 row, weighted to dominate scale selection without swamping
  // the invariance rows.
  const double cw = std::sqrt(static_cast<double>(rows.size()));
  {
    const double c = cw / static_cast<double>(n);
    for (std::size_t a = 0; a < n; ++a) {
      rhs[a] += c * cw;
      for (std::size_t b = 0; b < n; ++b)
        ata.at(static_cast<int>(a), static_cast<int>(b)) += c * c;
    }
  }
  double trace = 0.0;
  for (std::size_t a = 0; a < n; ++a) trace += ata.at(static_cast<int>(a), static_cast<int>(a));
  const double ridge = 1e-12 * trace / static_cast<double>(n);
  for (std::size_t a = 0; a < n; ++a)
    ata.at(static_cast<int>(a), static_cast<int>(a)) += ridge;

  const LowerTriangular chol = cholesky(ata);
  std::vector<double> m = tri_solve(chol, rhs);
  m = tri_solve(chol, m, /*transposed=*/true);

  double ss = 0.0;
  for (const Row& r : rows) {
    const double mx = r.hit.w0 * m[r.hit.i0] + r.hit.w1 * m[r.hit.i1];
    const double defect = mx * r.jac - m[r.ynode];
    ss += defect * defect;
  }

  SmoothLoopResidual out;
  out.residual = std::sqrt(ss / static_cast<double>(rows.size()));
  out.grid = std::move(grid);
  out.density = std::move(m);
  out.rows_used = static_cast<long>(rows.size());
  out.rows_clipped = clipped;
  return out;
}

SmoothLoop1D pivotal_to_loop(const FiducialModel& model, double base_t, double base_u,
                             double lo, double hi) {
  if (!model.pivotal || !model.simple)
    throw UnsupportedModelError("pivotal_to_loop: model must be pivotal and simple");
  if (!model.tau || !model.solve_theta || !model.solve_u)
    throw UnsupportedModelError("pivotal_to_loop: model missing solvers");

  const double theta0 = model.solve_theta(base_u, base_t);
  const auto tau = model.tau;
  const auto solve_theta = model.solve_theta;
  const auto solve_u = model.solve_u;
  const double u0 = base_u;

  SmoothLoop1D l;
  l.identity = base_t;
  l.lo = lo;
  l.hi = hi;
  l.periodic = false;
  l.op = [tau, solve_theta, solve_u, theta0, u0](double a, double b) {
    return tau(solve_u(theta0, a), solve_theta(u0, b));
  };
  l.left_divide = [tau, solve_theta, solve_u, theta0, u0](double a, double b) {
    return tau(u0, solve_theta(solve_u(theta0, a), b));
  };
  l.right_divide = [tau, solve_theta, solve_u, theta0, u0](double a, double b) {
    return tau(solve_u(solve_theta(u0, a), b), theta0);
  };
  return l;
}

}  // namespace fidsamp
