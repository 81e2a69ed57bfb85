#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace graphkam::detail {

struct LpResult {
  bool feasible = false;     // phase-1 optimum within tolerance of zero
  bool bounded = true;
  double objective = 0.0;    // phase-2 value of c.x (when feasible)
  double residual = 0.0;     // phase-1 optimum: min_x ||Ax - b||_1 over x >= 0
  std::vector<double> x;
};

/// Dense two-phase tableau simplex with Bland's rule for
///     min c.x   subject to   A x = b,  x >= 0.
/// Sized for the tiny programs arising here (a handful of rows/columns).
/// Even when the constraints are infeasible, `x` holds the l1-closest point,
/// which callers use as a best-effort certificate.
class SimplexLP {
 public:
  static LpResult solve(const std::vector<std::vector<double>>& a,
                        const std::vector<double>& b,
                        const std::vector<double>& c) {
    const size_t m = a.size();
    const size_t n = m == 0 ? c.size() : a[0].size();
    const double eps = 1e-11;

    // columns: n structural + m artificial + rhs
    std::vector<std::vector<double>> t(m, std::vector<double>(n + m + 1, 0.0));
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) {
      double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (size_t j = 0; j < n; ++j) t[i][j] = sign * a[i][j];
      t[i][n + i] = 1.0;
      t[i][n + m] = sign * b[i];
      basis[i] = n + i;
    }

    auto pivot = [&](size_t row, size_t col) {
      double piv = t[row][col];
      for (double& v : t[row]) v /= piv;
      for (size_t i = 0; i < m; ++i) {
        if (i == row) continue;
        double f = t[i][col];
        if (f == 0.0) continue;
        for (size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
      }
      basis[row] = col;
    };

    // Bland: entering = lowest-index column with reduced cost < -eps.
    auto run = [&](const std::vector<double>& cost, size_t ncols) -> bool {
      for (int guard = 0; guard < 100000; ++guard) {
        std::vector<double> y(m, 0.0);  // reduced costs via basis costs
        std::vector<double> red(ncols);
        size_t enter = ncols;
        for (size_t j = 0; j < ncols; ++j) {
          double r = cost[j];
          for (size_t i = 0; i < m; ++i) r -= cost[basis[i]] * t[i][j];
          red[j] = r;
          if (r < -eps && enter == ncols) enter = j;
        }
        if (enter == ncols) return true;  // optimal
        size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) {
          if (t[i][enter] > eps) {
            double ratio = t[i][n + m] / t[i][enter];
            if (ratio < best - eps || (ratio < best + eps && (leave == m || basis[i] < basis[leave]))) {
              best = ratio;
              leave = i;
            }
          }
        }
        if (leave == m) return false;  // unbounded
        pivot(leave, enter);
      }
      return false;
    };

    LpResult out;
    std::vector<double> cost1(n + m, 0.0);
    for (size_t i = 0; i < m; ++i) cost1[n + i] = 1.0;
    run(cost1, n + m);
    double resid = 0.0;
    for (size_t i = 0; i < m; ++i)
      if (basis[i] >= n) resid += t[i][n + m];
    out.residual = resid;
    out.x.assign(n, 0.0);
    for (size_t i = 0; i < m; ++i)
      if (basis[i] < n) out.x[basis[i]] = t[i][n + m];
    out.feasible = resid <= 1e-9 * (1.0 + l1(b));
    if (!out.feasible) return out;

    // drive leftover zero-level artificials out of the basis when possible
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      size_t col = n;
      for (size_t j = 0; j < n; ++j)
        if (std::abs(t[i][j]) > eps) { col = j; break; }
      if (col < n) pivot(i, col);
    }

    // Artificials still basic now sit at zero level in all-zero (redundant)
    // rows; with zero cost they cannot disturb pricing, and the entering scan
    // below never considers them.
    std::vector<double> cost2(n + m, 0.0);
    for (size_t j = 0; j < n; ++j) cost2[j] = c[j];
    out.bounded = run(cost2, n);
    out.x.assign(n, 0.0);
    out.objective = 0.0;
    for (size_t i = 0; i < m; ++i)
      if (basis[i] < n) out.x[basis[i]] = t[i][n + m];
    for (size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
    return out;
  }

 private:
  static double l1(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
};

}  // namespace graphkam::detail
