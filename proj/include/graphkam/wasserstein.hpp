#pragma once

#include <cmath>
#include <vector>

#include "graphkam/detail/simplex_lp.hpp"
#include "graphkam/graph.hpp"
#include "graphkam/measures.hpp"

namespace graphkam {

/// Fiber metric on the tangent bundle: |q1 - q2| along an edge, q1 + q2
/// across a reversal (the route through the glued zero-speed point), and
/// q1 + q2 + 1 between unrelated edges.
inline double tangent_distance(EdgeId e1, double q1, EdgeId e2, double q2) {
  if (q1 == 0.0) e1 = Graph::canonical(e1);
  if (q2 == 0.0) e2 = Graph::canonical(e2);
  if (Graph::pair_of(e1) != Graph::pair_of(e2)) return q1 + q2 + 1.0;
  if (e1 == e2) return std::abs(q1 - q2);
  return q1 + q2;
}

/// Exact first Wasserstein distance between finitely supported measures,
/// solved as a transportation program over the atom sets.
inline double wasserstein1(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  const auto& a = mu.atoms();
  const auto& b = nu.atoms();
  const size_t n = a.size(), m = b.size();

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> cost(n * m, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      cost[i * m + j] = tangent_distance(a[i].edge, a[i].speed, b[j].edge, b[j].speed);

  for (size_t i = 0; i < n; ++i) {
    std::vector<double> row(n * m, 0.0);
    for (size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(a[i].weight);
  }
  for (size_t j = 0; j < m; ++j) {
    std::vector<double> row(n * m, 0.0);
    for (size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(b[j].weight);
  }

  auto lp = detail::SimplexLP::solve(rows, rhs, cost);
  if (!lp.feasible || !lp.bounded)
    fail(errc::non_convergence, "transport program did not solve");
  return lp.objective;
}

}  // namespace graphkam
