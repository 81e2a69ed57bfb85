#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "graphkam/errors.hpp"
#include "graphkam/graph.hpp"
#include "graphkam/hamiltonian.hpp"

namespace graphkam {

struct WeakKamOptions {
  double bisect_tol = 1e-10;    // absolute width for the critical-value bisection
  double tight_rel_tol = 1e-8;  // Aubry tightness, relative to the weight scale;
                                // must stay well above bisect_tol
  double neg_rel_tol = 1e-12;   // cycle negativity threshold, relative
  double q_clamp_tol = 1e-9;    // level gap under which a speed counts as zero
};

/// Sum of sigma^w over a path's edges at level a.
inline double intrinsic_length(const OmegaHamiltonian& h, const Path& path, double a) {
  double sum = 0.0;
  for (EdgeId e : path.edges) sum += h.sigma(e, a);
  return sum;
}

namespace detail_wk {

inline std::vector<double> edge_weights(const Graph& g, const OmegaHamiltonian& h, double a) {
  std::vector<double> w(static_cast<size_t>(g.edge_count()));
  for (EdgeId e = 0; e < g.edge_count(); ++e) w[static_cast<size_t>(e)] = h.sigma(e, a);
  return w;
}

inline double weight_scale(const std::vector<double>& w) {
  double m = 0.0;
  for (double x : w) m = std::max(m, std::abs(x));
  return 1.0 + m;
}

/// Bellman-Ford relaxation.  `dist` carries the initial potentials; returns
/// true when one more round still improves some vertex by more than the
/// negativity tolerance, i.e. a negative cycle is reachable.
inline bool relax_all(const Graph& g, const std::vector<double>& w, std::vector<double>& dist,
                      double neg_tol) {
  const int n = g.vertex_count();
  for (int round = 0; round < n; ++round) {
    bool improved = false;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      double cand = dist[static_cast<size_t>(g.origin(e))] + w[static_cast<size_t>(e)];
      if (cand < dist[static_cast<size_t>(g.terminal(e))] - 1e-300) {
        dist[static_cast<size_t>(g.terminal(e))] = cand;
        improved = true;
      }
    }
    if (!improved) return false;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    double cand = dist[static_cast<size_t>(g.origin(e))] + w[static_cast<size_t>(e)];
    if (cand < dist[static_cast<size_t>(g.terminal(e))] - neg_tol) return true;
  }
  return false;
}

}  // namespace detail_wk

/// Whether the discrete Hamilton-Jacobi equation at level a admits
/// subsolutions, i.e. no cycle has negative intrinsic length.
inline bool has_subsolution(const Graph& g, const OmegaHamiltonian& h, double a,
                            const WeakKamOptions& opts = {}) {
  double floor = a0(h);
  if (a < floor - 1e-12 * (1.0 + std::abs(floor)))
    fail(errc::below_floor, "level below a0");
  auto w = detail_wk::edge_weights(g, h, a);
  std::vector<double> dist(static_cast<size_t>(g.vertex_count()), 0.0);
  return !detail_wk::relax_all(g, w, dist, opts.neg_rel_tol * detail_wk::weight_scale(w));
}

/// Smallest level admitting subsolutions.  Returns a0 exactly when the
/// floor level already works; otherwise bisects down to opts.bisect_tol and
/// reports the feasible (upper) end of the bracket.
inline double critical_value(const Graph& g, const OmegaHamiltonian& h,
                             const WeakKamOptions& opts = {}) {
  double lo = a0(h);
  if (has_subsolution(g, h, lo, opts)) return lo;
  double step = std::max(1.0, std::abs(lo));
  double hi = lo + step;
  int doublings = 0;
  while (!has_subsolution(g, h, hi, opts)) {
    lo = hi;
    step *= 2.0;
    hi += step;
    if (++doublings > 200) fail(errc::non_convergence, "no subsolution level found");
  }
  while (hi - lo > opts.bisect_tol) {
    double mid = 0.5 * (lo + hi);
    if (has_subsolution(g, h, mid, opts))
      hi = mid;
    else
      lo = mid;
  }
  // dsigma/da blows up near edge floors, so a fixed-width bracket can smear
  // tightness and speeds; keep halving until the slope-amplified width is
  // negligible (or the float resolution is reached)
  for (int extra = 0; extra < 80; ++extra) {
    double width = hi - lo;
    if (width <= 2e-16 * (1.0 + std::abs(hi))) break;
    double slope = 1.0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      double gap = hi - h.a_floor(e);
      if (gap > opts.q_clamp_tol * (1.0 + std::abs(hi))) {
        double d = h.dsigma_da(e, hi);
        if (std::isfinite(d)) slope = std::max(slope, d);
      }
    }
    if (width * slope <= 1e-11 * (1.0 + std::abs(hi))) break;
    double mid = 0.5 * (lo + hi);
    (has_subsolution(g, h, mid, opts) ? hi : lo) = mid;
  }
  return hi;
}

/// One subsolution of (HJ at level a): shortest-path potentials from the
/// lexicographically smallest vertex with weights sigma^w(., a), normalized
/// to vanish there.  du(e) <= sigma^w(e, a) for every edge.
inline Cochain0 subsolution(const Graph& g, const OmegaHamiltonian& h, double a,
                            const WeakKamOptions& opts = {}) {
  double floor = a0(h);
  if (a < floor - 1e-12 * (1.0 + std::abs(floor)))
    fail(errc::below_floor, "level below a0");
  auto w = detail_wk::edge_weights(g, h, a);
  std::vector<double> dist(static_cast<size_t>(g.vertex_count()),
                           std::numeric_limits<double>::infinity());
  dist[0] = 0.0;
  if (detail_wk::relax_all(g, w, dist, opts.neg_rel_tol * detail_wk::weight_scale(w)))
    fail(errc::no_subsolution, "level is below the critical value");
  Cochain0 u(static_cast<size_t>(g.vertex_count()));
  for (VertexId x = 0; x < g.vertex_count(); ++x) u[x] = dist[static_cast<size_t>(x)] - dist[0];
  return u;
}

/// Critical level, a subsolution, the Aubry edge set, and the speed profile
/// over it.
struct WeakKamResult {
  double critical_value = 0.0;
  Cochain0 u;
  std::vector<EdgeId> aubry_edges;      // ascending edge id
  std::map<EdgeId, double> speeds;      // Q over the Aubry set
};

/// Extracts the Aubry set as the strongly connected part of the tight
/// subgraph {e : du(e) == sigma^w(e, a*)}: a tight edge whose endpoints are
/// mutually reachable through tight edges lies on a zero-length cycle, and
/// conversely every zero cycle is forced tight by the subsolution
/// inequality.  Speeds come from inverse-function differentiation,
/// Q(e) = 1 / dsigma_da(e, a*), clamped to 0 at the floor where the
/// derivative diverges.
inline WeakKamResult solve_weak_kam(const Graph& g, const OmegaHamiltonian& h,
                                    const WeakKamOptions& opts = {}) {
  WeakKamResult result;
  result.critical_value = critical_value(g, h, opts);
  result.u = subsolution(g, h, result.critical_value, opts);

  auto w = detail_wk::edge_weights(g, h, result.critical_value);
  double tight_tol = opts.tight_rel_tol * detail_wk::weight_scale(w);
  std::vector<bool> tight(static_cast<size_t>(g.edge_count()), false);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    double du = result.u(g.terminal(e)) - result.u(g.origin(e));
    tight[static_cast<size_t>(e)] = std::abs(du - w[static_cast<size_t>(e)]) <= tight_tol;
  }

  // strongly connected components of the tight subgraph (two BFS passes per
  // unvisited vertex would do; graphs here are tiny, so pairwise
  // reachability is computed directly)
  const int n = g.vertex_count();
  std::vector<std::vector<bool>> reach(static_cast<size_t>(n),
                                       std::vector<bool>(static_cast<size_t>(n), false));
  for (VertexId s = 0; s < n; ++s) {
    std::vector<VertexId> stack{s};
    reach[static_cast<size_t>(s)][static_cast<size_t>(s)] = true;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (EdgeId e : g.out_edges(x)) {
        if (!tight[static_cast<size_t>(e)]) continue;
        VertexId y = g.terminal(e);
        if (!reach[static_cast<size_t>(s)][static_cast<size_t>(y)]) {
          reach[static_cast<size_t>(s)][static_cast<size_t>(y)] = true;
          stack.push_back(y);
        }
      }
    }
  }

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!tight[static_cast<size_t>(e)]) continue;
    VertexId x = g.origin(e), y = g.terminal(e);
    if (!reach[static_cast<size_t>(y)][static_cast<size_t>(x)]) continue;
    result.aubry_edges.push_back(e);
    double gap = result.critical_value - h.a_floor(e);
    double q = 0.0;
    if (gap > opts.q_clamp_tol * (1.0 + std::abs(result.critical_value))) {
      double d = h.dsigma_da(e, result.critical_value);
      q = std::isfinite(d) && d > 0.0 ? 1.0 / d : 0.0;
    }
    result.speeds[e] = q;
  }
  return result;
}

}  // namespace graphkam
