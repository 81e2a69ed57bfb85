#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "graphkam/graph.hpp"

namespace graphkam {

/// Spanning tree plus one fundamental cycle per co-tree pair.  The basis is
/// deterministic: BFS from the lexicographically smallest vertex, scanning
/// each star in descending edge id, so later-declared parallel edges land in
/// the tree and earlier ones span the co-tree.
struct HomologyBasis {
  std::vector<bool> pair_in_tree;   // indexed by pair
  std::vector<int> cotree_pairs;    // ascending pair index; basis order
  std::vector<Path> cycles;         // fundamental cycle per co-tree pair

  int betti() const { return static_cast<int>(cotree_pairs.size()); }
};

inline HomologyBasis homology_basis(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> parent_edge(static_cast<size_t>(n), -1);  // tree edge into vertex
  std::vector<bool> visited(static_cast<size_t>(n), false);
  HomologyBasis basis;
  basis.pair_in_tree.assign(static_cast<size_t>(g.pair_count()), false);

  std::deque<VertexId> queue{0};
  visited[0] = true;
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    const auto& star = g.out_edges(x);
    for (auto it = star.rbegin(); it != star.rend(); ++it) {
      VertexId y = g.terminal(*it);
      if (visited[static_cast<size_t>(y)]) continue;
      visited[static_cast<size_t>(y)] = true;
      parent_edge[static_cast<size_t>(y)] = *it;
      basis.pair_in_tree[static_cast<size_t>(Graph::pair_of(*it))] = true;
      queue.push_back(y);
    }
  }

  // Tree path y -> x: climb both to the root, splice at the meeting point.
  auto tree_path = [&](VertexId from, VertexId to) {
    std::vector<EdgeId> up_from, up_to;  // edges toward the root
    std::vector<VertexId> anc_from{from};
    for (VertexId v = from; parent_edge[static_cast<size_t>(v)] >= 0;) {
      EdgeId pe = parent_edge[static_cast<size_t>(v)];
      up_from.push_back(Graph::reverse(pe));
      v = g.origin(pe);
      anc_from.push_back(v);
    }
    std::vector<VertexId> anc_to{to};
    for (VertexId v = to; parent_edge[static_cast<size_t>(v)] >= 0;) {
      EdgeId pe = parent_edge[static_cast<size_t>(v)];
      up_to.push_back(Graph::reverse(pe));
      v = g.origin(pe);
      anc_to.push_back(v);
    }
    auto pos_in = [](const std::vector<VertexId>& xs, VertexId v) {
      for (size_t i = 0; i < xs.size(); ++i)
        if (xs[i] == v) return static_cast<int>(i);
      return -1;
    };
    // lowest common ancestor: first ancestor of `from` appearing in anc_to
    size_t cut_from = 0;
    int cut_to = -1;
    for (size_t i = 0; i < anc_from.size(); ++i) {
      int j = pos_in(anc_to, anc_from[i]);
      if (j >= 0) { cut_from = i; cut_to = j; break; }
    }
    std::vector<EdgeId> path(up_from.begin(), up_from.begin() + static_cast<long>(cut_from));
    for (int j = cut_to - 1; j >= 0; --j)
      path.push_back(Graph::reverse(up_to[static_cast<size_t>(j)]));
    return path;
  };

  for (int pair = 0; pair < g.pair_count(); ++pair) {
    if (basis.pair_in_tree[static_cast<size_t>(pair)]) continue;
    EdgeId e = Graph::forward_edge(pair);
    Path cycle;
    cycle.edges.push_back(e);
    for (EdgeId t : tree_path(g.terminal(e), g.origin(e))) cycle.edges.push_back(t);
    basis.cotree_pairs.push_back(pair);
    basis.cycles.push_back(std::move(cycle));
  }
  return basis;
}

/// Coordinates of a 1-cycle chain: its coefficients on the co-tree pairs.
inline std::vector<double> homology_class(const Graph& g, const Chain1& chain,
                                          const HomologyBasis& basis,
                                          double tol = 1e-10) {
  Chain0 bd = boundary(g, chain);
  if (bd.max_abs() > tol * (1.0 + chain.max_abs()))
    fail(errc::not_a_cycle, "chain has nonzero boundary");
  std::vector<double> coords;
  coords.reserve(basis.cotree_pairs.size());
  for (int pair : basis.cotree_pairs)
    coords.push_back(chain.coeff(Graph::forward_edge(pair)));
  return coords;
}

inline std::vector<double> homology_class(const Graph& g, const Path& cycle,
                                          const HomologyBasis& basis) {
  if (!is_cycle(g, cycle)) fail(errc::not_a_cycle, "path is not closed");
  return homology_class(g, chain_of_path(cycle), basis);
}

/// Coordinates of a 1-cochain class: c_i = <omega, [zeta_i]>.
inline std::vector<double> cohomology_class(const Cochain1& omega,
                                            const HomologyBasis& basis) {
  std::vector<double> coords;
  coords.reserve(basis.cycles.size());
  for (const Path& zeta : basis.cycles) coords.push_back(intrinsic_sum(omega, zeta));
  return coords;
}

/// Canonical representative of a cohomology class: vanishes on tree pairs and
/// carries c_i on co-tree pair i, so cohomology_class inverts it exactly.
inline Cochain1 representative_cochain(const Graph& g, const std::vector<double>& coords,
                                       const HomologyBasis& basis) {
  if (coords.size() != basis.cotree_pairs.size())
    fail(errc::bad_input, "coordinate count does not match the Betti number");
  Cochain1 omega(g.pair_count());
  for (size_t i = 0; i < coords.size(); ++i)
    omega.set_pair(basis.cotree_pairs[i], coords[i]);
  return omega;
}

}  // namespace graphkam
