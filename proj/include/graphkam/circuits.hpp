#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "graphkam/graph.hpp"

namespace graphkam {

struct CircuitEnumOptions {
  bool include_equilibria = false;  // emit the two-edge swings (e, -e)
  std::size_t cap = 1'000'000;      // hard bound on emitted circuits
};

/// All circuits (simple closed paths) inside the allowed edge set, each
/// cyclic-rotation class once, in its canonical rotation (smallest edge id
/// first).  Backtracks over walks whose first edge is the minimal id of the
/// circuit, so every class is generated exactly once.
inline std::vector<Path> enumerate_circuits(const Graph& g,
                                            const std::vector<EdgeId>& allowed_edges,
                                            CircuitEnumOptions opts = {}) {
  std::vector<bool> allowed(static_cast<size_t>(g.edge_count()), false);
  for (EdgeId e : allowed_edges) allowed[static_cast<size_t>(e)] = true;

  std::vector<Path> out;
  std::vector<EdgeId> walk;
  std::vector<bool> visited(static_cast<size_t>(g.vertex_count()), false);

  auto emit = [&](const std::vector<EdgeId>& edges) {
    bool equilibrium = edges.size() == 2 && edges[1] == Graph::reverse(edges[0]);
    if (equilibrium && !opts.include_equilibria) return;
    if (out.size() >= opts.cap)
      fail(errc::circuit_cap_exceeded, "more than " + std::to_string(opts.cap) + " circuits");
    out.push_back(Path{edges});
  };

  // Extends the walk; edges after the first must have a larger id than the
  // anchor so each rotation class appears anchored at its minimum.
  auto extend = [&](auto&& self, EdgeId anchor, VertexId start) -> void {
    VertexId here = g.terminal(walk.back());
    for (EdgeId f : g.out_edges(here)) {
      if (f <= anchor || !allowed[static_cast<size_t>(f)]) continue;
      VertexId next = g.terminal(f);
      if (next == start) {
        walk.push_back(f);
        emit(walk);
        walk.pop_back();
        continue;
      }
      if (visited[static_cast<size_t>(next)]) continue;
      visited[static_cast<size_t>(next)] = true;
      walk.push_back(f);
      self(self, anchor, start);
      walk.pop_back();
      visited[static_cast<size_t>(next)] = false;
    }
  };

  for (EdgeId anchor = 0; anchor < g.edge_count(); ++anchor) {
    if (!allowed[static_cast<size_t>(anchor)]) continue;
    VertexId start = g.origin(anchor);
    visited.assign(visited.size(), false);
    visited[static_cast<size_t>(start)] = true;
    visited[static_cast<size_t>(g.terminal(anchor))] = true;
    walk.assign(1, anchor);
    extend(extend, anchor, start);
  }
  return out;
}

inline std::vector<EdgeId> all_edges(const Graph& g) {
  std::vector<EdgeId> out(static_cast<size_t>(g.edge_count()));
  for (EdgeId e = 0; e < g.edge_count(); ++e) out[static_cast<size_t>(e)] = e;
  return out;
}

inline std::vector<Path> enumerate_circuits(const Graph& g, CircuitEnumOptions opts = {}) {
  return enumerate_circuits(g, all_edges(g), opts);
}

}  // namespace graphkam
