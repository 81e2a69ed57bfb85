#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphkam/errors.hpp"

namespace graphkam {

using VertexId = int;
using EdgeId = int;

/// One oriented pair declaration: generates the edge `name` (from -> to)
/// and its reverse `-name` (to -> from).
struct EdgePairSpec {
  std::string name;
  std::string from;
  std::string to;
};

/// Finite connected directed graph with a fixed-point-free edge reversal.
///
/// Pairs keep their declaration order; pair k owns the oriented edges
/// 2k (forward, the orientation representative) and 2k+1 (reverse), so
/// reverse(e) == (e ^ 1).  Vertices are sorted by name, which makes vertex 0
/// the lexicographically smallest one.  Loops are rejected at build time.
class Graph {
 public:
  static Graph build(std::vector<std::string> vertices,
                     const std::vector<EdgePairSpec>& pairs) {
    Graph g;
    std::sort(vertices.begin(), vertices.end());
    for (const auto& v : vertices) {
      if (g.vertex_index_.count(v))
        fail(errc::duplicate_name, "vertex '" + v + "' declared twice");
      g.vertex_index_[v] = static_cast<VertexId>(g.vertex_names_.size());
      g.vertex_names_.push_back(v);
    }
    for (const auto& spec : pairs) {
      if (g.pair_index_.count(spec.name))
        fail(errc::duplicate_name, "edge pair '" + spec.name + "' declared twice");
      auto from = g.vertex_index_.find(spec.from);
      auto to = g.vertex_index_.find(spec.to);
      if (from == g.vertex_index_.end())
        fail(errc::unknown_vertex, "edge '" + spec.name + "' references '" + spec.from + "'");
      if (to == g.vertex_index_.end())
        fail(errc::unknown_vertex, "edge '" + spec.name + "' references '" + spec.to + "'");
      if (from->second == to->second)
        fail(errc::loop_edge, "edge '" + spec.name + "' is a loop at '" + spec.from + "'");
      g.pair_index_[spec.name] = static_cast<int>(g.pair_names_.size());
      g.pair_names_.push_back(spec.name);
      g.origin_.push_back(from->second);
      g.origin_.push_back(to->second);
    }
    g.check_connected();
    g.build_stars();
    return g;
  }

  int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
  int pair_count() const { return static_cast<int>(pair_names_.size()); }
  int edge_count() const { return 2 * pair_count(); }

  /// First Betti number, |E|/2 - |V| + 1.
  int betti() const { return pair_count() - vertex_count() + 1; }

  VertexId origin(EdgeId e) const { return origin_[static_cast<size_t>(e)]; }
  VertexId terminal(EdgeId e) const { return origin_[static_cast<size_t>(e ^ 1)]; }

  static EdgeId reverse(EdgeId e) { return e ^ 1; }
  static int pair_of(EdgeId e) { return e >> 1; }
  static bool is_forward(EdgeId e) { return (e & 1) == 0; }
  static EdgeId forward_edge(int pair) { return 2 * pair; }
  static EdgeId reverse_edge(int pair) { return 2 * pair + 1; }
  /// Orientation representative of e's pair.
  static EdgeId canonical(EdgeId e) { return e & ~1; }

  const std::string& vertex_name(VertexId v) const { return vertex_names_[static_cast<size_t>(v)]; }
  const std::string& pair_name(int pair) const { return pair_names_[static_cast<size_t>(pair)]; }

  std::string edge_name(EdgeId e) const {
    const std::string& base = pair_names_[static_cast<size_t>(pair_of(e))];
    return is_forward(e) ? base : "-" + base;
  }

  VertexId vertex_id(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) fail(errc::unknown_vertex, "'" + name + "'");
    return it->second;
  }

  int pair_id(const std::string& name) const {
    auto it = pair_index_.find(name);
    if (it == pair_index_.end()) fail(errc::unknown_vertex, "edge pair '" + name + "'");
    return it->second;
  }

  /// Resolves "name" to the forward edge and "-name" to the reverse one.
  EdgeId edge_id(const std::string& name) const {
    if (!name.empty() && name[0] == '-') return reverse_edge(pair_id(name.substr(1)));
    return forward_edge(pair_id(name));
  }

  bool has_vertex(const std::string& name) const { return vertex_index_.count(name) > 0; }

  /// Star at x: edges originating from x, ascending edge id.
  const std::vector<EdgeId>& out_edges(VertexId x) const { return stars_[static_cast<size_t>(x)]; }

 private:
  void check_connected() {
    if (vertex_names_.empty()) fail(errc::bad_input, "graph has no vertices");
    std::vector<bool> seen(vertex_names_.size(), false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (EdgeId e = 0; e < edge_count(); ++e) {
        if (origin(e) != x) continue;
        VertexId y = terminal(e);
        if (!seen[static_cast<size_t>(y)]) {
          seen[static_cast<size_t>(y)] = true;
          stack.push_back(y);
        }
      }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      fail(errc::disconnected, "graph is not connected");
  }

  void build_stars() {
    stars_.assign(vertex_names_.size(), {});
    for (EdgeId e = 0; e < edge_count(); ++e)
      stars_[static_cast<size_t>(origin(e))].push_back(e);
  }

  std::vector<std::string> vertex_names_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::vector<std::string> pair_names_;
  std::unordered_map<std::string, int> pair_index_;
  std::vector<VertexId> origin_;  // indexed by edge id
  std::vector<std::vector<EdgeId>> stars_;
};

/// Edge sequence; concatenation is a property checked on demand, not a
/// construction invariant, since enumeration code builds paths edge by edge.
struct Path {
  std::vector<EdgeId> edges;

  bool empty() const { return edges.empty(); }
  size_t length() const { return edges.size(); }
};

inline bool is_path(const Graph& g, const Path& p) {
  for (size_t i = 0; i + 1 < p.edges.size(); ++i)
    if (g.terminal(p.edges[i]) != g.origin(p.edges[i + 1])) return false;
  return true;
}

inline bool is_cycle(const Graph& g, const Path& p) {
  return !p.empty() && is_path(g, p) &&
         g.origin(p.edges.front()) == g.terminal(p.edges.back());
}

/// Simple closed path: no terminal vertex repeats except the closing one.
inline bool is_circuit(const Graph& g, const Path& p) {
  if (!is_cycle(g, p)) return false;
  std::vector<VertexId> ends;
  for (EdgeId e : p.edges) ends.push_back(g.terminal(e));
  std::sort(ends.begin(), ends.end());
  return std::adjacent_find(ends.begin(), ends.end()) == ends.end();
}

/// The two-edge swing (e, -e).
inline bool is_equilibrium_circuit(const Path& p) {
  return p.edges.size() == 2 && p.edges[1] == Graph::reverse(p.edges[0]);
}

/// Rotates a circuit so its smallest edge id comes first; cyclic-rotation
/// classes then compare by equality.
inline Path canonical_rotation(const Path& p) {
  if (p.edges.empty()) return p;
  auto mn = std::min_element(p.edges.begin(), p.edges.end());
  Path out;
  out.edges.insert(out.edges.end(), mn, p.edges.end());
  out.edges.insert(out.edges.end(), p.edges.begin(), mn);
  return out;
}

/// Real 1-chain stored on the orientation; coefficient lookup resolves the
/// sign, so coeff(-e) == -coeff(e) holds structurally.
class Chain1 {
 public:
  double coeff(EdgeId e) const {
    auto it = coeffs_.find(Graph::pair_of(e));
    if (it == coeffs_.end()) return 0.0;
    return Graph::is_forward(e) ? it->second : -it->second;
  }

  void add(EdgeId e, double value) {
    if (value == 0.0) return;
    int pair = Graph::pair_of(e);
    double& c = coeffs_[pair];
    c += Graph::is_forward(e) ? value : -value;
    if (c == 0.0) coeffs_.erase(pair);
  }

  /// Entries (pair index, coefficient on the forward edge), ascending pair.
  const std::map<int, double>& entries() const { return coeffs_; }

  Chain1& operator+=(const Chain1& other) {
    for (auto [pair, c] : other.coeffs_) add(Graph::forward_edge(pair), c);
    return *this;
  }

  Chain1& scale(double s) {
    if (s == 0.0) { coeffs_.clear(); return *this; }
    for (auto& [pair, c] : coeffs_) c *= s;
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (auto& [pair, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  std::map<int, double> coeffs_;
};

/// Real 0-chain (vertex coefficients).
class Chain0 {
 public:
  double coeff(VertexId v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  void add(VertexId v, double value) {
    if (value == 0.0) return;
    double& c = coeffs_[v];
    c += value;
    if (c == 0.0) coeffs_.erase(v);
  }

  const std::map<VertexId, double>& entries() const { return coeffs_; }

  double max_abs() const {
    double m = 0.0;
    for (auto& [v, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  std::map<VertexId, double> coeffs_;
};

/// Function on vertices.
struct Cochain0 {
  std::vector<double> values;

  explicit Cochain0(size_t n = 0, double fill = 0.0) : values(n, fill) {}
  double operator()(VertexId v) const { return values[static_cast<size_t>(v)]; }
  double& operator[](VertexId v) { return values[static_cast<size_t>(v)]; }
};

/// Odd function on edges, stored on the orientation: value(-e) == -value(e).
class Cochain1 {
 public:
  Cochain1() = default;
  explicit Cochain1(int pair_count) : on_pairs_(static_cast<size_t>(pair_count), 0.0) {}

  double operator()(EdgeId e) const {
    double v = on_pairs_[static_cast<size_t>(Graph::pair_of(e))];
    return Graph::is_forward(e) ? v : -v;
  }

  /// Assigns the value carried by the forward edge of `pair`.
  void set_pair(int pair, double value) { on_pairs_[static_cast<size_t>(pair)] = value; }
  double pair_value(int pair) const { return on_pairs_[static_cast<size_t>(pair)]; }
  int pair_count() const { return static_cast<int>(on_pairs_.size()); }

  Cochain1& operator+=(const Cochain1& other) {
    for (size_t i = 0; i < on_pairs_.size(); ++i) on_pairs_[i] += other.on_pairs_[i];
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : on_pairs_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::vector<double> on_pairs_;
};

/// Boundary operator: de = t(e) - o(e), extended linearly.
inline Chain0 boundary(const Graph& g, const Chain1& chain) {
  Chain0 out;
  for (auto [pair, c] : chain.entries()) {
    EdgeId e = Graph::forward_edge(pair);
    out.add(g.terminal(e), c);
    out.add(g.origin(e), -c);
  }
  return out;
}

/// Coboundary: dg(e) = g(t(e)) - g(o(e)).
inline Cochain1 coboundary(const Graph& g, const Cochain0& f) {
  Cochain1 out(g.pair_count());
  for (int pair = 0; pair < g.pair_count(); ++pair) {
    EdgeId e = Graph::forward_edge(pair);
    out.set_pair(pair, f(g.terminal(e)) - f(g.origin(e)));
  }
  return out;
}

/// Bilinear pairing between 1-cochains and 1-chains.
inline double pairing(const Cochain1& eta, const Chain1& chain) {
  double sum = 0.0;
  for (auto [pair, c] : chain.entries()) sum += c * eta.pair_value(pair);
  return sum;
}

/// Degree-0 analogue.
inline double pairing(const Cochain0& f, const Chain0& chain) {
  double sum = 0.0;
  for (auto [v, c] : chain.entries()) sum += c * f(v);
  return sum;
}

/// [xi]: the 1-chain summing a path's edges.
inline Chain1 chain_of_path(const Path& p) {
  Chain1 out;
  for (EdgeId e : p.edges) out.add(e, 1.0);
  return out;
}

inline double intrinsic_sum(const Cochain1& eta, const Path& p) {
  double sum = 0.0;
  for (EdgeId e : p.edges) sum += eta(e);
  return sum;
}

}  // namespace graphkam
