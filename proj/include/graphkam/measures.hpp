#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "graphkam/errors.hpp"
#include "graphkam/graph.hpp"

namespace graphkam {

/// One leg of a parametrized path: edge, average speed q >= 0, and the time
/// spent on it (1/q when q > 0, any positive number when q = 0).
struct PathAtom {
  EdgeId edge;
  double speed;
  double time;
};

/// A path whose edges carry speeds and traversal times.  Zero-speed legs
/// swing along an edge and its reverse; positive motion must resume from the
/// vertex where it stopped, and a path moving nowhere must close up.
class ParametrizedPath {
 public:
  static ParametrizedPath validate(const Graph& g, std::vector<PathAtom> atoms) {
    if (atoms.empty()) fail(errc::bad_input, "empty parametrized path");
    for (size_t i = 0; i + 1 < atoms.size(); ++i)
      if (g.terminal(atoms[i].edge) != g.origin(atoms[i + 1].edge))
        fail(errc::bad_concatenation,
             "leg " + std::to_string(i + 1) + " does not start where leg " + std::to_string(i) + " ends");
    for (size_t i = 0; i < atoms.size(); ++i) {
      const auto& a = atoms[i];
      if (a.speed < 0.0) fail(errc::bad_input, "negative speed");
      if (a.speed > 0.0) {
        if (std::abs(a.time - 1.0 / a.speed) > 1e-12 * (1.0 + 1.0 / a.speed))
          fail(errc::bad_time, "time must equal 1/speed on leg " + std::to_string(i));
      } else if (!(a.time > 0.0)) {
        fail(errc::bad_time, "zero-speed leg needs a positive time");
      }
    }
    for (size_t i = 0; i + 1 < atoms.size(); ++i) {
      if (atoms[i].speed == 0.0 && atoms[i + 1].edge != Graph::reverse(atoms[i].edge) &&
          atoms[i + 1].speed == 0.0)
        fail(errc::consecutive_equilibria,
             "zero-speed legs " + std::to_string(i) + ", " + std::to_string(i + 1) + " change edge pair");
    }
    bool any_positive = false;
    for (const auto& a : atoms) any_positive |= a.speed > 0.0;
    if (!any_positive) {
      if (g.origin(atoms.front().edge) != g.terminal(atoms.back().edge))
        fail(errc::zero_speed_open_path, "all speeds vanish but the path is open");
    }
    // positive-speed skeleton must concatenate on its own
    int last_positive = -1;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].speed == 0.0) continue;
      if (last_positive >= 0 &&
          g.origin(atoms[i].edge) != g.terminal(atoms[static_cast<size_t>(last_positive)].edge))
        fail(errc::skeleton_break, "positive-speed leg " + std::to_string(i) +
                                       " does not resume where motion stopped");
      last_positive = static_cast<int>(i);
    }
    ParametrizedPath p;
    p.atoms_ = std::move(atoms);
    return p;
  }

  const std::vector<PathAtom>& atoms() const { return atoms_; }

  double total_time() const {
    double t = 0.0;
    for (const auto& a : atoms_) t += a.time;
    return t;
  }

  Path support() const {
    Path p;
    for (const auto& a : atoms_) p.edges.push_back(a.edge);
    return p;
  }

  bool is_cycle(const Graph& g) const {
    return g.origin(atoms_.front().edge) == g.terminal(atoms_.back().edge);
  }

 private:
  std::vector<PathAtom> atoms_;
};

struct MeasureAtom {
  EdgeId edge;
  double speed;
  double weight;
};

/// Finitely supported probability measure on the tangent bundle of the graph
/// (points (e, q), q >= 0, with (e, 0) and (-e, 0) identified).  Zero-speed
/// atoms are stored on the orientation representative and equal (edge, speed)
/// atoms are merged, so equality of atom lists is equality of measures.
class FiniteMeasure {
 public:
  static FiniteMeasure from_atoms(std::vector<MeasureAtom> atoms, double mass_tol = 1e-12) {
    double mass = 0.0;
    for (auto& a : atoms) {
      if (a.speed < 0.0) fail(errc::bad_input, "negative speed in measure atom");
      if (!(a.weight > 0.0)) fail(errc::bad_input, "atom weights must be positive");
      if (a.speed == 0.0) a.edge = Graph::canonical(a.edge);
      mass += a.weight;
    }
    if (std::abs(mass - 1.0) > mass_tol)
      fail(errc::bad_input, "atom weights sum to " + std::to_string(mass) + ", expected 1");
    std::sort(atoms.begin(), atoms.end(), [](const MeasureAtom& x, const MeasureAtom& y) {
      return x.edge != y.edge ? x.edge < y.edge : x.speed < y.speed;
    });
    std::vector<MeasureAtom> merged;
    for (const auto& a : atoms) {
      if (!merged.empty() && merged.back().edge == a.edge && merged.back().speed == a.speed)
        merged.back().weight += a.weight;
      else
        merged.push_back(a);
    }
    FiniteMeasure m;
    m.atoms_ = std::move(merged);
    return m;
  }

  const std::vector<MeasureAtom>& atoms() const { return atoms_; }

  /// Edges carrying positive weight (zero-speed mass counts on the
  /// orientation representative).
  std::vector<EdgeId> support_edges() const {
    std::vector<EdgeId> out;
    for (const auto& a : atoms_) out.push_back(a.edge);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::vector<MeasureAtom> atoms_;
};

inline FiniteMeasure dirac(EdgeId e, double speed) {
  return FiniteMeasure::from_atoms({MeasureAtom{e, speed, 1.0}});
}

/// Time-weighted atom representation of a parametrized path.
inline FiniteMeasure occupation_measure(const ParametrizedPath& path) {
  double total = path.total_time();
  std::vector<MeasureAtom> atoms;
  for (const auto& a : path.atoms())
    atoms.push_back(MeasureAtom{a.edge, a.speed, a.time / total});
  return FiniteMeasure::from_atoms(std::move(atoms));
}

/// Edge-flux 1-chain rho(mu) = sum over atoms of weight * speed * edge.
inline Chain1 rotation_vector(const FiniteMeasure& mu) {
  Chain1 rho;
  for (const auto& a : mu.atoms()) rho.add(a.edge, a.weight * a.speed);
  return rho;
}

/// Kirchhoff balance of the flux chain.
inline bool is_closed(const Graph& g, const FiniteMeasure& mu, double tol = 1e-10) {
  Chain1 rho = rotation_vector(mu);
  return boundary(g, rho).max_abs() <= tol * (1.0 + rho.max_abs());
}

template <class F>
double integrate(const FiniteMeasure& mu, F&& f) {
  double sum = 0.0;
  for (const auto& a : mu.atoms()) sum += a.weight * f(a.edge, a.speed);
  return sum;
}

/// Integral of the linear-growth observable (e, q) -> <omega, q e>; equals
/// the pairing of omega with the rotation vector.
inline double integrate_cochain(const Cochain1& omega, const FiniteMeasure& mu) {
  return integrate(mu, [&](EdgeId e, double q) { return q * omega(e); });
}

struct CircuitComponent {
  double weight;          // convex coefficient
  Path circuit;           // canonical rotation
  FiniteMeasure measure;  // occupation measure of the parametrized circuit
};

/// Splits a closed measure with one atom per oriented edge into a convex
/// combination of circuit occupation measures: zero-speed atoms peel off as
/// equilibrium measures, and the positive part is consumed by repeatedly
/// walking the support (smallest outgoing edge id at each vertex), extracting
/// the discovered circuit with the largest weight that keeps all atoms
/// nonnegative.  At least one atom dies per extraction.
inline std::vector<CircuitComponent> decompose_circuits(const Graph& g, const FiniteMeasure& mu) {
  if (!is_closed(g, mu)) fail(errc::not_closed, "measure has nonzero flux boundary");
  std::map<EdgeId, std::pair<double, double>> live;  // edge -> (speed, weight)
  std::vector<CircuitComponent> zero_parts;
  for (const auto& a : mu.atoms()) {
    if (a.speed == 0.0) {
      zero_parts.push_back(CircuitComponent{
          a.weight, Path{{a.edge, Graph::reverse(a.edge)}}, dirac(a.edge, 0.0)});
      continue;
    }
    if (live.count(a.edge)) fail(errc::multi_atom_edge, "edge " + g.edge_name(a.edge) + " carries two atoms");
    live[a.edge] = {a.speed, a.weight};
  }

  double positive_mass = 0.0;
  for (const auto& [e, sw] : live) positive_mass += sw.second;

  std::vector<CircuitComponent> out;
  const double dust = 1e-14;
  while (!live.empty()) {
    double remaining = 0.0;
    for (const auto& [e, sw] : live) remaining += sw.second;
    if (remaining <= 1e-12) break;  // float dust left by the extractions
    // walk the support until a vertex repeats
    EdgeId start = live.begin()->first;
    std::vector<EdgeId> walk{start};
    std::map<VertexId, size_t> seen{{g.origin(start), 0}};
    size_t loop_at = 0;
    for (;;) {
      VertexId here = g.terminal(walk.back());
      auto hit = seen.find(here);
      if (hit != seen.end()) {
        loop_at = hit->second;
        break;
      }
      seen[here] = walk.size();
      EdgeId next = -1;
      for (EdgeId f : g.out_edges(here))
        if (live.count(f)) {
          next = f;
          break;
        }
      if (next < 0) fail(errc::not_closed, "support walk stalled at " + g.vertex_name(here));
      walk.push_back(next);
    }
    std::vector<EdgeId> circuit(walk.begin() + static_cast<long>(loop_at), walk.end());

    double total_time = 0.0;
    double flux_cap = std::numeric_limits<double>::infinity();
    for (EdgeId e : circuit) {
      auto& [q, w] = live[e];
      total_time += 1.0 / q;
      flux_cap = std::min(flux_cap, q * w);
    }
    double lambda = total_time * flux_cap;

    std::vector<MeasureAtom> atoms;
    for (EdgeId e : circuit) {
      auto& [q, w] = live[e];
      atoms.push_back(MeasureAtom{e, q, (1.0 / q) / total_time});
      w -= flux_cap / q;  // == lambda / (total_time q), fewer roundings
    }
    out.push_back(CircuitComponent{lambda, canonical_rotation(Path{circuit}),
                                   FiniteMeasure::from_atoms(std::move(atoms))});
    for (auto it = live.begin(); it != live.end();)
      it = it->second.second <= dust * (1.0 + flux_cap) ? live.erase(it) : std::next(it);
  }

  // remove float dust from the extracted weights so they sum exactly to the
  // positive mass
  double extracted = 0.0;
  for (const auto& c : out) extracted += c.weight;
  if (extracted > 0.0)
    for (auto& c : out) c.weight *= positive_mass / extracted;

  out.insert(out.end(), zero_parts.begin(), zero_parts.end());
  return out;
}

/// Recombines circuit components into a single measure (inverse of
/// decompose_circuits up to float error).
inline FiniteMeasure recombine(const std::vector<CircuitComponent>& parts) {
  std::vector<MeasureAtom> atoms;
  for (const auto& p : parts)
    for (const auto& a : p.measure.atoms())
      atoms.push_back(MeasureAtom{a.edge, a.speed, a.weight * p.weight});
  return FiniteMeasure::from_atoms(std::move(atoms), 1e-9);
}

}  // namespace graphkam
