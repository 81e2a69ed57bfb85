#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphkam/errors.hpp"
#include "graphkam/graph.hpp"
#include "graphkam/hamiltonian.hpp"
#include "graphkam/measures.hpp"
#include "graphkam/network.hpp"

namespace graphkam {

using nlohmann::json;

// ---------------------------------------------------------------------------
// graph: {"vertices": [...], "edges": [{"name", "from", "to"}, ...]}
// ---------------------------------------------------------------------------

inline Graph load_graph(const json& j) {
  if (!j.contains("vertices") || !j.contains("edges"))
    fail(errc::bad_input, "graph JSON needs 'vertices' and 'edges'");
  std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
  std::vector<EdgePairSpec> pairs;
  for (const auto& e : j.at("edges"))
    pairs.push_back(EdgePairSpec{e.at("name").get<std::string>(), e.at("from").get<std::string>(),
                                 e.at("to").get<std::string>()});
  return Graph::build(std::move(vertices), pairs);
}

inline json save_graph(const Graph& g) {
  json j;
  for (VertexId v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.vertex_name(v));
  j["edges"] = json::array();
  for (int pair = 0; pair < g.pair_count(); ++pair) {
    EdgeId e = Graph::forward_edge(pair);
    j["edges"].push_back({{"name", g.pair_name(pair)},
                          {"from", g.vertex_name(g.origin(e))},
                          {"to", g.vertex_name(g.terminal(e))}});
  }
  return j;
}

// ---------------------------------------------------------------------------
// hamiltonian: {"<pair name>": {"family": "quadratic", "theta": t, "v": v}}
//          or  {"<pair name>": {"family": "tabulated", "a_floor": a,
//                               "sigma_samples": [[a, s_fwd, s_rev], ...]}}
// ---------------------------------------------------------------------------

inline GraphHamiltonian load_hamiltonian(const json& j, const Graph& g) {
  std::vector<EdgeHamiltonian> branches;
  for (int pair = 0; pair < g.pair_count(); ++pair) {
    const std::string& name = g.pair_name(pair);
    if (!j.contains(name)) fail(errc::bad_input, "hamiltonian missing pair '" + name + "'");
    const json& spec = j.at(name);
    std::string family = spec.value("family", "quadratic");
    if (family == "quadratic") {
      double theta = spec.value("theta", 0.0);
      double v = spec.value("v", 0.0);
      branches.push_back(EdgeHamiltonian::quadratic(theta, v));
      branches.push_back(EdgeHamiltonian::quadratic(-theta, v));
    } else if (family == "tabulated") {
      double floor = spec.at("a_floor").get<double>();
      std::vector<double> as, fwd, rev;
      for (const auto& row : spec.at("sigma_samples")) {
        if (row.size() != 3) fail(errc::bad_input, "sigma_samples rows are [a, sigma, sigma_rev]");
        as.push_back(row[0].get<double>());
        fwd.push_back(row[1].get<double>());
        rev.push_back(row[2].get<double>());
      }
      branches.push_back(EdgeHamiltonian::tabulated(floor, as, fwd));
      branches.push_back(EdgeHamiltonian::tabulated(floor, std::move(as), std::move(rev)));
    } else {
      fail(errc::bad_input, "unknown hamiltonian family '" + family + "'");
    }
  }
  return GraphHamiltonian::from_branches(std::move(branches));
}

/// Serializes analytic pairs exactly; anything else (compiled arcs) is
/// sampled onto a floor-refined grid and emitted as the tabulated family.
inline json save_hamiltonian(const GraphHamiltonian& h, const Graph& g) {
  json j;
  for (int pair = 0; pair < g.pair_count(); ++pair) {
    EdgeId e = Graph::forward_edge(pair);
    const EdgeHamiltonian& fwd = h.edge(e);
    const EdgeHamiltonian& rev = h.edge(Graph::reverse(e));
    if (auto params = fwd.quadratic_params()) {
      j[g.pair_name(pair)] = {
          {"family", "quadratic"}, {"theta", params->first}, {"v", params->second}};
      continue;
    }
    double floor = fwd.a_floor();
    double scale = 1.0 + std::abs(floor);
    std::vector<double> offsets{0.0};
    for (int k = -9; k <= 6; ++k)
      for (double mult : {1.0, 2.0, 5.0}) offsets.push_back(mult * scale * std::pow(10.0, k));
    std::sort(offsets.begin(), offsets.end());
    json samples = json::array();
    for (double off : offsets)
      samples.push_back({floor + off, fwd.sigma(floor + off), rev.sigma(floor + off)});
    j[g.pair_name(pair)] = {
        {"family", "tabulated"}, {"a_floor", floor}, {"sigma_samples", std::move(samples)}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// measure: {"atoms": [{"edge": "name" | "-name", "q": speed, "w": weight}]}
// ---------------------------------------------------------------------------

inline FiniteMeasure load_measure(const json& j, const Graph& g) {
  if (!j.contains("atoms")) fail(errc::bad_input, "measure JSON needs 'atoms'");
  std::vector<MeasureAtom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back(MeasureAtom{g.edge_id(a.at("edge").get<std::string>()),
                                a.at("q").get<double>(), a.at("w").get<double>()});
  return FiniteMeasure::from_atoms(std::move(atoms), 1e-9);
}

inline json save_measure(const FiniteMeasure& mu, const Graph& g) {
  json atoms = json::array();
  for (const auto& a : mu.atoms())
    atoms.push_back({{"edge", g.edge_name(a.edge)}, {"q", a.speed}, {"w", a.weight}});
  return json{{"atoms", std::move(atoms)}};
}

// ---------------------------------------------------------------------------
// network: {"vertices": [...],
//           "arcs": [{"name", "from", "to", "theta": x | [samples],
//                     "m": x | [samples], "v": V}]}
// ---------------------------------------------------------------------------

inline Profile load_profile(const json& j, double fallback) {
  if (j.is_null()) return Profile::constant(fallback);
  if (j.is_number()) return Profile::constant(j.get<double>());
  return Profile::from_samples(j.get<std::vector<double>>());
}

inline NetworkSpec load_network(const json& j) {
  if (!j.contains("vertices") || !j.contains("arcs"))
    fail(errc::bad_input, "network JSON needs 'vertices' and 'arcs'");
  NetworkSpec spec;
  spec.vertices = j.at("vertices").get<std::vector<std::string>>();
  for (const auto& a : j.at("arcs")) {
    ArcHamiltonian arc;
    arc.name = a.at("name").get<std::string>();
    arc.from = a.at("from").get<std::string>();
    arc.to = a.at("to").get<std::string>();
    arc.theta = load_profile(a.value("theta", json()), 0.0);
    arc.mass = load_profile(a.value("m", json()), 1.0);
    arc.v = a.value("v", 0.0);
    spec.arcs.push_back(std::move(arc));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// problem file: {"graph": {...}, "hamiltonian": {...}}
// ---------------------------------------------------------------------------

struct Problem {
  Graph graph;
  GraphHamiltonian hamiltonian;
};

inline Problem load_problem(const json& j) {
  if (!j.contains("graph") || !j.contains("hamiltonian"))
    fail(errc::bad_input, "problem JSON needs 'graph' and 'hamiltonian'");
  Graph g = load_graph(j.at("graph"));
  GraphHamiltonian h = load_hamiltonian(j.at("hamiltonian"), g);
  return Problem{std::move(g), std::move(h)};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::bad_input, "parse error in '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace graphkam
