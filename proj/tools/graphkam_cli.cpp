// Batch front-end: ingest graph/network + Hamiltonian JSON, run the solvers,
// emit JSON or CSV for plotting and downstream tooling.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphkam/circuits.hpp"
#include "graphkam/homology.hpp"
#include "graphkam/json_io.hpp"
#include "graphkam/mather.hpp"
#include "graphkam/measures.hpp"
#include "graphkam/network.hpp"
#include "graphkam/wasserstein.hpp"
#include "graphkam/weak_kam.hpp"

namespace {

using namespace graphkam;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail(errc::bad_input, "cannot write '" + out_path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::vector<double> parse_coords(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct GridAxis {
  double lo, hi, step;
};

std::vector<GridAxis> parse_grid(const std::string& text) {
  std::vector<GridAxis> axes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    GridAxis axis{};
    if (std::sscanf(item.c_str(), "%lf:%lf:%lf", &axis.lo, &axis.hi, &axis.step) != 3)
      fail(errc::bad_input, "grid axis must be lo:hi:step, got '" + item + "'");
    if (!(axis.step > 0.0) || !std::isfinite(axis.lo) || !std::isfinite(axis.hi) ||
        axis.hi < axis.lo)
      fail(errc::bad_input, "grid axis needs finite bounds and a positive step");
    axes.push_back(axis);
  }
  return axes;
}

json critical_report(const Graph& g, const GraphHamiltonian& h, const std::vector<double>& c,
                     const HomologyBasis& basis, const MatherOptions& opts) {
  WeakKamResult wk = solve_weak_kam(g, modify(h, representative_cochain(g, c, basis)), opts.wk);
  json j;
  j["c"] = c;
  j["alpha"] = wk.critical_value;
  j["aubry_edges"] = json::array();
  for (EdgeId e : wk.aubry_edges) j["aubry_edges"].push_back(g.edge_name(e));
  j["Q"] = json::object();
  for (const auto& [e, q] : wk.speeds) j["Q"][g.edge_name(e)] = q;
  j["subsolution"] = json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v) j["subsolution"][g.vertex_name(v)] = wk.u(v);
  return j;
}

int cmd_validate(const std::string& input, std::uint64_t seed, const std::string& out_path) {
  json j = read_json_file(input);
  std::vector<std::string> report;
  bool hard_failure = false;
  std::mt19937_64 rng(seed);

  auto note = [&](const std::string& line) { report.push_back(line); };

  Graph* graph_ptr = nullptr;
  Graph graph_storage = Graph::build({"_"}, {});
  try {
    if (j.contains("graph") || (j.contains("vertices") && j.contains("edges"))) {
      graph_storage = load_graph(j.contains("graph") ? j.at("graph") : j);
      graph_ptr = &graph_storage;
      note("ok: graph with " + std::to_string(graph_ptr->vertex_count()) + " vertices, " +
           std::to_string(graph_ptr->pair_count()) + " edge pairs, betti " +
           std::to_string(graph_ptr->betti()));
      // seeded pairing spot check: <dg, zeta> == <g, d zeta>
      HomologyBasis basis = homology_basis(*graph_ptr);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Cochain0 f(static_cast<size_t>(graph_ptr->vertex_count()));
      for (auto& v : f.values) v = u(rng);
      bool adjoint_ok = true;
      for (const Path& zeta : basis.cycles)
        adjoint_ok &= std::abs(intrinsic_sum(coboundary(*graph_ptr, f), zeta)) < 1e-9;
      note(adjoint_ok ? "ok: coboundary pairing vanishes on the cycle basis"
                      : "error: coboundary pairing check failed");
      hard_failure |= !adjoint_ok;
    }
    if (graph_ptr && j.contains("hamiltonian")) {
      GraphHamiltonian h = load_hamiltonian(j.at("hamiltonian"), *graph_ptr);
      note("ok: hamiltonian (a0 = " + fmt(a0(h)) + ")");
    }
    if (j.contains("measure") || j.contains("atoms")) {
      if (!graph_ptr) {
        note("error: measure validation needs a graph in the same file");
        hard_failure = true;
      } else {
        FiniteMeasure mu = load_measure(j.contains("measure") ? j.at("measure") : j, *graph_ptr);
        note("ok: measure with " + std::to_string(mu.atoms().size()) + " atoms");
        note(is_closed(*graph_ptr, mu) ? "ok: measure is closed"
                                       : "warning: NotClosed (nonzero flux boundary)");
      }
    }
    if (j.contains("arcs")) {
      NetworkSpec spec = load_network(j);
      CompiledNetwork compiled = compile_network(spec);
      bool checks = true;
      for (EdgeId e = 0; e < compiled.graph.edge_count(); ++e)
        checks &= check_compiled(compiled.hamiltonian.edge(e)).ok();
      note("ok: network with " + std::to_string(spec.arcs.size()) + " arcs compiles");
      note(checks ? "ok: compiled branches pass the structure checks"
                  : "error: compiled branch structure check failed");
      hard_failure |= !checks;
    }
  } catch (const Error& e) {
    note(std::string("error: ") + e.what());
    hard_failure = true;
  }

  std::string text;
  for (const auto& line : report) text += line + "\n";
  emit(text, out_path);
  return hard_failure ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak KAM and minimal-action solvers on finite graphs"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // keep -h free for --h coordinates

  std::string input, out_path, measure_path, format = "json";
  std::string c_text, h_text, grid_text;
  double tol = -1.0;
  std::uint64_t seed = 0;
  int quad_nodes = 32;

  auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
    cmd->set_help_flag("--help", "print help");
    auto* opt = cmd->add_option("--input", input, "input JSON file");
    if (needs_input) opt->required();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", tol, "override the default tolerance");
    cmd->add_option("--seed", seed, "seed for randomized checks");
  };

  auto* validate = app.add_subcommand("validate", "schema and invariant checks");
  add_common(validate);

  auto* critical = app.add_subcommand("critical", "critical value, Aubry set, speeds");
  add_common(critical);
  critical->add_option("--c", c_text, "cohomology coordinates, comma separated");

  auto* alpha_grid = app.add_subcommand("alpha-grid", "alpha over a coordinate grid");
  add_common(alpha_grid);
  alpha_grid->add_option("--grid", grid_text, "per-axis lo:hi:step, comma separated")->required();

  auto* beta_cmd = app.add_subcommand("beta", "minimal action at fixed homology");
  add_common(beta_cmd);
  beta_cmd->add_option("--h", h_text, "homology coordinates, comma separated");

  auto* mather_cmd = app.add_subcommand("mather", "Mather measures and set");
  add_common(mather_cmd);
  mather_cmd->add_option("--c", c_text, "cohomology coordinates, comma separated");

  auto* decompose = app.add_subcommand("decompose", "split a closed measure into circuits");
  add_common(decompose);
  decompose->add_option("--measure", measure_path, "measure JSON file")->required();

  auto* compile_cmd = app.add_subcommand("compile", "network arcs to a graph Hamiltonian");
  add_common(compile_cmd);
  compile_cmd->add_option("--quad-nodes", quad_nodes, "quadrature order (default 32)");

  CLI11_PARSE(app, argc, argv);

  try {
    MatherOptions opts;
    if (tol > 0.0) {
      opts.wk.bisect_tol = tol;
      opts.action_tol = std::max(tol, 1e-12);
    }

    if (app.got_subcommand(validate)) return cmd_validate(input, seed, out_path);

    if (app.got_subcommand(critical)) {
      Problem p = load_problem(read_json_file(input));
      HomologyBasis basis = homology_basis(p.graph);
      std::vector<double> c = parse_coords(c_text);
      c.resize(static_cast<size_t>(basis.betti()), 0.0);
      emit(critical_report(p.graph, p.hamiltonian, c, basis, opts).dump(2), out_path);
      return 0;
    }

    if (app.got_subcommand(alpha_grid)) {
      Problem p = load_problem(read_json_file(input));
      HomologyBasis basis = homology_basis(p.graph);
      auto axes = parse_grid(grid_text);
      if (static_cast<int>(axes.size()) != basis.betti())
        fail(errc::bad_input, "grid needs one axis per homology generator (betti = " +
                                  std::to_string(basis.betti()) + ")");
      std::vector<std::vector<double>> rows;
      std::vector<double> c(axes.size(), 0.0);
      auto sweep = [&](auto&& self, size_t axis) -> void {
        if (axis == axes.size()) {
          rows.push_back(c);
          return;
        }
        int steps = static_cast<int>(std::floor((axes[axis].hi - axes[axis].lo) / axes[axis].step + 1e-9));
        for (int i = 0; i <= steps; ++i) {
          c[axis] = axes[axis].lo + i * axes[axis].step;
          self(self, axis + 1);
        }
      };
      sweep(sweep, 0);

      std::string csv;
      json rows_json = json::array();
      for (size_t i = 0; i < axes.size(); ++i) csv += "c" + std::to_string(i + 1) + ",";
      csv += "alpha\n";
      for (const auto& point : rows) {
        double value = alpha(p.graph, p.hamiltonian, point, basis, opts);
        for (double x : point) csv += fmt(x) + ",";
        csv += fmt(value) + "\n";
        rows_json.push_back({{"c", point}, {"alpha", value}});
      }
      emit(format == "csv" ? csv : rows_json.dump(2), out_path);
      return 0;
    }

    if (app.got_subcommand(beta_cmd)) {
      Problem p = load_problem(read_json_file(input));
      HomologyBasis basis = homology_basis(p.graph);
      std::vector<double> h = parse_coords(h_text);
      h.resize(static_cast<size_t>(basis.betti()), 0.0);
      BetaResult r = beta(p.graph, p.hamiltonian, h, basis, opts);
      json j;
      j["h"] = h;
      j["beta"] = r.value;
      j["optimal_c"] = r.optimal_c;
      j["duality_gap"] = r.duality_gap;
      j["iterations"] = r.iterations;
      j["certificate"] = json::array();
      for (size_t i = 0; i < r.certificate.size(); ++i)
        j["certificate"].push_back({{"weight", r.certificate_weights[i]},
                                    {"rotation", r.certificate_rotations[i]},
                                    {"measure", save_measure(r.certificate[i], p.graph)}});
      emit(j.dump(2), out_path);
      return 0;
    }

    if (app.got_subcommand(mather_cmd)) {
      Problem p = load_problem(read_json_file(input));
      HomologyBasis basis = homology_basis(p.graph);
      std::vector<double> c = parse_coords(c_text);
      c.resize(static_cast<size_t>(basis.betti()), 0.0);
      MatherSolution sol = mather_measures(p.graph, p.hamiltonian, c, basis, opts);
      json j;
      j["c"] = c;
      j["alpha"] = sol.alpha;
      j["mather_set"] = json::array();
      for (const auto& [e, q] : sol.mather_set)
        j["mather_set"].push_back({{"edge", p.graph.edge_name(e)}, {"q", q}});
      j["irreducible_measures"] = json::array();
      for (size_t i = 0; i < sol.irreducible_measures.size(); ++i)
        j["irreducible_measures"].push_back(
            {{"measure", save_measure(sol.irreducible_measures[i], p.graph)},
             {"rotation", sol.rotation_vectors[i]}});
      j["graph_property"] = check_graph_property(sol);
      emit(j.dump(2), out_path);
      return 0;
    }

    if (app.got_subcommand(decompose)) {
      json input_json = read_json_file(input);
      Graph g = load_graph(input_json.contains("graph") ? input_json.at("graph") : input_json);
      FiniteMeasure mu = load_measure(read_json_file(measure_path), g);
      auto parts = decompose_circuits(g, mu);
      json j = json::array();
      for (const auto& part : parts) {
        json names = json::array();
        for (EdgeId e : part.circuit.edges) names.push_back(g.edge_name(e));
        j.push_back({{"weight", part.weight},
                     {"circuit", std::move(names)},
                     {"measure", save_measure(part.measure, g)}});
      }
      emit(j.dump(2), out_path);
      return 0;
    }

    if (app.got_subcommand(compile_cmd)) {
      NetworkSpec spec = load_network(read_json_file(input));
      CompiledNetwork compiled = compile_network(spec, quad_nodes);
      json j;
      j["graph"] = save_graph(compiled.graph);
      j["hamiltonian"] = save_hamiltonian(compiled.hamiltonian, compiled.graph);
      emit(j.dump(2), out_path);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case errc::non_convergence:
      case errc::circuit_cap_exceeded:
      case errc::infeasible_primal:
      case errc::quadrature_failure:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
