#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "graphkam/homology.hpp"
#include "graphkam/mather.hpp"
#include "graphkam/network.hpp"
#include "graphkam/weak_kam.hpp"
#include "test_util.hpp"

using namespace graphkam;

namespace {

std::vector<double> linspace01(int n, double slope) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(slope * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

NetworkSpec two_arc_network() {
  NetworkSpec spec;
  spec.vertices = {"x", "y"};
  ArcHamiltonian g1{"g1", "x", "y"};
  ArcHamiltonian g2{"g2", "x", "y"};
  spec.arcs = {g1, g2};
  return spec;
}

}  // namespace

TEST_CASE("sigma_plus on the built-in arc family") {
  ArcHamiltonian arc{"g", "x", "y"};
  CHECK(sigma_plus(arc, 0.3, 2.0) == Catch::Approx(2.0));
  CHECK(sigma_plus(arc, 0.9, arc.floor()) == 0.0);

  ArcHamiltonian ramp{"r", "x", "y"};
  ramp.theta = Profile::from_samples(linspace01(9, 1.0));  // theta(s) = s
  CHECK(sigma_plus(ramp, 0.25, ramp.floor()) == Catch::Approx(0.25).margin(1e-12));

  // reverse arc: theta flips sign and argument, mass flips argument
  ArcHamiltonian rev = reverse_arc(ramp);
  for (double s : {0.0, 0.25, 0.5, 0.8}) {
    CHECK(rev.theta(s) == Catch::Approx(-ramp.theta(1.0 - s)).margin(1e-12));
    CHECK(sigma_plus(rev, s, 2.0) ==
          Catch::Approx(-ramp.theta(1.0 - s) + std::sqrt(4.0)).margin(1e-12));
  }

  CHECK_THROWS_MATCHES(sigma_plus(arc, 0.5, -1.0), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::below_floor; }));
}

TEST_CASE("compiling s-independent arcs reproduces the arc Hamiltonian") {
  NetworkSpec spec = two_arc_network();
  spec.arcs[0].theta = Profile::constant(0.4);
  spec.arcs[1].v = 0.5;
  CompiledNetwork compiled = compile_network(spec);

  EdgeId e1 = compiled.graph.edge_id("g1");
  EdgeId e2 = compiled.graph.edge_id("g2");
  for (double a : {0.0, 0.3, 1.0, 4.0}) {
    CHECK(compiled.hamiltonian.edge(e1).sigma(a) ==
          Catch::Approx(0.4 + std::sqrt(2.0 * a)).margin(1e-12));
    CHECK(compiled.hamiltonian.edge(e2).sigma(a) ==
          Catch::Approx(std::sqrt(2.0 * (a + 0.5))).margin(1e-12));
  }
  CHECK(compiled.hamiltonian.a_floor(e2) == Catch::Approx(-0.5));
}

TEST_CASE("ramp profile integrates to the shifted square root") {
  NetworkSpec spec = two_arc_network();
  spec.arcs[0].theta = Profile::from_samples(linspace01(33, 1.0));
  CompiledNetwork compiled = compile_network(spec, 32);
  EdgeId e1 = compiled.graph.edge_id("g1");
  for (double a : {0.1, 0.5, 2.0, 7.0})
    CHECK(compiled.hamiltonian.edge(e1).sigma(a) ==
          Catch::Approx(0.5 + std::sqrt(2.0 * a)).margin(1e-9));

  // reversal symmetry of the compiled pair at the floor
  double floor = compiled.hamiltonian.a_floor(e1);
  CHECK(compiled.hamiltonian.edge(e1).sigma(floor) ==
        Catch::Approx(-compiled.hamiltonian.edge(Graph::reverse(e1)).sigma(floor)).margin(1e-12));
}

TEST_CASE("quadrature refinement is already converged at 32 nodes") {
  // linear profiles: the interpolant is exact and the integrand is analytic,
  // so the rule converges spectrally
  NetworkSpec spec = two_arc_network();
  spec.arcs[0].theta = Profile::from_samples({-0.2, 0.5});
  spec.arcs[0].mass = Profile::from_samples({1.0, 1.44});
  CompiledNetwork coarse = compile_network(spec, 32);
  CompiledNetwork fine = compile_network(spec, 64);
  EdgeId e1 = coarse.graph.edge_id("g1");
  for (double a : {0.2, 1.0, 3.0, 9.0})
    CHECK(coarse.hamiltonian.edge(e1).sigma(a) ==
          Catch::Approx(fine.hamiltonian.edge(e1).sigma(a)).margin(1e-10));
}

TEST_CASE("compiled branches pass the structure checks") {
  NetworkSpec spec = two_arc_network();
  spec.arcs[0].theta = Profile::from_samples(linspace01(17, 0.8));
  spec.arcs[0].mass = Profile::from_samples({1.0, 1.2, 1.5, 1.3, 1.1, 1.0, 0.9, 1.0, 1.1});
  spec.arcs[1].v = 0.25;
  CompiledNetwork compiled = compile_network(spec);
  for (EdgeId e = 0; e < compiled.graph.edge_count(); ++e) {
    CompiledCheckReport report = check_compiled(compiled.hamiltonian.edge(e));
    INFO(compiled.graph.edge_name(e));
    for (const auto& v : report.violations) INFO(v);
    CHECK(report.ok());
  }

  // derivative grows toward the floor like the square-root inverse
  EdgeId e1 = compiled.graph.edge_id("g1");
  double d3 = compiled.hamiltonian.edge(e1).dsigma_da(1e-3);
  double d6 = compiled.hamiltonian.edge(e1).dsigma_da(1e-6);
  CHECK(d6 > 10.0 * d3);
}

TEST_CASE("a tampered monotone table is reported") {
  std::vector<double> as{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> sig{0.0, 1.0, 0.9, 2.0, 2.8};  // dip at the third sample
  CHECK_THROWS_AS(EdgeHamiltonian::tabulated(0.0, as, sig), Error);

  // a dip smuggled past construction is still caught by the grid check
  EdgeHamiltonian dipped = EdgeHamiltonian::from_functions(
      0.0, [](double a) { return std::sqrt(2.0 * a) - 0.4 * std::sin(2.0 * a); },
      [](double a) { return 1.0 / std::sqrt(2.0 * a) - 0.8 * std::cos(2.0 * a); }, "tampered");
  CompiledCheckReport dip_report = check_compiled(dipped);
  CHECK_FALSE(dip_report.monotone);

  // a non-concave but increasing table builds, and the checker flags it
  std::vector<double> convex{0.0, 0.1, 0.4, 1.6, 6.4};
  EdgeHamiltonian h = EdgeHamiltonian::tabulated(0.0, as, convex);
  CompiledCheckReport report = check_compiled(h);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(report.concave);
}

TEST_CASE("downstream critical values agree with the direct graph route") {
  // s-independent arcs: the compiled Hamiltonian must be exactly the
  // quadratic family, so weak KAM output matches the direct construction
  NetworkSpec spec = two_arc_network();
  spec.arcs[0].theta = Profile::constant(0.7);
  spec.arcs[1].theta = Profile::constant(-0.2);
  spec.arcs[1].v = 0.3;
  CompiledNetwork compiled = compile_network(spec);

  Graph direct_graph = Graph::build({"x", "y"}, {{"g1", "x", "y"}, {"g2", "x", "y"}});
  GraphHamiltonian direct = quadratic_family(direct_graph, {0.7, -0.2}, {0.0, 0.3});
  HomologyBasis basis = homology_basis(direct_graph);

  for (double c : {0.0, 1.0, -2.5, 4.0}) {
    double from_network = critical_value(
        compiled.graph, modify(compiled.hamiltonian,
                               representative_cochain(compiled.graph, {c}, basis)));
    double from_graph = critical_value(
        direct_graph, modify(direct, representative_cochain(direct_graph, {c}, basis)));
    CHECK(from_network == Catch::Approx(from_graph).margin(1e-8));
  }
}
