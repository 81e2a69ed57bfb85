#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "graphkam/circuits.hpp"
#include "graphkam/graph.hpp"
#include "graphkam/homology.hpp"
#include "test_util.hpp"

using namespace graphkam;
using testutil::random_graph;
using testutil::triangle;
using testutil::triangle_chord;
using testutil::two_parallel;

namespace {

bool same_rotation_class(const Path& a, const Path& b) {
  return canonical_rotation(a).edges == canonical_rotation(b).edges;
}

Path by_names(const Graph& g, const std::vector<std::string>& names) {
  Path p;
  for (const auto& n : names) p.edges.push_back(g.edge_id(n));
  return p;
}

}  // namespace

TEST_CASE("build_graph basics and counting") {
  Graph g = two_parallel();
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 4);
  CHECK(g.betti() == 1);

  Graph t = triangle();
  CHECK(t.betti() == 1);
  CHECK(triangle_chord().betti() == 2);

  // involution and terminal derivation
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    CHECK(Graph::reverse(Graph::reverse(e)) == e);
    CHECK(Graph::reverse(e) != e);
    CHECK(g.origin(Graph::reverse(e)) == g.terminal(e));
    CHECK(g.origin(e) != g.terminal(e));
  }
}

TEST_CASE("build_graph rejects bad specs") {
  CHECK_THROWS_MATCHES(Graph::build({"x"}, {{"e", "x", "x"}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::loop_edge; }));
  CHECK_THROWS_MATCHES(Graph::build({"x", "y", "z", "w"}, {{"e", "x", "y"}, {"f", "z", "w"}}),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::disconnected;
                       }));
  CHECK_THROWS_MATCHES(Graph::build({"x", "y"}, {{"e", "x", "y"}, {"e", "y", "x"}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::duplicate_name; }));
  CHECK_THROWS_MATCHES(Graph::build({"x", "y"}, {{"e", "x", "q"}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::unknown_vertex; }));
}

TEST_CASE("boundary operator") {
  Graph g = two_parallel();
  EdgeId e1 = g.edge_id("e1"), e2 = g.edge_id("e2");
  VertexId x = g.vertex_id("x"), y = g.vertex_id("y");

  Chain1 unit;
  unit.add(e1, 1.0);
  Chain0 b = boundary(g, unit);
  CHECK(b.coeff(y) == 1.0);
  CHECK(b.coeff(x) == -1.0);

  // 2 e1 - 3 e2, both x -> y
  Chain1 mix;
  mix.add(e1, 2.0);
  mix.add(e2, -3.0);
  Chain0 bm = boundary(g, mix);
  CHECK(bm.coeff(y) == -1.0);
  CHECK(bm.coeff(x) == 1.0);

  // cycles have vanishing boundary
  Path zeta = by_names(g, {"e1", "-e2"});
  CHECK(boundary(g, chain_of_path(zeta)).max_abs() == 0.0);
}

TEST_CASE("coboundary and pairing adjointness") {
  Graph g = two_parallel();
  Cochain0 f(2);
  f[g.vertex_id("x")] = 0.0;
  f[g.vertex_id("y")] = 5.0;
  Cochain1 df = coboundary(g, f);
  CHECK(df(g.edge_id("e1")) == 5.0);
  CHECK(df(g.edge_id("-e1")) == -5.0);

  Cochain0 constant(2, 3.25);
  CHECK(coboundary(g, constant).max_abs() == 0.0);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Graph rg = random_graph(rng);
    Cochain0 w = testutil::random_potential(rng, rg);
    Chain1 chain;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int pair = 0; pair < rg.pair_count(); ++pair)
      chain.add(Graph::forward_edge(pair), u(rng));
    double lhs = pairing(coboundary(rg, w), chain);
    double rhs = pairing(w, boundary(rg, chain));
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));

    // <dg, zeta> vanishes on every fundamental cycle
    for (const Path& zeta : homology_basis(rg).cycles)
      CHECK(std::abs(intrinsic_sum(coboundary(rg, w), zeta)) < 1e-12);
  }
}

TEST_CASE("pairing is the bilinear sum") {
  Graph g = two_parallel();
  Cochain1 eta(g.pair_count());
  eta.set_pair(g.pair_id("e1"), 4.0);
  Path zeta = by_names(g, {"e1", "-e2"});
  CHECK(pairing(eta, chain_of_path(zeta)) == 4.0);
  Cochain1 zero(g.pair_count());
  CHECK(pairing(zero, chain_of_path(zeta)) == 0.0);
}

TEST_CASE("homology basis on small graphs") {
  Graph g = two_parallel();
  HomologyBasis basis = homology_basis(g);
  REQUIRE(basis.betti() == 1);
  // deterministic convention: e2 spans the tree, e1 the co-tree
  CHECK(basis.cotree_pairs[0] == g.pair_id("e1"));
  CHECK(same_rotation_class(basis.cycles[0], by_names(g, {"e1", "-e2"})));

  Graph line = Graph::build({"x", "y", "z"}, {{"e1", "x", "y"}, {"e2", "y", "z"}});
  CHECK(homology_basis(line).betti() == 0);

  CHECK(homology_basis(triangle_chord()).betti() == 2);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Graph rg = random_graph(rng);
    HomologyBasis rb = homology_basis(rg);
    CHECK(rb.betti() == rg.betti());
    for (const Path& zeta : rb.cycles) {
      CHECK(is_cycle(rg, zeta));
      CHECK(boundary(rg, chain_of_path(zeta)).max_abs() == 0.0);
    }
  }
}

TEST_CASE("homology and cohomology classes") {
  Graph g = two_parallel();
  HomologyBasis basis = homology_basis(g);

  // equilibrium circuit is null-homologous
  Path eq = by_names(g, {"e1", "-e1"});
  CHECK(homology_class(g, eq, basis) == std::vector<double>{0.0});

  // the basis cycle has unit coordinates
  CHECK(homology_class(g, basis.cycles[0], basis) == std::vector<double>{1.0});

  // coordinates are rotation invariant
  Path zeta = by_names(g, {"e1", "-e2"});
  Path rotated = by_names(g, {"-e2", "e1"});
  CHECK(homology_class(g, zeta, basis) == homology_class(g, rotated, basis));

  CHECK_THROWS_MATCHES(homology_class(g, by_names(g, {"e1"}), basis), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::not_a_cycle; }));

  // coboundaries have trivial class
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Graph rg = random_graph(rng);
    HomologyBasis rb = homology_basis(rg);
    Cochain1 dg = coboundary(rg, testutil::random_potential(rng, rg));
    for (double coord : cohomology_class(dg, rb)) CHECK(std::abs(coord) < 1e-12);
  }
}

TEST_CASE("representative cochain round trip") {
  Graph g = two_parallel();
  HomologyBasis basis = homology_basis(g);
  Cochain1 omega = representative_cochain(g, {4.0}, basis);
  CHECK(omega(g.edge_id("e1")) == 4.0);
  CHECK(omega(g.edge_id("e2")) == 0.0);
  CHECK(cohomology_class(omega, basis) == std::vector<double>{4.0});

  CHECK(representative_cochain(g, {0.0}, basis).max_abs() == 0.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Graph rg = random_graph(rng);
    HomologyBasis rb = homology_basis(rg);
    auto coords = testutil::random_coords(rng, rb.betti());
    auto back = cohomology_class(representative_cochain(rg, coords, rb), rb);
    for (size_t i = 0; i < coords.size(); ++i) CHECK(back[i] == coords[i]);
  }
}

TEST_CASE("circuit enumeration") {
  Graph t = triangle();
  auto circuits = enumerate_circuits(t);
  REQUIRE(circuits.size() == 2);
  CHECK(same_rotation_class(circuits[0], by_names(t, {"f1", "f2", "f3"})));
  CHECK(same_rotation_class(circuits[1], by_names(t, {"-f3", "-f2", "-f1"})));

  auto with_eq = enumerate_circuits(t, CircuitEnumOptions{true, 1000});
  CHECK(with_eq.size() == 5);  // two directed triangles + one swing per pair

  Graph g = two_parallel();
  auto pg = enumerate_circuits(g);
  REQUIRE(pg.size() == 2);
  CHECK(same_rotation_class(pg[0], by_names(g, {"e1", "-e2"})));
  CHECK(same_rotation_class(pg[1], by_names(g, {"e2", "-e1"})));

  CHECK(enumerate_circuits(g, {}, CircuitEnumOptions{}).empty());

  for (const Path& c : enumerate_circuits(triangle_chord()))
    CHECK(is_circuit(triangle_chord(), c));

  CHECK_THROWS_MATCHES(enumerate_circuits(triangle_chord(), CircuitEnumOptions{false, 2}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::circuit_cap_exceeded;
                       }));
}

TEST_CASE("betti number matches the edge count formula on random graphs") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    Graph rg = random_graph(rng);
    CHECK(rg.betti() == rg.edge_count() / 2 - rg.vertex_count() + 1);
    CHECK(homology_basis(rg).betti() == rg.betti());
  }
}
