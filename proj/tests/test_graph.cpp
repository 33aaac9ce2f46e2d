#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "risnet/graph.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace risnet;

namespace {

NetworkGraph path3(double w01 = 2.0, double w12 = 3.0) {
  NetworkGraph g(3);
  g.add_edge(0, 1, w01, EdgeKind::d2d);
  g.add_edge(1, 2, w12, EdgeKind::d2d);
  return g;
}

NetworkGraph star(int leaves) {
  NetworkGraph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i, 1.0, EdgeKind::d2d);
  return g;
}

NetworkGraph complete(int n, double w = 1.0) {
  NetworkGraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.add_edge(a, b, w, EdgeKind::d2d);
  return g;
}

// Two disjoint unit triangles on vertices {0,1,2} and {3,4,5}.
NetworkGraph two_triangles() {
  NetworkGraph g(6);
  for (int base : {0, 3}) {
    g.add_edge(base, base + 1, 1.0, EdgeKind::d2d);
    g.add_edge(base, base + 2, 1.0, EdgeKind::d2d);
    g.add_edge(base + 1, base + 2, 1.0, EdgeKind::d2d);
  }
  return g;
}

std::vector<std::array<double, 3>> weighted_edges(const NetworkGraph& g) {
  std::vector<std::array<double, 3>> out;
  for (const Edge& e : g.edges())
    out.push_back({static_cast<double>(e.u), static_cast<double>(e.v), e.weight});
  return out;
}

}  // namespace

TEST_CASE("graph construction validates input") {
  NetworkGraph g(4);
  CHECK_THROWS_AS(g.add_edge(1, 1, 1.0, EdgeKind::d2d), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 4, 1.0, EdgeKind::d2d), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 1, -1.0, EdgeKind::d2d), std::invalid_argument);
  CHECK_THROWS_AS(NetworkGraph(0), std::invalid_argument);

  g.add_edge(0, 1, 2.0, EdgeKind::d2d);
  CHECK_THROWS_AS(g.add_edge(1, 0, 1.0, EdgeKind::d2d), std::invalid_argument);
  g.add_edge(0, 1, 3.0, EdgeKind::ris_aided);  // distinct kind is allowed
  CHECK(g.total_weight(0, 1) == Catch::Approx(5.0));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(2, 3));
}

TEST_CASE("laplacian of the weighted 3-path") {
  const Laplacian lap = build_laplacian(path3());
  Eigen::MatrixXd expected(3, 3);
  expected << 2, -2, 0, -2, 5, -3, 0, -3, 3;
  CHECK((lap.matrix - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("laplacian accumulates parallel kinds and isolates vertices") {
  NetworkGraph g(3);
  g.add_edge(0, 1, 2.0, EdgeKind::d2d);
  g.add_edge(0, 1, 3.0, EdgeKind::ris_aided);
  const Laplacian lap = build_laplacian(g);
  CHECK(lap.matrix(0, 1) == Catch::Approx(-5.0));
  CHECK(lap.matrix(2, 2) == 0.0);  // isolated vertex row is all zero
  CHECK(lap.matrix.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fiedler pair on hand-solvable graphs") {
  SECTION("unweighted path of 3: spectrum {0, 1, 3}") {
    const FiedlerResult f = algebraic_connectivity(build_laplacian(path3(1.0, 1.0)));
    CHECK(f.lambda2 == Catch::Approx(1.0).margin(1e-12));
    CHECK(f.simple);
    // Fiedler vector (1, 0, -1)/sqrt(2), sign-fixed to positive first entry.
    CHECK(f.vector(0) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
    CHECK(f.vector(1) == Catch::Approx(0.0).margin(1e-9));
    CHECK(f.vector(2) == Catch::Approx(-1.0 / std::sqrt(2.0)).margin(1e-9));
  }
  SECTION("complete graph K4: lambda2 = 4, repeated") {
    const FiedlerResult f = algebraic_connectivity(build_laplacian(complete(4)));
    CHECK(f.lambda2 == Catch::Approx(4.0).margin(1e-9));
    CHECK_FALSE(f.simple);
  }
  SECTION("two components: lambda2 = 0 with indicator-like vector") {
    const FiedlerResult f = algebraic_connectivity(build_laplacian(two_triangles()));
    CHECK(f.lambda2 == Catch::Approx(0.0).margin(1e-12));
    // Nullspace complement vector: constant on each triangle, opposite signs.
    CHECK(f.vector(0) == Catch::Approx(f.vector(1)).margin(1e-9));
    CHECK(f.vector(0) == Catch::Approx(f.vector(2)).margin(1e-9));
    CHECK(f.vector(3) == Catch::Approx(f.vector(4)).margin(1e-9));
    CHECK(f.vector(0) == Catch::Approx(-f.vector(3)).margin(1e-9));
  }
  SECTION("two vertices") {
    NetworkGraph g(2);
    g.add_edge(0, 1, 2.5, EdgeKind::d2d);
    const FiedlerResult f = algebraic_connectivity(build_laplacian(g));
    CHECK(f.lambda2 == Catch::Approx(5.0));
    CHECK(f.simple);
  }
}

TEST_CASE("fiedler vector is unit and orthogonal to ones") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const NetworkGraph g = testutil::random_graph(rng);
    const FiedlerResult f = algebraic_connectivity(build_laplacian(g));
    CHECK(std::abs(f.vector.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.vector.sum()) < 1e-9);
    // Rayleigh quotient of the returned vector matches the eigenvalue.
    const double rq = f.vector.dot(build_laplacian(g).matrix * f.vector);
    CHECK(rq == Catch::Approx(f.lambda2).margin(1e-7 * std::max(1.0, f.lambda2)));
  }
}

TEST_CASE("lambda2 matches the jacobi oracle and connectivity is exact") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkGraph g = testutil::random_graph(rng);
    const double lam = algebraic_connectivity(build_laplacian(g)).lambda2;
    const double ref = oracle::lambda2_bruteforce(g.vertex_count(), weighted_edges(g));
    CHECK(std::abs(lam - std::max(0.0, ref)) < 1e-9 * std::max(1.0, std::abs(ref)));
    const bool conn = oracle::connected(g.vertex_count(), testutil::edge_pairs(g));
    if (conn)
      CHECK(lam > 1e-12);
    else
      CHECK(lam <= 1e-12);
  }
}

TEST_CASE("laplacian validation rejects malformed matrices") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0, 0, 1;  // row sums nonzero
  CHECK_THROWS_AS(algebraic_connectivity(Laplacian{bad}), std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, -1, -2, 2;
  CHECK_THROWS_AS(algebraic_connectivity(Laplacian{asym}), std::invalid_argument);
  CHECK_THROWS_AS(algebraic_connectivity(Laplacian{Eigen::MatrixXd::Zero(1, 1)}),
                  std::invalid_argument);
}

TEST_CASE("node reliability on hand-solvable graphs") {
  SECTION("star: removing the hub disconnects, removing a leaf keeps a star") {
    const ReliabilityMap rel = node_reliability(star(3));
    CHECK(rel.values[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(rel.values[1] == Catch::Approx(1.0).margin(1e-9));  // K_{1,2} spectrum {0,1,3}
  }
  SECTION("complete graph: every deletion leaves K3") {
    const ReliabilityMap rel = node_reliability(complete(4));
    for (double v : rel.values) CHECK(v == Catch::Approx(3.0).margin(1e-9));
  }
  SECTION("minimum size") {
    CHECK_THROWS_AS(node_reliability(NetworkGraph(2)), std::invalid_argument);
  }
}

TEST_CASE("node reliability matches the oracle on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const NetworkGraph g = testutil::random_graph(rng, 4, 9);
    const ReliabilityMap rel = node_reliability(g);
    for (int v = 0; v < g.vertex_count(); ++v) {
      const NetworkGraph sub = g.without_vertex(v);
      const double ref = oracle::lambda2_bruteforce(sub.vertex_count(), weighted_edges(sub));
      CHECK(std::abs(rel.values[static_cast<std::size_t>(v)] - std::max(0.0, ref)) < 1e-9);
    }
  }
}

TEST_CASE("weight gradient equals squared fiedler difference") {
  SECTION("path of 3, edge (0,1): (v0 - v1)^2 = 0.5") {
    const auto grad = lambda2_weight_gradient(path3(1.0, 1.0), 0, 1);
    REQUIRE(grad.has_value());
    CHECK(*grad == Catch::Approx(0.5).margin(1e-9));
  }
  SECTION("repeated lambda2 reports nullopt") {
    CHECK_FALSE(lambda2_weight_gradient(complete(4), 0, 1).has_value());
  }
  SECTION("argument validation") {
    CHECK_THROWS_AS(lambda2_weight_gradient(path3(), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(lambda2_weight_gradient(path3(), 0, 3), std::invalid_argument);
  }
}

TEST_CASE("weight gradient agrees with finite differences") {
  // Asymmetric triangle: lambda2 = 3 with Fiedler vector (1,1,-2)/sqrt(6),
  // so d(lambda2)/dw02 = (v0 - v2)^2 = 1.5.
  NetworkGraph g(3);
  g.add_edge(0, 1, 2.0, EdgeKind::d2d);
  g.add_edge(0, 2, 1.0, EdgeKind::d2d);
  g.add_edge(1, 2, 1.0, EdgeKind::d2d);
  const auto grad = lambda2_weight_gradient(g, 0, 2);
  REQUIRE(grad.has_value());
  CHECK(*grad == Catch::Approx(1.5).epsilon(1e-9));

  const double h = 1e-6;
  auto lam_at = [&](double w02) {
    NetworkGraph p(3);
    p.add_edge(0, 1, 2.0, EdgeKind::d2d);
    p.add_edge(0, 2, w02, EdgeKind::d2d);
    p.add_edge(1, 2, 1.0, EdgeKind::d2d);
    return algebraic_connectivity(build_laplacian(p)).lambda2;
  };
  const double fd = (lam_at(1.0 + h) - lam_at(1.0 - h)) / (2.0 * h);
  CHECK(*grad == Catch::Approx(fd).epsilon(1e-3));

  // Random graphs with simple lambda2: formula vs central differences.
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 100) {
    const NetworkGraph rg = testutil::random_graph(rng, 4, 10, 0.5);
    const FiedlerResult f = algebraic_connectivity(build_laplacian(rg));
    if (!f.simple || rg.edges().empty()) continue;
    const Edge& e = rg.edges().front();
    const auto formula = lambda2_weight_gradient(rg, e.u, e.v);
    if (!formula) continue;

    auto lam_with = [&](double delta) {
      NetworkGraph copy(rg.vertex_count());
      bool first = true;
      for (const Edge& edge : rg.edges()) {
        double w = edge.weight;
        if (first && edge.u == e.u && edge.v == e.v) {
          w += delta;
          first = false;
        }
        copy.add_edge(edge.u, edge.v, w, edge.kind);
      }
      return algebraic_connectivity(build_laplacian(copy)).lambda2;
    };
    const double step = 1e-6;
    const double fd2 = (lam_with(step) - lam_with(-step)) / (2.0 * step);
    CHECK(*formula == Catch::Approx(fd2).epsilon(1e-3).margin(1e-6));
    ++checked;
  }
}

TEST_CASE("vertex deletion reindexes correctly") {
  const NetworkGraph g = path3();
  const NetworkGraph sub = g.without_vertex(0);
  REQUIRE(sub.vertex_count() == 2);
  REQUIRE(sub.edges().size() == 1);
  CHECK(sub.edges()[0].u == 0);
  CHECK(sub.edges()[0].v == 1);
  CHECK(sub.edges()[0].weight == Catch::Approx(3.0));
}
