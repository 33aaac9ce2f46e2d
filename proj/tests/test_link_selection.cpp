#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "risnet/link_selection.hpp"
#include "risnet/solver.hpp"
#include "support/testutil.hpp"

using namespace risnet;

namespace {

// Two well-separated UE triangles plus one RIS that sees all of them.
// Within-cluster fading is unity (every in-cluster pair clears the D2D
// threshold), cross-cluster fading is negligible, so the D2D graph is
// exactly two triangles and every reliability is zero.
Scenario two_cluster_scenario(int riss = 1) {
  Scenario s;
  s.ue_positions = {{0.0, 30.0}, {2.0, 30.0}, {1.0, 31.5},
                    {40.0, 30.0}, {42.0, 30.0}, {41.0, 31.5}};
  for (int m = 0; m < riss; ++m) {
    s.ris_positions.push_back({20.0, -1.0 - 2.0 * m});
    s.ris_orientations.push_back(0.0);
  }
  const int u = static_cast<int>(s.ue_positions.size());
  s.d2d_fading.assign(u, std::vector<std::complex<double>>(u, {0.0, 0.0}));
  for (int a = 0; a < u; ++a) {
    for (int b = 0; b < u; ++b) {
      if (a == b) continue;
      const bool same_cluster = (a < 3) == (b < 3);
      s.d2d_fading[a][b] = same_cluster ? std::complex<double>(1.0, 0.0)
                                        : std::complex<double>(1e-6, 0.0);
    }
  }
  s.validate();
  return s;
}

// Four UEs on a square with a manually specified cycle graph. The RIS sits
// far below the square, so candidate links see almost pure (weak) direct
// fading and fail the literal QoS floor.
struct CycleFixture {
  Scenario scenario;
  NetworkGraph base;

  explicit CycleFixture(double edge_weight, Vec2 ris_pos) : base(4) {
    Scenario s;
    s.ue_positions = {{0.0, 0.0}, {4.0, 0.0}, {4.0, 4.0}, {0.0, 4.0}};
    s.ris_positions = {ris_pos};
    s.ris_orientations = {0.0};
    s.d2d_fading.assign(4, std::vector<std::complex<double>>(4, {0.0, 0.0}));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != b) s.d2d_fading[a][b] = {1e-3, 0.0};
    s.validate();
    scenario = s;
    base.add_edge(0, 1, edge_weight, EdgeKind::d2d);
    base.add_edge(1, 2, edge_weight, EdgeKind::d2d);
    base.add_edge(2, 3, edge_weight, EdgeKind::d2d);
    base.add_edge(0, 3, edge_weight, EdgeKind::d2d);
  }
};

GaConfig fast_ga(std::uint64_t seed = 1) {
  GaConfig c;
  c.population_size = 8;
  c.generations = 12;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("assignment structure checks") {
  Assignment a(2, 5);
  CHECK(a.empty());
  CHECK(a.satisfies_structure(2));

  SECTION("valid two-ris assignment") {
    a.x[0][0] = 1;
    a.z[0][1] = 1;
    a.z[0][2] = 1;
    a.x[1][3] = 1;
    a.z[1][4] = 1;
    CHECK(a.satisfies_structure(2));
    CHECK(a.link_count() == 3);
    CHECK(a.tx_ris_pairs().size() == 2);
    const auto links = a.links();
    REQUIRE(links.size() == 3);
    CHECK(links[0].tx == 0);
    CHECK(links[0].ris == 0);
    CHECK(links[0].rx == 1);
    CHECK(!a.satisfies_structure(1));  // RIS 0 serves two receivers
  }

  SECTION("two transmitters on one ris") {
    a.x[0][0] = 1;
    a.x[0][1] = 1;
    a.z[0][2] = 1;
    CHECK(!a.satisfies_structure(2));
  }

  SECTION("transmitter without receivers") {
    a.x[0][0] = 1;
    CHECK(!a.satisfies_structure(2));
  }

  SECTION("receiver without transmitter") {
    a.z[0][1] = 1;
    CHECK(!a.satisfies_structure(2));
  }

  SECTION("ue both transmitting and receiving on one ris") {
    a.x[0][0] = 1;
    a.z[0][0] = 1;
    CHECK(!a.satisfies_structure(2));
  }

  SECTION("ue received by two riss") {
    a.x[0][0] = 1;
    a.z[0][2] = 1;
    a.x[1][1] = 1;
    a.z[1][2] = 1;
    CHECK(!a.satisfies_structure(2));
  }

  SECTION("node transmitting on one ris and receiving on another") {
    a.x[0][0] = 1;
    a.z[0][1] = 1;
    a.x[1][2] = 1;
    a.z[1][0] = 1;
    CHECK(!a.satisfies_structure(2));
  }

  SECTION("um validation") {
    CHECK_THROWS_AS(a.satisfies_structure(0), std::invalid_argument);
  }
}

TEST_CASE("candidate scoring ranks cross-component pairs first") {
  // Two disjoint paths: the lambda2 = 0 eigenvector is the balanced
  // component indicator, so cross pairs score 2/3 and intra pairs 0.
  NetworkGraph g(6);
  g.add_edge(0, 1, 1.0, EdgeKind::d2d);
  g.add_edge(1, 2, 1.0, EdgeKind::d2d);
  g.add_edge(3, 4, 1.0, EdgeKind::d2d);
  g.add_edge(4, 5, 1.0, EdgeKind::d2d);
  ReliabilityMap ones;
  ones.values.assign(6, 1.0);

  std::vector<std::pair<int, int>> eligible;
  for (int tx = 0; tx < 6; ++tx)
    for (int rx = 0; rx < 6; ++rx)
      if (tx != rx && !g.has_edge(tx, rx)) eligible.emplace_back(tx, rx);

  const auto ranked = score_candidates(g, ones, eligible);
  REQUIRE(ranked.size() == eligible.size());
  for (std::size_t i = 1; i < ranked.size(); ++i)
    CHECK(ranked[i - 1].score >= ranked[i].score);

  for (const CandidateScore& c : ranked) {
    const bool cross = (c.tx < 3) != (c.rx < 3);
    if (cross) {
      CHECK(c.score == Catch::Approx(2.0 / 3.0).epsilon(1e-9));
    } else {
      CHECK(c.score == Catch::Approx(0.0).margin(1e-12));
    }
  }

  // Some cross pair leads; intra pairs trail with (numerically) zero scores.
  CHECK((ranked[0].tx < 3) != (ranked[0].rx < 3));

  SECTION("exact ties break lexicographically") {
    ReliabilityMap zeros;
    zeros.values.assign(6, 0.0);  // every score is exactly 0.0
    const auto tied = score_candidates(g, zeros, eligible);
    for (std::size_t i = 1; i < tied.size(); ++i) {
      const bool ordered = tied[i - 1].tx < tied[i].tx ||
                           (tied[i - 1].tx == tied[i].tx && tied[i - 1].rx < tied[i].rx);
      CHECK(ordered);
    }
  }

  SECTION("zero receiver reliability zeroes the score") {
    ReliabilityMap mixed;
    mixed.values.assign(6, 1.0);
    mixed.values[3] = 0.0;
    const auto r2 = score_candidates(g, mixed, {{0, 3}, {0, 4}});
    REQUIRE(r2.size() == 2);
    CHECK(r2[0].tx == 0);
    CHECK(r2[0].rx == 4);
    CHECK(r2[1].score == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("validation") {
    CHECK_THROWS_AS(score_candidates(g, ones, {{2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(score_candidates(g, ones, {{0, 6}}), std::invalid_argument);
    CHECK_THROWS_AS(score_candidates(g, ones, {{0, 1}}), std::invalid_argument);
    ReliabilityMap bad;
    bad.values.assign(5, 1.0);
    CHECK_THROWS_AS(score_candidates(g, bad, {{0, 3}}), std::invalid_argument);
  }
}

TEST_CASE("qos threshold scaling") {
  RadioConstants c;  // ris threshold 30 dB -> linear 1000
  CHECK(qos_threshold(2.0, 4.0, c, false) == Catch::Approx(2000.0));
  CHECK(qos_threshold(2.0, 4.0, c, true) == Catch::Approx(500.0));
  CHECK(qos_threshold(0.0, 4.0, c, false) == 0.0);
  CHECK(qos_threshold(1.0, 0.0, c, true) == 0.0);
}

TEST_CASE("qos check compares approximated sinr to the scaled floor") {
  const CycleFixture fx(1.0, {2.0, -3.0});
  const Scenario& s = fx.scenario;
  const PhaseProfile profile =
      aligned_profile(s.geometry, ris_angle(s, 0, s.ue_positions[0]),
                      ris_angle(s, 0, s.ue_positions[2]));
  const std::vector<PhaseProfile> profiles{profile};
  const std::vector<TxRisPair> active{{0, 0}};
  const RisLink link{0, 0, 2};

  const double sinr_lin = from_db(approx_sinr(s, profiles, active, 0, 0, 2));
  const double gamma = from_db(s.constants.ris_sinr_threshold_db);

  ReliabilityMap rel;
  rel.values.assign(4, 0.0);
  SelectionOptions opts;

  SECTION("zero reliability always passes") {
    CHECK(qos_check(s, profiles, active, link, rel, 0.0, opts));
  }

  SECTION("floor just below the sinr passes, just above fails") {
    rel.values[2] = sinr_lin / gamma * (1.0 - 1e-9);
    CHECK(qos_check(s, profiles, active, link, rel, rel.values[2], opts));
    rel.values[2] = sinr_lin / gamma * (1.0 + 1e-9);
    CHECK(!qos_check(s, profiles, active, link, rel, rel.values[2], opts));
  }

  SECTION("normalization rescales the floor") {
    rel.values[2] = 10.0;
    // Literal: floor = 10 * 1000 far above any achievable sinr here.
    CHECK(!qos_check(s, profiles, active, link, rel, 10.0, opts));
    // Normalized with a dominating max: floor shrinks by 1e6.
    SelectionOptions norm = opts;
    norm.normalize_reliability = true;
    const double rel_max = 10.0 * gamma / sinr_lin * (1.0 + 1e-9) * 1e3;
    CHECK(qos_check(s, profiles, active, link, rel, rel_max, norm));
  }

  SECTION("receiver out of range throws") {
    CHECK_THROWS_AS(qos_check(s, profiles, active, {0, 0, 9}, rel, 0.0, opts),
                    std::invalid_argument);
  }
}

TEST_CASE("rebuild attaches one weighted edge per assigned link") {
  const Scenario s = two_cluster_scenario();
  const NetworkGraph base = build_d2d_graph(s);
  REQUIRE(base.edges().size() == 6);

  Assignment asg(1, 6);
  asg.x[0][0] = 1;
  asg.z[0][3] = 1;
  const PhaseProfile profile =
      aligned_profile(s.geometry, ris_angle(s, 0, s.ue_positions[0]),
                      ris_angle(s, 0, s.ue_positions[3]));
  std::vector<std::optional<PhaseProfile>> profiles{profile};

  SECTION("approximated weights by default") {
    const NetworkGraph g = rebuild_ris_graph(s, base, asg, profiles);
    REQUIRE(g.edges().size() == 7);
    const Edge* e = g.find_edge(0, 3, EdgeKind::ris_aided);
    REQUIRE(e != nullptr);
    const std::vector<PhaseProfile> dense{profile};
    const std::vector<TxRisPair> active{{0, 0}};
    CHECK(e->weight ==
          Catch::Approx(from_db(approx_sinr(s, dense, active, 0, 0, 3))).epsilon(1e-12));
  }

  SECTION("exact weights on request") {
    SelectionOptions opts;
    opts.exact_edge_weights = true;
    const NetworkGraph g = rebuild_ris_graph(s, base, asg, profiles, opts);
    const Edge* e = g.find_edge(0, 3, EdgeKind::ris_aided);
    REQUIRE(e != nullptr);
    const std::vector<PhaseProfile> dense{profile};
    const std::vector<TxRisPair> active{{0, 0}};
    CHECK(e->weight ==
          Catch::Approx(from_db(exact_sinr(s, dense, active, 0, 0, 3))).epsilon(1e-12));
  }

  SECTION("missing profile for an assigned ris throws") {
    std::vector<std::optional<PhaseProfile>> none{std::nullopt};
    CHECK_THROWS_AS(rebuild_ris_graph(s, base, asg, none), std::invalid_argument);
  }

  SECTION("empty assignment returns the base graph") {
    const Assignment idle(1, 6);
    const NetworkGraph g = rebuild_ris_graph(s, base, idle, profiles);
    CHECK(g.edges().size() == base.edges().size());
  }

  SECTION("size mismatch throws") {
    const NetworkGraph wrong(4);
    CHECK_THROWS_AS(rebuild_ris_graph(s, wrong, asg, profiles), std::invalid_argument);
  }
}

TEST_CASE("selection bridges two components") {
  const Scenario s = two_cluster_scenario();
  const NetworkGraph base = build_d2d_graph(s);
  REQUIRE(algebraic_connectivity(base).lambda2 == Catch::Approx(0.0).margin(1e-12));

  const SelectionResult res = perturbation_select(s, base, 1, fast_ga());

  REQUIRE(res.assignment.link_count() == 1);
  const RisLink link = res.assignment.links()[0];
  // The chosen pair must join the two triangles. Cross pairs all tie, so
  // the lexicographically smallest wins.
  CHECK((link.tx < 3) != (link.rx < 3));
  CHECK(link.tx == 0);
  CHECK(link.rx == 3);
  CHECK(res.lambda2_initial == Catch::Approx(0.0).margin(1e-12));
  CHECK(res.lambda2_final > 1e-6);
  CHECK(res.assignment.satisfies_structure(1));
  CHECK(res.unassigned_riss.empty());
  REQUIRE(res.profiles.size() == 1);
  CHECK(res.profiles[0].has_value());
  REQUIRE(res.lambda2_trace.size() == 1);
  CHECK(res.lambda2_trace[0] > 1e-6);

  // Final graph equals base plus exactly the committed links.
  CHECK(res.graph.edges().size() == base.edges().size() + 1);
  CHECK(res.graph.find_edge(link.tx, link.rx, EdgeKind::ris_aided) != nullptr);
}

TEST_CASE("second ris avoids nodes used by the first") {
  const Scenario s = two_cluster_scenario(2);
  const NetworkGraph base = build_d2d_graph(s);
  const SelectionResult res = perturbation_select(s, base, 1, fast_ga());

  REQUIRE(res.assignment.link_count() == 2);
  const auto links = res.assignment.links();
  CHECK(links[0].tx == 0);
  CHECK(links[0].rx == 3);
  // Nodes 0 and 3 left the pool, so the second RIS works with fresh UEs.
  CHECK(links[1].tx != links[0].tx);
  CHECK(links[1].rx != links[0].rx);
  CHECK(links[1].tx != links[0].rx);
  CHECK(links[1].rx != links[0].tx);
  CHECK(res.assignment.satisfies_structure(1));

  REQUIRE(res.lambda2_trace.size() == 2);
  CHECK(res.lambda2_trace[1] >= res.lambda2_trace[0] - 1e-9);
}

TEST_CASE("zero riss yield an empty assignment") {
  const Scenario s = two_cluster_scenario(0);
  const NetworkGraph base = build_d2d_graph(s);
  const SelectionResult res = perturbation_select(s, base, 2, fast_ga());
  CHECK(res.assignment.empty());
  CHECK(res.lambda2_trace.empty());
  CHECK(res.lambda2_final == Catch::Approx(res.lambda2_initial).margin(1e-12));
  CHECK(res.graph.edges().size() == base.edges().size());
  CHECK(res.ga_invocations == 0);
}

TEST_CASE("qos failure leaves the ris unassigned") {
  // Connected cycle: every reliability is 1, so the literal floor is 30 dB.
  // The RIS is 3 km away and direct diagonal fading is weak, leaving the
  // only candidate link short of the floor.
  const CycleFixture fx(1.0, {0.0, -3000.0});
  const SelectionResult res =
      perturbation_select(fx.scenario, fx.base, 1, fast_ga());

  CHECK(res.assignment.empty());
  REQUIRE(res.unassigned_riss.size() == 1);
  CHECK(res.unassigned_riss[0] == 0);
  CHECK(res.lambda2_trace.empty());
  CHECK(res.graph.edges().size() == fx.base.edges().size());
  CHECK(res.lambda2_final == Catch::Approx(res.lambda2_initial).epsilon(1e-12));
  CHECK(res.ga_invocations >= 1);
}

TEST_CASE("reliability normalization can rescue heavy graphs") {
  // Weight-100 cycle: reliabilities are 100, so the literal floor sits at
  // 50 dB, out of reach. Normalized floors cap at 30 dB, and a close RIS
  // clears that.
  const CycleFixture fx(100.0, {2.0, -3.0});

  const SelectionResult literal =
      perturbation_select(fx.scenario, fx.base, 1, fast_ga());
  CHECK(literal.assignment.empty());

  SelectionOptions norm;
  norm.normalize_reliability = true;
  const SelectionResult scaled =
      perturbation_select(fx.scenario, fx.base, 1, fast_ga(), norm);
  CHECK(scaled.assignment.link_count() == 1);
  CHECK(scaled.lambda2_final > scaled.lambda2_initial);
}

TEST_CASE("selection is deterministic") {
  const Scenario s = testutil::small_scenario(42);
  const NetworkGraph base = build_d2d_graph(s);
  const SelectionResult a = perturbation_select(s, base, 2, fast_ga(7));
  const SelectionResult b = perturbation_select(s, base, 2, fast_ga(7));

  CHECK(a.assignment.x == b.assignment.x);
  CHECK(a.assignment.z == b.assignment.z);
  CHECK(a.lambda2_final == b.lambda2_final);
  CHECK(a.lambda2_trace == b.lambda2_trace);
  REQUIRE(a.profiles.size() == b.profiles.size());
  for (std::size_t m = 0; m < a.profiles.size(); ++m) {
    REQUIRE(a.profiles[m].has_value() == b.profiles[m].has_value());
    if (a.profiles[m])
      CHECK(a.profiles[m]->phases == b.profiles[m]->phases);
  }
}

TEST_CASE("selection invariants hold on random scenarios") {
  for (std::uint64_t seed : {3u, 11u, 19u, 27u, 35u}) {
    const Scenario s = testutil::small_scenario(seed);
    const NetworkGraph base = build_d2d_graph(s);
    const SelectionResult res = perturbation_select(s, base, 2, fast_ga(seed));

    INFO("seed " << seed);
    CHECK(res.assignment.satisfies_structure(2));
    CHECK(res.lambda2_final >= res.lambda2_initial - 1e-9);

    double prev = res.lambda2_initial;
    for (double lam : res.lambda2_trace) {
      CHECK(lam >= prev - 1e-9);
      prev = lam;
    }

    // Assigned RISs carry profiles, unassigned ones do not.
    for (int m = 0; m < s.ris_count(); ++m) {
      const bool assigned = res.assignment.transmitter_of(m).has_value();
      CHECK(res.profiles[static_cast<std::size_t>(m)].has_value() == assigned);
    }

    // Edge count bookkeeping.
    CHECK(res.graph.edges().size() ==
          base.edges().size() + static_cast<std::size_t>(res.assignment.link_count()));
  }
}

TEST_CASE("links added by a single ris pass qos under the final assignment") {
  // With one RIS the committed interference state at addition equals the
  // final state, so the check must reproduce exactly.
  const Scenario s = two_cluster_scenario();
  const NetworkGraph base = build_d2d_graph(s);
  const SelectionResult res = perturbation_select(s, base, 2, fast_ga());
  const ReliabilityMap rel = node_reliability(base);
  for (const RisLink& link : res.assignment.links())
    CHECK(qos_check(s, res.assignment, res.profiles, link, rel));
}

TEST_CASE("selection argument validation") {
  const Scenario s = two_cluster_scenario();
  const NetworkGraph base = build_d2d_graph(s);
  CHECK_THROWS_AS(perturbation_select(s, base, 0, fast_ga()), std::invalid_argument);
  const NetworkGraph wrong(3);
  CHECK_THROWS_AS(perturbation_select(s, wrong, 1, fast_ga()), std::invalid_argument);
  GaConfig bad = fast_ga();
  bad.population_size = 3;
  CHECK_THROWS_AS(perturbation_select(s, base, 1, bad), std::invalid_argument);
}
