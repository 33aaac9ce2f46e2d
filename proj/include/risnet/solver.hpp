#pragma once

// End-to-end pipeline: random scenario generation, thresholded D2D graph,
// alternation between link selection (P1) and RIS placement (P2), and the
// comparison schemes (single-beam, RIS-free, distributed-small).

#include "risnet/graph.hpp"
#include "risnet/link_selection.hpp"
#include "risnet/placement.hpp"
#include "risnet/radio.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace risnet {

enum class Scheme { proposed, single_beam, ris_free, distributed_small };

inline std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::single_beam: return "single-beam";
    case Scheme::ris_free: return "ris-free";
    case Scheme::distributed_small: return "distributed-small";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

inline Scheme scheme_from_name(const std::string& name) {
  if (name == "proposed") return Scheme::proposed;
  if (name == "single-beam") return Scheme::single_beam;
  if (name == "ris-free") return Scheme::ris_free;
  if (name == "distributed-small") return Scheme::distributed_small;
  throw std::invalid_argument("scheme_from_name: unknown scheme '" + name + "'");
}

struct SolveConfig {
  int um = 2;                  // beams per RIS
  int outer_iterations = 3;    // P1 <-> P2 alternations
  double tolerance = 1e-3;     // relative lambda2 improvement to keep going
  GaConfig ga;
  AdamConfig adam;
  SelectionOptions selection;

  void validate() const {
    if (um < 1) throw std::invalid_argument("SolveConfig: um < 1");
    if (outer_iterations < 1) throw std::invalid_argument("SolveConfig: outer_iterations < 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("SolveConfig: tolerance <= 0");
    ga.validate();
    adam.validate();
  }
};

struct LinkReport {
  int tx = -1;
  int ris = -1;
  int rx = -1;
  double weight = 0.0;         // linear SINR used as the edge weight
  double sinr_exact_db = 0.0;
  double sinr_approx_db = 0.0;
};

struct SolveResult {
  Scheme scheme = Scheme::proposed;
  double lambda2_initial = 0.0;
  double lambda2_final = 0.0;
  Assignment assignment;
  std::vector<std::optional<PhaseProfile>> profiles;
  std::vector<Vec2> ris_positions;          // final (possibly moved) placement
  NetworkGraph graph_initial;               // D2D edges only
  NetworkGraph graph_final;                 // D2D + RIS-aided edges
  std::vector<LinkReport> links;
  double sum_rate_exact_bps = 0.0;
  double sum_rate_approx_bps = 0.0;
  int links_added = 0;
  std::vector<double> outer_lambda2;        // candidate lambda2 per alternation
  std::uint64_t scenario_seed = 0;
  std::uint64_t optimizer_seed = 0;
  int ue_count = 0;
  int ris_count = 0;
  int elements = 0;
  int um = 1;
  double wall_time_s = 0.0;  // informational; not part of canonical output
  std::vector<TrajectoryPoint> trajectory;  // placement trace of the accepted candidate; informational

  SolveResult() : graph_initial(1), graph_final(1) {}
};

// Uniform deployment in [0, area]^2 with Rayleigh-style complex fading per
// UE pair. Draw order is fixed (UE coordinates, RIS coordinates, then fading
// for u < r row-major), so a seed pins the scenario bit-for-bit.
inline Scenario generate_scenario(int ues, int riss, double area, std::uint64_t seed,
                                  int elements = 10) {
  if (ues < 3) throw std::invalid_argument("generate_scenario: need at least 3 UEs");
  if (riss < 0) throw std::invalid_argument("generate_scenario: negative RIS count");
  if (!(area > 0.0)) throw std::invalid_argument("generate_scenario: area <= 0");

  Scenario s;
  s.seed = seed;
  s.constants = RadioConstants{};
  s.geometry.elements = elements;
  s.geometry.wavelength = s.constants.wavelength();
  s.geometry.spacing = s.geometry.wavelength / 2.0;
  s.geometry.validate();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, area);
  auto too_close = [](Vec2 p, const std::vector<Vec2>& pts) {
    for (const Vec2& q : pts)
      if (distance(p, q) < 1e-9) return true;
    return false;
  };

  s.ue_positions.reserve(static_cast<std::size_t>(ues));
  while (static_cast<int>(s.ue_positions.size()) < ues) {
    const Vec2 p{coord(rng), coord(rng)};
    if (too_close(p, s.ue_positions)) continue;
    s.ue_positions.push_back(p);
  }
  s.ris_positions.reserve(static_cast<std::size_t>(riss));
  while (static_cast<int>(s.ris_positions.size()) < riss) {
    const Vec2 p{coord(rng), coord(rng)};
    if (too_close(p, s.ue_positions) || too_close(p, s.ris_positions)) continue;
    s.ris_positions.push_back(p);
  }
  s.ris_orientations.assign(static_cast<std::size_t>(riss), 0.0);

  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  s.d2d_fading.assign(static_cast<std::size_t>(ues),
                      std::vector<std::complex<double>>(static_cast<std::size_t>(ues), {0.0, 0.0}));
  for (int a = 0; a < ues; ++a) {
    for (int b = a + 1; b < ues; ++b) {
      const std::complex<double> h{gauss(rng), gauss(rng)};
      s.d2d_fading[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = h;
      s.d2d_fading[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = h;
    }
  }
  s.validate();
  return s;
}

// D2D edges for every UE pair whose SNR clears the threshold, weighted by
// the linear SNR. Independent of RIS positions.
inline NetworkGraph build_d2d_graph(const Scenario& s) {
  s.validate();
  NetworkGraph g(s.ue_count());
  for (int a = 0; a < s.ue_count(); ++a) {
    for (int b = a + 1; b < s.ue_count(); ++b) {
      const double snr_db = d2d_snr(s, a, b);
      if (snr_db >= s.constants.d2d_snr_threshold_db)
        g.add_edge(a, b, from_db(snr_db), EdgeKind::d2d);
    }
  }
  return g;
}

// Scheme transform for distributed-small: every RIS splits into two
// co-located half-size surfaces, each steering a single beam.
inline Scenario distributed_scenario(const Scenario& s) {
  if (s.geometry.elements % 2 != 0)
    throw std::invalid_argument("distributed_scenario: element count must be even");
  Scenario out = s;
  out.geometry.elements = s.geometry.elements / 2;
  out.ris_positions.clear();
  out.ris_orientations.clear();
  for (int m = 0; m < s.ris_count(); ++m) {
    out.ris_positions.push_back(s.ris_positions[static_cast<std::size_t>(m)]);
    out.ris_positions.push_back(s.ris_positions[static_cast<std::size_t>(m)]);
    out.ris_orientations.push_back(s.ris_orientations[static_cast<std::size_t>(m)]);
    out.ris_orientations.push_back(s.ris_orientations[static_cast<std::size_t>(m)]);
  }
  return out;
}

namespace detail {

inline std::vector<LinkReport> link_reports(const Scenario& s, const NetworkGraph& g,
                                            const Assignment& asg,
                                            const std::vector<std::optional<PhaseProfile>>& profiles) {
  std::vector<LinkReport> out;
  const std::vector<TxRisPair> active = asg.tx_ris_pairs();
  const std::vector<PhaseProfile> dense = dense_profiles(s, profiles);
  for (const RisLink& link : asg.links()) {
    LinkReport rep;
    rep.tx = link.tx;
    rep.ris = link.ris;
    rep.rx = link.rx;
    if (const Edge* e = g.find_edge(link.tx, link.rx, EdgeKind::ris_aided)) rep.weight = e->weight;
    rep.sinr_exact_db = exact_sinr(s, dense, active, link.tx, link.ris, link.rx);
    rep.sinr_approx_db = approx_sinr(s, dense, active, link.tx, link.ris, link.rx);
    out.push_back(rep);
  }
  return out;
}

}  // namespace detail

// P1 <-> P2 alternation: select links on the current placement, refine the
// placement under the selected links, then reselect from the D2D base at the
// new placement. The best candidate over all alternations is reported, so
// lambda2_final can never fall below lambda2_initial.
inline SolveResult solve(const Scenario& scenario, const SolveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  scenario.validate();
  cfg.validate();
  if (scenario.ue_count() < 3)
    throw std::invalid_argument("solve: need at least 3 UEs");

  SolveResult out;
  out.scheme = Scheme::proposed;
  out.scenario_seed = scenario.seed;
  out.optimizer_seed = cfg.ga.rng_seed;
  out.ue_count = scenario.ue_count();
  out.ris_count = scenario.ris_count();
  out.elements = scenario.geometry.elements;
  out.um = cfg.um;

  const NetworkGraph base = build_d2d_graph(scenario);
  out.graph_initial = base;
  out.lambda2_initial = algebraic_connectivity(base).lambda2;

  // Best candidate so far; starts as "change nothing".
  Scenario cur = scenario;
  out.lambda2_final = out.lambda2_initial;
  out.assignment = Assignment(scenario.ris_count(), scenario.ue_count());
  out.profiles.assign(static_cast<std::size_t>(scenario.ris_count()), std::nullopt);
  out.ris_positions = scenario.ris_positions;
  out.graph_final = base;

  const ReliabilityMap rel = node_reliability(base);
  double last = out.lambda2_initial;

  for (int outer = 1; outer <= cfg.outer_iterations; ++outer) {
    GaConfig ga = cfg.ga;
    ga.rng_seed = cfg.ga.rng_seed + 1000003ULL * static_cast<std::uint64_t>(outer - 1);
    const SelectionResult sel = perturbation_select(cur, base, cfg.um, ga, cfg.selection);

    double candidate = sel.lambda2_final;
    std::vector<TrajectoryPoint> traj;
    if (!sel.assignment.empty()) {
      PlacementProblem prob;
      prob.scenario = cur;
      prob.base_graph = base;
      prob.assignment = sel.assignment;
      prob.profiles = sel.profiles;
      prob.reliability = rel;
      prob.options = cfg.selection;
      PlacementResult placed = optimize_positions(prob, cfg.adam);
      candidate = placed.lambda2;
      cur.ris_positions = placed.positions;
      traj = std::move(placed.trajectory);
    }
    out.outer_lambda2.push_back(candidate);

    if (candidate > out.lambda2_final) {
      out.lambda2_final = candidate;
      out.assignment = sel.assignment;
      out.profiles = sel.profiles;
      out.ris_positions = cur.ris_positions;
      out.trajectory = std::move(traj);
      Scenario best_scn = cur;
      out.graph_final =
          rebuild_ris_graph(best_scn, base, sel.assignment, sel.profiles, cfg.selection);
    }

    const double gain = (candidate - last) / std::max(last, 1e-30);
    if (gain < cfg.tolerance) break;
    last = candidate;
  }

  Scenario final_scn = scenario;
  final_scn.ris_positions = out.ris_positions;
  out.links = detail::link_reports(final_scn, out.graph_final, out.assignment, out.profiles);
  out.links_added = static_cast<int>(out.links.size());

  std::vector<double> exact_db, approx_db;
  for (const LinkReport& l : out.links) {
    exact_db.push_back(l.sinr_exact_db);
    approx_db.push_back(l.sinr_approx_db);
  }
  out.sum_rate_exact_bps = sum_rate(exact_db, scenario.constants.bandwidth_hz);
  out.sum_rate_approx_bps = sum_rate(approx_db, scenario.constants.bandwidth_hz);

  if (!(out.lambda2_final >= out.lambda2_initial - 1e-9))
    throw std::logic_error("solve: lambda2 regressed below the initial value");
  if (!out.assignment.empty() && !out.assignment.satisfies_structure(cfg.um))
    throw std::logic_error("solve: assignment violates structural constraints");

  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline SolveResult run_baseline(const Scenario& scenario, Scheme scheme, const SolveConfig& cfg) {
  SolveResult result;
  switch (scheme) {
    case Scheme::proposed:
      result = solve(scenario, cfg);
      break;
    case Scheme::single_beam: {
      SolveConfig c = cfg;
      c.um = 1;
      result = solve(scenario, c);
      break;
    }
    case Scheme::ris_free: {
      Scenario s = scenario;
      s.ris_positions.clear();
      s.ris_orientations.clear();
      result = solve(s, cfg);
      break;
    }
    case Scheme::distributed_small: {
      SolveConfig c = cfg;
      c.um = 1;
      result = solve(distributed_scenario(scenario), c);
      break;
    }
  }
  result.scheme = scheme;
  return result;
}

}  // namespace risnet
