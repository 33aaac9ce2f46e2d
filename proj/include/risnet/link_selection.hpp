#pragma once

// Greedy RIS-aided link selection guided by first-order eigenvalue
// perturbation: candidate pairs are ranked by receiver reliability times the
// squared Fiedler-vector difference, each RIS serves one transmitter with up
// to U_m receivers, and every added edge must pass a reliability-scaled QoS
// check on the approximated SINR.

#include "risnet/beamforming.hpp"
#include "risnet/graph.hpp"
#include "risnet/radio.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace risnet {

struct RisLink {
  int tx = -1;
  int ris = -1;
  int rx = -1;
};

// Binary assignment variables: x[m][u] marks UE u transmitting toward RIS m,
// z[m][u] marks UE u receiving via RIS m.
struct Assignment {
  int ris_count = 0;
  int ue_count = 0;
  std::vector<std::vector<std::uint8_t>> x;
  std::vector<std::vector<std::uint8_t>> z;

  Assignment() = default;
  Assignment(int riss, int ues)
      : ris_count(riss), ue_count(ues),
        x(static_cast<std::size_t>(riss), std::vector<std::uint8_t>(static_cast<std::size_t>(ues), 0)),
        z(static_cast<std::size_t>(riss), std::vector<std::uint8_t>(static_cast<std::size_t>(ues), 0)) {
    if (riss < 0 || ues < 0) throw std::invalid_argument("Assignment: negative dimension");
  }

  std::optional<int> transmitter_of(int m) const {
    for (int u = 0; u < ue_count; ++u)
      if (x[static_cast<std::size_t>(m)][static_cast<std::size_t>(u)]) return u;
    return std::nullopt;
  }

  std::vector<int> receivers_of(int m) const {
    std::vector<int> out;
    for (int u = 0; u < ue_count; ++u)
      if (z[static_cast<std::size_t>(m)][static_cast<std::size_t>(u)]) out.push_back(u);
    return out;
  }

  // Active (transmitter, RIS) pairs: RISs with a transmitter and at least
  // one receiver.
  std::vector<TxRisPair> tx_ris_pairs() const {
    std::vector<TxRisPair> out;
    for (int m = 0; m < ris_count; ++m) {
      const auto tx = transmitter_of(m);
      if (tx && !receivers_of(m).empty()) out.push_back({*tx, m});
    }
    return out;
  }

  std::vector<RisLink> links() const {
    std::vector<RisLink> out;
    for (int m = 0; m < ris_count; ++m) {
      const auto tx = transmitter_of(m);
      if (!tx) continue;
      for (int r : receivers_of(m)) out.push_back({*tx, m, r});
    }
    return out;
  }

  int link_count() const { return static_cast<int>(links().size()); }

  bool empty() const { return link_count() == 0; }

  // Structural constraints: per-RIS at most one transmitter, per-RIS at most
  // um receivers, per-UE at most one serving RIS, transmitters and receivers
  // disjoint, and no RIS without both roles filled.
  bool satisfies_structure(int um) const {
    if (um < 1) throw std::invalid_argument("satisfies_structure: um < 1");
    std::vector<int> rx_serving(static_cast<std::size_t>(ue_count), 0);
    std::set<int> tx_nodes, rx_nodes;
    for (int m = 0; m < ris_count; ++m) {
      int tx_sum = 0, rx_sum = 0;
      for (int u = 0; u < ue_count; ++u) {
        const bool xs = x[static_cast<std::size_t>(m)][static_cast<std::size_t>(u)] != 0;
        const bool zs = z[static_cast<std::size_t>(m)][static_cast<std::size_t>(u)] != 0;
        if (xs && zs) return false;
        if (xs) { ++tx_sum; tx_nodes.insert(u); }
        if (zs) { ++rx_sum; rx_nodes.insert(u); ++rx_serving[static_cast<std::size_t>(u)]; }
      }
      if (tx_sum > 1 || rx_sum > um) return false;
      if ((tx_sum == 0) != (rx_sum == 0)) return false;
    }
    for (int c : rx_serving)
      if (c > 1) return false;
    for (int t : tx_nodes)
      if (rx_nodes.count(t)) return false;
    return true;
  }
};

struct CandidateScore {
  int tx = -1;
  int rx = -1;
  double score = 0.0;
};

struct SelectionOptions {
  bool normalize_reliability = false;  // scale QoS thresholds by max reliability
  int qos_retries = 5;                 // replacement attempts per receiver slot
  bool exact_edge_weights = false;     // weight edges by exact instead of approx SINR
  double min_target_separation = 1e-3; // radians between departure angles
};

// Linear SINR floor for a receiver: reliability (optionally normalized to
// [0, 1]) times the linear RIS QoS threshold.
inline double qos_threshold(double reliability, double reliability_max,
                            const RadioConstants& c, bool normalize) {
  double scale = reliability;
  if (normalize) scale = reliability_max > 0.0 ? reliability / reliability_max : 0.0;
  return scale * from_db(c.ris_sinr_threshold_db);
}

namespace detail {

// Profiles indexed by RIS with unassigned entries filled by flat zeros, so
// the interference sums can index any active pair.
inline std::vector<PhaseProfile> dense_profiles(
    const Scenario& s, const std::vector<std::optional<PhaseProfile>>& sparse) {
  std::vector<PhaseProfile> out;
  out.reserve(sparse.size());
  const std::vector<double> zeros(static_cast<std::size_t>(s.geometry.elements), 0.0);
  for (const auto& p : sparse) out.push_back(p ? *p : PhaseProfile(zeros));
  return out;
}

}  // namespace detail

// C4: approximated SINR of the proposed link must reach the receiver's
// reliability-scaled threshold. `active` must already contain the link's
// (tx, ris) pair.
inline bool qos_check(const Scenario& s, const std::vector<PhaseProfile>& profiles,
                      const std::vector<TxRisPair>& active, const RisLink& link,
                      const ReliabilityMap& rel, double rel_max,
                      const SelectionOptions& opts = {}) {
  if (link.rx < 0 || link.rx >= s.ue_count())
    throw std::invalid_argument("qos_check: receiver out of range");
  const double sinr_lin = from_db(approx_sinr(s, profiles, active, link.tx, link.ris, link.rx));
  const double floor_lin = qos_threshold(rel.values[static_cast<std::size_t>(link.rx)], rel_max,
                                         s.constants, opts.normalize_reliability);
  return sinr_lin >= floor_lin;
}

inline bool qos_check(const Scenario& s, const Assignment& asg,
                      const std::vector<std::optional<PhaseProfile>>& profiles,
                      const RisLink& link, const ReliabilityMap& rel,
                      const SelectionOptions& opts = {}) {
  const double rel_max =
      rel.values.empty() ? 0.0 : *std::max_element(rel.values.begin(), rel.values.end());
  return qos_check(s, detail::dense_profiles(s, profiles), asg.tx_ris_pairs(), link, rel,
                   rel_max, opts);
}

// Rank directed candidate pairs by reliability-weighted first-order gain of
// a unit edge: rel[rx] * (v_tx - v_rx)^2 with v the Fiedler vector of g.
// Ties break lexicographically on (tx, rx).
inline std::vector<CandidateScore> score_candidates(
    const NetworkGraph& g, const ReliabilityMap& rel,
    const std::vector<std::pair<int, int>>& eligible) {
  if (rel.values.size() != static_cast<std::size_t>(g.vertex_count()))
    throw std::invalid_argument("score_candidates: reliability size mismatch");
  const FiedlerResult f = algebraic_connectivity(g);
  std::vector<CandidateScore> out;
  out.reserve(eligible.size());
  for (const auto& [tx, rx] : eligible) {
    if (tx == rx) throw std::invalid_argument("score_candidates: self pair");
    if (tx < 0 || rx < 0 || tx >= g.vertex_count() || rx >= g.vertex_count())
      throw std::invalid_argument("score_candidates: vertex out of range");
    if (g.has_edge(tx, rx))
      throw std::invalid_argument("score_candidates: pair already connected");
    const double d = f.vector(tx) - f.vector(rx);
    out.push_back({tx, rx, rel.values[static_cast<std::size_t>(rx)] * d * d});
  }
  std::sort(out.begin(), out.end(), [](const CandidateScore& a, const CandidateScore& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.tx != b.tx) return a.tx < b.tx;
    return a.rx < b.rx;
  });
  return out;
}

// Graph of `base` plus one RIS-aided edge per assigned link, weighted by the
// linear SINR evaluated under the complete assignment (all active pairs
// interfering). This is the weight model shared with placement.
inline NetworkGraph rebuild_ris_graph(const Scenario& s, const NetworkGraph& base,
                                      const Assignment& asg,
                                      const std::vector<std::optional<PhaseProfile>>& profiles,
                                      const SelectionOptions& opts = {}) {
  if (base.vertex_count() != s.ue_count())
    throw std::invalid_argument("rebuild_ris_graph: graph/scenario size mismatch");
  NetworkGraph out = base;
  const std::vector<TxRisPair> active = asg.tx_ris_pairs();
  const std::vector<PhaseProfile> dense = detail::dense_profiles(s, profiles);
  for (const RisLink& link : asg.links()) {
    if (!profiles[static_cast<std::size_t>(link.ris)])
      throw std::invalid_argument("rebuild_ris_graph: assigned RIS lacks a profile");
    const double sinr_db = opts.exact_edge_weights
                               ? exact_sinr(s, dense, active, link.tx, link.ris, link.rx)
                               : approx_sinr(s, dense, active, link.tx, link.ris, link.rx);
    out.add_edge(link.tx, link.rx, from_db(sinr_db), EdgeKind::ris_aided);
  }
  return out;
}

struct SelectionResult {
  Assignment assignment;
  std::vector<std::optional<PhaseProfile>> profiles;  // per RIS
  NetworkGraph graph;           // base + RIS edges under the final assignment
  double lambda2_initial = 0.0;
  double lambda2_final = 0.0;
  std::vector<double> lambda2_trace;  // after each committed edge
  std::vector<int> unassigned_riss;
  int ga_invocations = 0;

  SelectionResult() : graph(1) {}
};

// One pass of perturbation-guided selection over all RISs. Reliabilities are
// computed once on the base graph; the Fiedler vector is refreshed after
// each RIS commits. GA seeds derive from ga.rng_seed plus an invocation
// counter, so a run is reproducible end to end.
inline SelectionResult perturbation_select(const Scenario& s, const NetworkGraph& base, int um,
                                           const GaConfig& ga,
                                           const SelectionOptions& opts = {}) {
  s.validate();
  ga.validate();
  if (um < 1) throw std::invalid_argument("perturbation_select: um < 1");
  if (base.vertex_count() != s.ue_count())
    throw std::invalid_argument("perturbation_select: graph/scenario size mismatch");
  if (s.ue_count() < 3)
    throw std::invalid_argument("perturbation_select: need at least 3 UEs");

  const int ue_count = s.ue_count();
  const int ris_count = s.ris_count();

  SelectionResult result;
  result.assignment = Assignment(ris_count, ue_count);
  result.profiles.assign(static_cast<std::size_t>(ris_count), std::nullopt);
  result.lambda2_initial = algebraic_connectivity(base).lambda2;

  const ReliabilityMap rel = node_reliability(base);
  const double rel_max = *std::max_element(rel.values.begin(), rel.values.end());

  NetworkGraph run = base;
  std::vector<std::pair<int, int>> pool;
  for (int tx = 0; tx < ue_count; ++tx)
    for (int rx = 0; rx < ue_count; ++rx)
      if (tx != rx && !base.has_edge(tx, rx)) pool.emplace_back(tx, rx);

  std::vector<TxRisPair> committed;

  for (int m = 0; m < ris_count; ++m) {
    const std::vector<CandidateScore> ranked = score_candidates(run, rel, pool);
    if (ranked.empty()) {
      result.unassigned_riss.push_back(m);
      continue;
    }
    const int tx = ranked[0].tx;
    const double arrival = ris_angle(s, m, s.ue_positions[tx]);

    std::vector<int> rx_ranked;
    for (const CandidateScore& c : ranked)
      if (c.tx == tx) rx_ranked.push_back(c.rx);

    struct Slot {
      int rx;
      int retries = 0;
    };
    std::vector<Slot> slots;
    std::vector<char> banned(static_cast<std::size_t>(ue_count), 0);
    auto angle_of = [&](int rx) { return ris_angle(s, m, s.ue_positions[rx]); };
    auto pick_next = [&](const std::vector<Slot>& cur, int skip) -> int {
      for (int rx : rx_ranked) {
        if (banned[static_cast<std::size_t>(rx)]) continue;
        bool usable = true;
        for (std::size_t i = 0; i < cur.size(); ++i) {
          if (static_cast<int>(i) == skip) continue;
          if (cur[i].rx == rx ||
              std::abs(angle_of(rx) - angle_of(cur[i].rx)) < opts.min_target_separation) {
            usable = false;
            break;
          }
        }
        if (usable) return rx;
      }
      return -1;
    };

    for (int slot = 0; slot < um; ++slot) {
      const int rx = pick_next(slots, -1);
      if (rx < 0) break;
      slots.push_back({rx, 0});
    }

    std::optional<PhaseProfile> designed;
    while (!slots.empty()) {
      std::vector<double> targets;
      targets.reserve(slots.size());
      for (const Slot& slot : slots) targets.push_back(angle_of(slot.rx));
      const BeamTask task(s.geometry, arrival, targets, opts.min_target_separation);
      GaConfig run_cfg = ga;
      run_cfg.rng_seed = ga.rng_seed + static_cast<std::uint64_t>(result.ga_invocations);
      ++result.ga_invocations;
      PhaseProfile profile = run_ga(task, run_cfg).best_profile;

      std::vector<TxRisPair> active = committed;
      active.push_back({tx, m});
      auto tentative = result.profiles;
      tentative[static_cast<std::size_t>(m)] = profile;
      const std::vector<PhaseProfile> dense = detail::dense_profiles(s, tentative);

      int failed = -1;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!qos_check(s, dense, active, {tx, m, slots[i].rx}, rel, rel_max, opts)) {
          failed = static_cast<int>(i);
          break;
        }
      }
      if (failed < 0) {
        designed = std::move(profile);
        break;
      }
      banned[static_cast<std::size_t>(slots[static_cast<std::size_t>(failed)].rx)] = 1;
      if (slots[static_cast<std::size_t>(failed)].retries < opts.qos_retries) {
        const int sub = pick_next(slots, failed);
        if (sub >= 0) {
          slots[static_cast<std::size_t>(failed)].rx = sub;
          ++slots[static_cast<std::size_t>(failed)].retries;
          continue;
        }
      }
      slots.erase(slots.begin() + failed);
    }

    if (!designed) {
      result.unassigned_riss.push_back(m);
      continue;
    }

    committed.push_back({tx, m});
    result.profiles[static_cast<std::size_t>(m)] = *designed;
    result.assignment.x[static_cast<std::size_t>(m)][static_cast<std::size_t>(tx)] = 1;
    const std::vector<PhaseProfile> dense = detail::dense_profiles(s, result.profiles);
    std::set<int> used = {tx};
    for (const Slot& slot : slots) {
      result.assignment.z[static_cast<std::size_t>(m)][static_cast<std::size_t>(slot.rx)] = 1;
      const double sinr_db =
          opts.exact_edge_weights ? exact_sinr(s, dense, committed, tx, m, slot.rx)
                                  : approx_sinr(s, dense, committed, tx, m, slot.rx);
      run.add_edge(tx, slot.rx, from_db(sinr_db), EdgeKind::ris_aided);
      result.lambda2_trace.push_back(algebraic_connectivity(run).lambda2);
      used.insert(slot.rx);
    }
    std::erase_if(pool, [&](const std::pair<int, int>& p) {
      return used.count(p.first) > 0 || used.count(p.second) > 0;
    });
  }

  result.graph = rebuild_ris_graph(s, base, result.assignment, result.profiles, opts);
  result.lambda2_final = algebraic_connectivity(result.graph).lambda2;
  return result;
}

}  // namespace risnet
