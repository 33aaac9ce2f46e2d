#pragma once

// Shared fixture builders for tests.

#include <random>
#include <utility>
#include <vector>

#include "risnet/graph.hpp"
#include "risnet/solver.hpp"

namespace testutil {

// Erdos-Renyi style weighted graph; may be disconnected.
inline risnet::NetworkGraph random_graph(std::mt19937_64& rng, int min_v = 3, int max_v = 12,
                                         double edge_prob = 0.4) {
  std::uniform_int_distribution<int> vdist(min_v, max_v);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> wdist(0.1, 5.0);
  const int v = vdist(rng);
  risnet::NetworkGraph g(v);
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b)
      if (u01(rng) < edge_prob) g.add_edge(a, b, wdist(rng), risnet::EdgeKind::d2d);
  return g;
}

inline std::vector<std::pair<int, int>> edge_pairs(const risnet::NetworkGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (const risnet::Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

// Small scenario whose D2D graph is sparse but not empty: a handful of UEs
// in a tight square so some pairs clear the 83 dB threshold.
inline risnet::Scenario small_scenario(std::uint64_t seed, int ues = 6, int riss = 2,
                                       double area = 25.0, int elements = 8) {
  return risnet::generate_scenario(ues, riss, area, seed, elements);
}

}  // namespace testutil
