#pragma once

// RIS position refinement under a fixed assignment: lambda2 of the rebuilt
// graph as objective, central finite differences for the gradient, and the
// standard Adam recursion driven with the negated gradient for ascent. The
// best QoS-feasible iterate (never worse than the start) is returned.

#include "risnet/graph.hpp"
#include "risnet/link_selection.hpp"
#include "risnet/radio.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace risnet {

struct AdamConfig {
  double step = 0.001;        // meters-scale learning rate
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int iterations = 200;
  double fd_step = 0.01;      // meters; shrinks x10 on non-finite probes

  void validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("AdamConfig: step <= 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("AdamConfig: beta1 outside [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("AdamConfig: beta2 outside [0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("AdamConfig: epsilon <= 0");
    if (iterations < 1) throw std::invalid_argument("AdamConfig: iterations < 1");
    if (!(fd_step > 0.0)) throw std::invalid_argument("AdamConfig: fd_step <= 0");
  }
};

// Moment estimates and current point of one Adam run. positions flattens
// RIS coordinates as (x0, y0, x1, y1, ...).
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::vector<double> positions;
  int iteration = 0;

  explicit AdamState(std::vector<double> start)
      : m(start.size(), 0.0), v(start.size(), 0.0), positions(std::move(start)) {}
};

// Everything held fixed while positions move.
struct PlacementProblem {
  Scenario scenario;
  NetworkGraph base_graph;   // D2D edges only
  Assignment assignment;
  std::vector<std::optional<PhaseProfile>> profiles;
  ReliabilityMap reliability;
  SelectionOptions options;

  PlacementProblem() : base_graph(1) {}
};

inline std::vector<double> flatten_positions(const std::vector<Vec2>& pts) {
  std::vector<double> out;
  out.reserve(pts.size() * 2);
  for (const Vec2& p : pts) {
    out.push_back(p.x);
    out.push_back(p.y);
  }
  return out;
}

inline std::vector<Vec2> unflatten_positions(const std::vector<double>& flat) {
  if (flat.size() % 2 != 0)
    throw std::invalid_argument("unflatten_positions: odd coordinate count");
  std::vector<Vec2> out(flat.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {flat[2 * i], flat[2 * i + 1]};
  return out;
}

inline Scenario with_positions(const Scenario& s, const std::vector<double>& flat) {
  if (flat.size() != 2 * static_cast<std::size_t>(s.ris_count()))
    throw std::invalid_argument("with_positions: coordinate count mismatch");
  Scenario out = s;
  out.ris_positions = unflatten_positions(flat);
  return out;
}

// lambda2 of base + RIS edges, with the RISs moved to `positions` and every
// edge weight re-evaluated under the full assignment.
inline double objective(const PlacementProblem& prob, const std::vector<double>& positions) {
  const Scenario moved = with_positions(prob.scenario, positions);
  const NetworkGraph g =
      rebuild_ris_graph(moved, prob.base_graph, prob.assignment, prob.profiles, prob.options);
  return algebraic_connectivity(g).lambda2;
}

// Central finite differences; on a non-finite probe (e.g. a RIS stepped onto
// a UE) the step shrinks by 10x, up to three times, before failing.
inline std::vector<double> objective_gradient(const PlacementProblem& prob,
                                              const std::vector<double>& positions,
                                              double fd_step) {
  if (!(fd_step > 0.0)) throw std::invalid_argument("objective_gradient: fd_step <= 0");
  std::vector<double> grad(positions.size(), 0.0);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    double h = fd_step;
    bool done = false;
    for (int attempt = 0; attempt <= 3 && !done; ++attempt) {
      std::vector<double> plus = positions, minus = positions;
      plus[k] += h;
      minus[k] -= h;
      double fp, fm;
      try {
        fp = objective(prob, plus);
        fm = objective(prob, minus);
      } catch (const std::exception&) {
        h /= 10.0;
        continue;
      }
      if (std::isfinite(fp) && std::isfinite(fm)) {
        grad[k] = (fp - fm) / (2.0 * h);
        done = true;
      } else {
        h /= 10.0;
      }
    }
    if (!done)
      throw std::runtime_error("objective_gradient: objective non-finite after step shrinking");
  }
  return grad;
}

// One Adam descent update. Ascent callers pass the negated gradient.
inline AdamState adam_step(const AdamState& state, const std::vector<double>& grad,
                           const AdamConfig& cfg) {
  cfg.validate();
  if (grad.size() != state.positions.size())
    throw std::invalid_argument("adam_step: gradient size mismatch");
  AdamState next = state;
  next.iteration = state.iteration + 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, next.iteration);
  const double bc2 = 1.0 - std::pow(cfg.beta2, next.iteration);
  for (std::size_t k = 0; k < grad.size(); ++k) {
    next.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * grad[k];
    next.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
    const double m_hat = next.m[k] / bc1;
    const double v_hat = next.v[k] / bc2;
    next.positions[k] -= cfg.step * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
  return next;
}

struct TrajectoryPoint {
  int iteration = 0;
  double lambda2 = 0.0;
  bool feasible = false;
  std::vector<double> positions;
};

struct PlacementResult {
  std::vector<Vec2> positions;   // best point found (initial if none better)
  double lambda2 = 0.0;
  bool feasible_found = false;   // some QoS-feasible iterate existed
  bool improved = false;         // best point differs from the start
  std::vector<TrajectoryPoint> trajectory;
};

namespace detail {

inline bool placement_feasible(const PlacementProblem& prob, const Scenario& moved) {
  const double rel_max = prob.reliability.values.empty()
                             ? 0.0
                             : *std::max_element(prob.reliability.values.begin(),
                                                 prob.reliability.values.end());
  const std::vector<PhaseProfile> dense = detail::dense_profiles(moved, prob.profiles);
  const std::vector<TxRisPair> active = prob.assignment.tx_ris_pairs();
  for (const RisLink& link : prob.assignment.links())
    if (!qos_check(moved, dense, active, link, prob.reliability, rel_max, prob.options))
      return false;
  return true;
}

}  // namespace detail

// Adam ascent on lambda2 over RIS coordinates. Tracks the best iterate whose
// links all still pass QoS; the initial point always remains a candidate, so
// the returned lambda2 never drops below the starting value. Iterates where
// the objective cannot be evaluated are skipped (the step is rejected).
inline PlacementResult optimize_positions(const PlacementProblem& prob, const AdamConfig& cfg) {
  cfg.validate();
  prob.scenario.validate();
  if (prob.base_graph.vertex_count() != prob.scenario.ue_count())
    throw std::invalid_argument("optimize_positions: graph/scenario size mismatch");

  const std::vector<double> start = flatten_positions(prob.scenario.ris_positions);
  PlacementResult out;

  const double lambda0 = objective(prob, start);
  const bool feasible0 = detail::placement_feasible(prob, prob.scenario);
  out.trajectory.push_back({0, lambda0, feasible0, start});
  out.positions = prob.scenario.ris_positions;
  out.lambda2 = lambda0;
  out.feasible_found = feasible0;

  if (start.empty()) return out;  // no RIS to move

  AdamState state(start);
  std::vector<double> best = start;
  double best_lambda = lambda0;

  for (int it = 1; it <= cfg.iterations; ++it) {
    std::vector<double> grad;
    try {
      grad = objective_gradient(prob, state.positions, cfg.fd_step);
    } catch (const std::exception&) {
      break;  // gradient unavailable; keep the best point so far
    }
    for (double& g : grad) g = -g;  // ascend
    state = adam_step(state, grad, cfg);

    double lambda;
    bool feasible;
    try {
      const Scenario moved = with_positions(prob.scenario, state.positions);
      lambda = objective(prob, state.positions);
      feasible = detail::placement_feasible(prob, moved);
    } catch (const std::exception&) {
      state.positions = out.trajectory.back().positions;  // reject the step
      continue;
    }
    out.trajectory.push_back({it, lambda, feasible, state.positions});
    if (feasible) {
      out.feasible_found = true;
      if (lambda > best_lambda) {
        best_lambda = lambda;
        best = state.positions;
        out.improved = true;
      }
    }
  }

  out.positions = unflatten_positions(best);
  out.lambda2 = best_lambda;
  return out;
}

}  // namespace risnet
