#pragma once

// Genetic synthesis of multi-narrowbeam RIS phase profiles. Fitness is the
// worst power-domain array factor over the requested departure angles, so
// the search maximizes the weakest beam.

#include "risnet/radio.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace risnet {

struct GaConfig {
  int population_size = 40;        // kept even; pairs of parents
  int generations = 100;
  double mutation_scale = 0.1;     // stddev (rad) at generation 1
  double mutation_scale_final = 0.01;  // stddev at the last generation
  int early_stop_patience = 0;     // 0 disables early stopping
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (population_size < 4 || population_size % 2 != 0)
      throw std::invalid_argument("GaConfig: population_size must be even and >= 4");
    if (generations < 1) throw std::invalid_argument("GaConfig: generations < 1");
    if (!(mutation_scale > 0.0) || !(mutation_scale_final > 0.0))
      throw std::invalid_argument("GaConfig: mutation scales must be positive");
    if (early_stop_patience < 0)
      throw std::invalid_argument("GaConfig: early_stop_patience < 0");
  }
};

// One RIS beam-design task: arrival angle plus pairwise-separated departure
// angles, all within the front half-plane.
struct BeamTask {
  ArrayGeometry geometry;
  double arrival = 0.0;
  std::vector<double> departures;
  double min_separation = 1e-3;  // radians

  BeamTask(ArrayGeometry geom, double arrival_angle, std::vector<double> departure_angles,
           double min_sep = 1e-3)
      : geometry(geom), arrival(arrival_angle), departures(std::move(departure_angles)),
        min_separation(min_sep) {
    geometry.validate();
    if (departures.empty()) throw std::invalid_argument("BeamTask: no departure angles");
    for (std::size_t i = 0; i < departures.size(); ++i)
      for (std::size_t j = i + 1; j < departures.size(); ++j)
        if (std::abs(departures[i] - departures[j]) < min_separation)
          throw std::invalid_argument("BeamTask: departure angles closer than min separation");
  }
};

struct GaOutcome {
  PhaseProfile best_profile;
  double best_fitness = 0.0;
  std::vector<double> fitness_history;  // best-so-far after each generation
};

// Closed-form profile steering one beam: cancels the steering phases so all
// elements add coherently for (arrival, departure).
inline PhaseProfile aligned_profile(const ArrayGeometry& g, double arrival, double departure) {
  g.validate();
  const double k =
      2.0 * kPi * g.spacing / g.wavelength * (std::sin(arrival) + std::sin(departure));
  std::vector<double> phases(static_cast<std::size_t>(g.elements));
  for (int n = 0; n < g.elements; ++n)
    phases[static_cast<std::size_t>(n)] = k * n;
  return PhaseProfile(std::move(phases));
}

// Worst-case beam power over the task's departure angles.
inline double fitness(const PhaseProfile& profile, const BeamTask& task) {
  double worst = std::numeric_limits<double>::infinity();
  for (double dep : task.departures)
    worst = std::min(worst, pdaf(task.geometry, profile, task.arrival, dep));
  return worst;
}

struct ParentDraw {
  std::vector<std::size_t> indices;
  bool uniform_fallback = false;  // set when all fitnesses were zero
};

// Fitness-proportional draw of `count` parent indices, with replacement.
// Degenerates to a uniform draw when no individual has positive fitness.
inline ParentDraw select_parents(const std::vector<double>& fitnesses, int count,
                                 std::mt19937_64& rng) {
  if (fitnesses.empty()) throw std::invalid_argument("select_parents: empty population");
  for (double f : fitnesses)
    if (!(f >= 0.0)) throw std::invalid_argument("select_parents: negative fitness");
  ParentDraw out;
  out.indices.reserve(static_cast<std::size_t>(count));
  double total = 0.0;
  for (double f : fitnesses) total += f;
  if (total > 0.0) {
    std::discrete_distribution<std::size_t> pick(fitnesses.begin(), fitnesses.end());
    for (int i = 0; i < count; ++i) out.indices.push_back(pick(rng));
  } else {
    out.uniform_fallback = true;
    std::uniform_int_distribution<std::size_t> pick(0, fitnesses.size() - 1);
    for (int i = 0; i < count; ++i) out.indices.push_back(pick(rng));
  }
  return out;
}

// Weighted blend of raw phase values; both offspring re-wrap to [0, 2*pi).
inline std::pair<PhaseProfile, PhaseProfile> crossover_blend(const PhaseProfile& a,
                                                             const PhaseProfile& b, double u) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover_blend: size mismatch");
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("crossover_blend: u outside [0, 1]");
  std::vector<double> c1(a.phases.size()), c2(a.phases.size());
  for (std::size_t n = 0; n < a.phases.size(); ++n) {
    c1[n] = u * a.phases[n] + (1.0 - u) * b.phases[n];
    c2[n] = (1.0 - u) * a.phases[n] + u * b.phases[n];
  }
  return {PhaseProfile(std::move(c1)), PhaseProfile(std::move(c2))};
}

// Additive Gaussian phase noise with the given stddev, wrapped.
inline PhaseProfile mutate(const PhaseProfile& profile, double sigma, std::mt19937_64& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("mutate: negative sigma");
  if (sigma == 0.0) return profile;
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> phases = profile.phases;
  for (double& p : phases) p += noise(rng);
  return PhaseProfile(std::move(phases));
}

// Generational GA: warm-started population, fitness-proportional parents,
// blend crossover with one shared u per pair, decaying Gaussian mutation,
// and best-ever elitism injected over a random offspring slot.
inline GaOutcome run_ga(const BeamTask& task, const GaConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> phase_draw(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> unit_draw(0.0, 1.0);
  const std::size_t pop_size = static_cast<std::size_t>(cfg.population_size);
  const std::size_t n = static_cast<std::size_t>(task.geometry.elements);

  std::vector<PhaseProfile> pop;
  pop.reserve(pop_size);
  pop.push_back(aligned_profile(task.geometry, task.arrival, task.departures.front()));
  for (std::size_t j = 1; j < pop_size; ++j) {
    std::vector<double> phases(n);
    for (double& p : phases) p = phase_draw(rng);
    pop.emplace_back(std::move(phases));
  }

  std::vector<double> fit(pop_size);
  auto evaluate = [&] {
    for (std::size_t j = 0; j < pop_size; ++j) fit[j] = fitness(pop[j], task);
  };
  evaluate();

  std::size_t best_idx = static_cast<std::size_t>(
      std::max_element(fit.begin(), fit.end()) - fit.begin());
  PhaseProfile best_profile = pop[best_idx];
  double best_fitness = fit[best_idx];

  GaOutcome out;
  out.fitness_history.reserve(static_cast<std::size_t>(cfg.generations));
  int stagnant = 0;

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    const double frac = cfg.generations > 1
                            ? static_cast<double>(gen - 1) / (cfg.generations - 1)
                            : 0.0;
    const double sigma =
        cfg.mutation_scale + frac * (cfg.mutation_scale_final - cfg.mutation_scale);

    const ParentDraw parents = select_parents(fit, cfg.population_size, rng);
    std::vector<PhaseProfile> next;
    next.reserve(pop_size);
    for (std::size_t p = 0; p + 1 < pop_size; p += 2) {
      const double u = unit_draw(rng);
      auto [c1, c2] = crossover_blend(pop[parents.indices[p]], pop[parents.indices[p + 1]], u);
      next.push_back(std::move(c1));
      next.push_back(std::move(c2));
    }
    for (PhaseProfile& child : next) child = mutate(child, sigma, rng);

    std::uniform_int_distribution<std::size_t> slot(0, pop_size - 1);
    next[slot(rng)] = best_profile;  // elitism

    pop = std::move(next);
    evaluate();

    best_idx = static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
    if (fit[best_idx] > best_fitness) {
      best_fitness = fit[best_idx];
      best_profile = pop[best_idx];
      stagnant = 0;
    } else {
      ++stagnant;
    }
    out.fitness_history.push_back(best_fitness);
    if (cfg.early_stop_patience > 0 && stagnant >= cfg.early_stop_patience) break;
  }

  out.best_profile = std::move(best_profile);
  out.best_fitness = fitness(out.best_profile, task);
  return out;
}

}  // namespace risnet
