#pragma once

// Batch experiments: parameter sweeps over schemes and seeds, the fixed
// two-transmitter rate fixture comparing exact against approximated sum
// rates, and PDAF angle sweeps for beam-pattern dumps.

#include "risnet/beamforming.hpp"
#include "risnet/link_selection.hpp"
#include "risnet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace risnet {

enum class SweepParam { ues, elements, um };

inline std::string sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::ues: return "ues";
    case SweepParam::elements: return "elements";
    case SweepParam::um: return "um";
  }
  throw std::invalid_argument("sweep_param_name: unknown parameter");
}

inline SweepParam sweep_param_from_name(const std::string& name) {
  if (name == "ues") return SweepParam::ues;
  if (name == "elements") return SweepParam::elements;
  if (name == "um") return SweepParam::um;
  throw std::invalid_argument("sweep_param_from_name: unknown parameter '" + name + "'");
}

struct SweepRow {
  std::string param;
  int value = 0;
  std::string scheme;
  std::string seed;  // seed number, or "mean" for aggregate rows
  double lambda2_initial = 0.0;
  double lambda2_final = 0.0;
  double links_added = 0.0;
  std::string status = "ok";
};

struct SweepSettings {
  int base_ues = 10;
  int base_riss = 3;
  int base_elements = 10;
  double area = 100.0;
  SolveConfig config;
};

// Full grid of (value, scheme, seed) runs plus one mean row per
// (value, scheme) over its ok runs. Values and seeds are processed in sorted
// order so reruns produce identical row sequences.
inline std::vector<SweepRow> sweep(SweepParam param, std::vector<int> values,
                                   std::vector<std::uint64_t> seeds,
                                   const std::vector<Scheme>& schemes,
                                   const SweepSettings& settings) {
  if (seeds.empty()) throw std::invalid_argument("sweep: need at least one seed");
  if (values.empty()) throw std::invalid_argument("sweep: need at least one value");
  if (schemes.empty()) throw std::invalid_argument("sweep: need at least one scheme");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<SweepRow> rows;
  for (int value : values) {
    for (Scheme scheme : schemes) {
      double sum_initial = 0.0, sum_final = 0.0, sum_links = 0.0;
      int ok = 0;
      for (std::uint64_t seed : seeds) {
        SweepRow row;
        row.param = sweep_param_name(param);
        row.value = value;
        row.scheme = scheme_name(scheme);
        row.seed = std::to_string(seed);
        try {
          Scenario scn;
          SolveConfig cfg = settings.config;
          switch (param) {
            case SweepParam::ues:
              scn = generate_scenario(value, settings.base_riss, settings.area, seed,
                                      settings.base_elements);
              break;
            case SweepParam::elements:
              scn = generate_scenario(settings.base_ues, settings.base_riss, settings.area, seed,
                                      value);
              break;
            case SweepParam::um:
              scn = generate_scenario(settings.base_ues, settings.base_riss, settings.area, seed,
                                      settings.base_elements);
              cfg.um = value;
              break;
          }
          const SolveResult res = run_baseline(scn, scheme, cfg);
          row.lambda2_initial = res.lambda2_initial;
          row.lambda2_final = res.lambda2_final;
          row.links_added = res.links_added;
          sum_initial += res.lambda2_initial;
          sum_final += res.lambda2_final;
          sum_links += res.links_added;
          ++ok;
        } catch (const std::exception& e) {
          std::string what = e.what();
          for (char& c : what)
            if (c == ',' || c == '\n' || c == '\r') c = ';';
          row.status = "error: " + what;
        }
        rows.push_back(row);
      }
      SweepRow mean;
      mean.param = sweep_param_name(param);
      mean.value = value;
      mean.scheme = scheme_name(scheme);
      mean.seed = "mean";
      if (ok > 0) {
        mean.lambda2_initial = sum_initial / ok;
        mean.lambda2_final = sum_final / ok;
        mean.links_added = sum_links / ok;
      } else {
        mean.status = "error: no successful runs";
      }
      rows.push_back(mean);
    }
  }
  return rows;
}

// Fixed two-cluster deployment mirroring the rate experiment's topology:
// two transmitters, two RISs, four receivers. Clusters sit far apart so
// cross-cluster leakage is weak; direct links are heavily blocked (tiny
// fading scale), which is the regime the approximation targets.
inline Scenario make_rate_fixture(std::uint64_t seed = 1, double fading_scale = 1e-4) {
  Scenario s;
  s.seed = seed;
  s.constants = RadioConstants{};
  s.geometry.elements = 16;
  s.geometry.wavelength = s.constants.wavelength();
  s.geometry.spacing = s.geometry.wavelength / 2.0;

  s.ue_positions = {
      {-116.0, 24.0},  // transmitter of RIS 0
      {116.0, 24.0},   // transmitter of RIS 1
      {-84.0, 48.0},   // receiver, RIS 0 beam 1
      {84.0, 48.0},    // receiver, RIS 1 beam 1
      {128.0, 40.0},   // receiver, RIS 1 beam 2
      {-128.0, 40.0},  // receiver, RIS 0 beam 2
  };
  s.ris_positions = {{-100.0, 0.0}, {100.0, 0.0}};
  s.ris_orientations = {0.0, 0.0};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  const int u = static_cast<int>(s.ue_positions.size());
  s.d2d_fading.assign(static_cast<std::size_t>(u),
                      std::vector<std::complex<double>>(static_cast<std::size_t>(u), {0.0, 0.0}));
  for (int a = 0; a < u; ++a) {
    for (int b = a + 1; b < u; ++b) {
      const std::complex<double> h{fading_scale * gauss(rng), fading_scale * gauss(rng)};
      s.d2d_fading[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = h;
      s.d2d_fading[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = h;
    }
  }
  s.validate();
  return s;
}

// Receiver sets of the fixture by beams-per-RIS: one beam serves receivers
// (2, 3); two beams add (5, 4).
inline Assignment rate_fixture_assignment(int um) {
  if (um < 1 || um > 2)
    throw std::invalid_argument("rate_fixture_assignment: um must be 1 or 2");
  Assignment asg(2, 6);
  asg.x[0][0] = 1;
  asg.z[0][2] = 1;
  asg.x[1][1] = 1;
  asg.z[1][3] = 1;
  if (um == 2) {
    asg.z[0][5] = 1;
    asg.z[1][4] = 1;
  }
  return asg;
}

struct RateRow {
  int elements = 0;
  int um = 1;
  std::string seed;  // GA seed, or "mean"
  double rate_exact_bps = 0.0;
  double rate_approx_bps = 0.0;
  double rel_gap = 0.0;  // |exact - approx| / exact
};

// GA-designed beams on the fixture for each element count and seed; exact
// and approximated sum rates plus their relative gap, with a mean row per
// element count.
inline std::vector<RateRow> rate_experiment(const Scenario& fixture, std::vector<int> n_values,
                                            int um, std::vector<std::uint64_t> seeds,
                                            const GaConfig& ga = {}) {
  if (fixture.ue_count() != 6 || fixture.ris_count() != 2)
    throw std::invalid_argument("rate_experiment: fixture must have 6 UEs and 2 RISs");
  if (n_values.empty()) throw std::invalid_argument("rate_experiment: no element counts");
  if (seeds.empty()) throw std::invalid_argument("rate_experiment: no seeds");
  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  const Assignment asg = rate_fixture_assignment(um);
  std::vector<RateRow> rows;
  for (int n : n_values) {
    Scenario scn = fixture;
    scn.geometry.elements = n;
    scn.validate();
    double sum_exact = 0.0, sum_approx = 0.0, sum_gap = 0.0;
    for (std::uint64_t seed : seeds) {
      std::vector<std::optional<PhaseProfile>> profiles(2);
      for (int m = 0; m < 2; ++m) {
        const int tx = *asg.transmitter_of(m);
        std::vector<double> targets;
        for (int rx : asg.receivers_of(m))
          targets.push_back(ris_angle(scn, m, scn.ue_positions[static_cast<std::size_t>(rx)]));
        const BeamTask task(scn.geometry,
                            ris_angle(scn, m, scn.ue_positions[static_cast<std::size_t>(tx)]),
                            targets);
        GaConfig cfg = ga;
        cfg.rng_seed = seed + 7919ULL * static_cast<std::uint64_t>(m);
        profiles[static_cast<std::size_t>(m)] = run_ga(task, cfg).best_profile;
      }
      const std::vector<PhaseProfile> dense = detail::dense_profiles(scn, profiles);
      const std::vector<TxRisPair> active = asg.tx_ris_pairs();
      std::vector<double> exact_db, approx_db;
      for (const RisLink& link : asg.links()) {
        exact_db.push_back(exact_sinr(scn, dense, active, link.tx, link.ris, link.rx));
        approx_db.push_back(approx_sinr(scn, dense, active, link.tx, link.ris, link.rx));
      }
      RateRow row;
      row.elements = n;
      row.um = um;
      row.seed = std::to_string(seed);
      row.rate_exact_bps = sum_rate(exact_db, scn.constants.bandwidth_hz);
      row.rate_approx_bps = sum_rate(approx_db, scn.constants.bandwidth_hz);
      row.rel_gap = row.rate_exact_bps > 0.0
                        ? std::abs(row.rate_exact_bps - row.rate_approx_bps) / row.rate_exact_bps
                        : (row.rate_approx_bps > 0.0 ? std::numeric_limits<double>::infinity()
                                                     : 0.0);
      sum_exact += row.rate_exact_bps;
      sum_approx += row.rate_approx_bps;
      sum_gap += row.rel_gap;
      rows.push_back(row);
    }
    RateRow mean;
    mean.elements = n;
    mean.um = um;
    mean.seed = "mean";
    const double k = static_cast<double>(seeds.size());
    mean.rate_exact_bps = sum_exact / k;
    mean.rate_approx_bps = sum_approx / k;
    mean.rel_gap = sum_gap / k;
    rows.push_back(mean);
  }
  return rows;
}

struct PatternPoint {
  double angle_deg = 0.0;
  double pdaf = 0.0;
};

// PDAF sweep over departure angles in [-90, 90] degrees.
inline std::vector<PatternPoint> beam_pattern(const ArrayGeometry& g, const PhaseProfile& profile,
                                              double arrival, double step_deg = 0.1) {
  if (!(step_deg > 0.0)) throw std::invalid_argument("beam_pattern: step <= 0");
  std::vector<PatternPoint> out;
  const int steps = static_cast<int>(std::lround(180.0 / step_deg));
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const double deg = -90.0 + i * step_deg;
    out.push_back({deg, pdaf(g, profile, arrival, deg * kPi / 180.0)});
  }
  return out;
}

}  // namespace risnet
