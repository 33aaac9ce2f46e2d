// Command-line front end: scenario generation, the end-to-end solver and
// baselines, parameter sweeps, beam-pattern dumps, and the rate experiment.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "risnet/io.hpp"

using namespace risnet;

namespace {

std::vector<std::uint64_t> seed_range(int count) {
  if (count < 1) throw std::invalid_argument("seed count must be >= 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-RIS D2D connectivity toolkit"};
  app.require_subcommand(1);

  // ---- scenario ----
  CLI::App* scenario = app.add_subcommand("scenario", "Create scenario files");
  scenario->require_subcommand(1);

  int gen_ues = 10, gen_riss = 3, gen_elements = 10;
  double gen_area = 100.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = scenario->add_subcommand("gen", "Random uniform deployment");
  gen->add_option("--ues", gen_ues, "Number of UEs")->required();
  gen->add_option("--riss", gen_riss, "Number of RISs")->required();
  gen->add_option("--area", gen_area, "Square side length in meters")->required();
  gen->add_option("--seed", gen_seed, "Scenario seed")->required();
  gen->add_option("--elements", gen_elements, "RIS elements per surface");
  gen->add_option("-o,--output", gen_out, "Output scenario JSON")->required();
  gen->callback([&] {
    const Scenario s = generate_scenario(gen_ues, gen_riss, gen_area, gen_seed, gen_elements);
    write_text_file(gen_out, scenario_to_json(s).dump(2) + "\n");
  });

  std::uint64_t fix_seed = 1;
  double fix_fading = 1e-4;
  std::string fix_out;
  CLI::App* fixture = scenario->add_subcommand(
      "fixture", "Blocked-cluster rate fixture (2 Tx, 2 RIS, 4 Rx)");
  fixture->add_option("--seed", fix_seed, "Fading seed");
  fixture->add_option("--fading-scale", fix_fading, "Direct-path fading scale");
  fixture->add_option("-o,--output", fix_out, "Output scenario JSON")->required();
  fixture->callback([&] {
    const Scenario s = make_rate_fixture(fix_seed, fix_fading);
    write_text_file(fix_out, scenario_to_json(s).dump(2) + "\n");
  });

  // ---- solve ----
  std::string solve_scenario, solve_config, solve_scheme = "proposed", solve_out, solve_traj;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run one scheme on a scenario");
  solve_cmd->add_option("--scenario", solve_scenario, "Scenario JSON")->required();
  solve_cmd->add_option("--config", solve_config, "Config JSON");
  solve_cmd->add_option("--scheme", solve_scheme,
                        "proposed|single-beam|ris-free|distributed-small");
  solve_cmd->add_option("-o,--output", solve_out, "Output result JSON")->required();
  solve_cmd->add_option("--trajectory-out", solve_traj, "Placement trajectory CSV");
  solve_cmd->callback([&] {
    Scenario s = scenario_from_json(Json::parse(read_text_file(solve_scenario)));
    SolveConfig cfg;
    if (!solve_config.empty()) {
      const Json j = Json::parse(read_text_file(solve_config));
      cfg = solve_config_from_json(j);
      apply_config_overrides(s, j);
    }
    const SolveResult result = run_baseline(s, scheme_from_name(solve_scheme), cfg);
    write_text_file(solve_out, result_to_text(result, s));
    if (!solve_traj.empty()) write_text_file(solve_traj, trajectory_csv(result.trajectory));
    std::cout << "lambda2 " << result.lambda2_initial << " -> " << result.lambda2_final
              << " (" << result.links_added << " links added)\n";
  });

  // ---- sweep ----
  std::string sweep_param, sweep_config, sweep_out;
  std::vector<int> sweep_values;
  std::vector<std::string> sweep_schemes = {"proposed"};
  int sweep_seeds = 10;
  SweepSettings settings;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Mean connectivity over a parameter grid");
  sweep_cmd->add_option("--param", sweep_param, "ues|elements|um")->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_seeds, "Scenario seeds 1..K");
  sweep_cmd->add_option("--schemes", sweep_schemes, "Comma-separated scheme names")
      ->delimiter(',');
  sweep_cmd->add_option("--ues", settings.base_ues, "Base UE count");
  sweep_cmd->add_option("--riss", settings.base_riss, "Base RIS count");
  sweep_cmd->add_option("--elements", settings.base_elements, "Base element count");
  sweep_cmd->add_option("--area", settings.area, "Square side length in meters");
  sweep_cmd->add_option("--config", sweep_config, "Config JSON");
  sweep_cmd->add_option("-o,--output", sweep_out, "Output CSV")->required();
  sweep_cmd->callback([&] {
    if (!sweep_config.empty())
      settings.config = solve_config_from_json(Json::parse(read_text_file(sweep_config)));
    std::vector<Scheme> schemes;
    for (const std::string& name : sweep_schemes) schemes.push_back(scheme_from_name(name));
    const auto rows = sweep(sweep_param_from_name(sweep_param), sweep_values,
                            seed_range(sweep_seeds), schemes, settings);
    write_text_file(sweep_out, sweep_csv(rows));
    std::cout << rows.size() << " rows\n";
  });

  // ---- beamplot ----
  int bp_elements = 20;
  double bp_spacing_frac = 0.5, bp_aoa = 0.0, bp_step = 0.1;
  std::vector<double> bp_targets;
  GaConfig bp_ga;
  std::string bp_out;
  CLI::App* beamplot = app.add_subcommand("beamplot", "PDAF sweep for a GA-designed profile");
  beamplot->add_option("--elements", bp_elements, "Array elements")->required();
  beamplot->add_option("--spacing-frac", bp_spacing_frac, "Element spacing over wavelength");
  beamplot->add_option("--aoa-deg", bp_aoa, "Arrival azimuth in degrees")->required();
  beamplot->add_option("--targets-deg", bp_targets, "Comma-separated departure targets")
      ->required()
      ->delimiter(',');
  beamplot->add_option("--step-deg", bp_step, "Sweep step in degrees");
  beamplot->add_option("--seed", bp_ga.rng_seed, "GA seed");
  beamplot->add_option("--population", bp_ga.population_size, "GA population size");
  beamplot->add_option("--generations", bp_ga.generations, "GA generations");
  beamplot->add_option("-o,--output", bp_out, "Output CSV")->required();
  beamplot->callback([&] {
    ArrayGeometry g;
    g.elements = bp_elements;
    g.wavelength = RadioConstants{}.wavelength();
    g.spacing = bp_spacing_frac * g.wavelength;
    std::vector<double> targets;
    for (double t : bp_targets) targets.push_back(t * kPi / 180.0);
    const BeamTask task(g, bp_aoa * kPi / 180.0, targets);
    const GaOutcome res = run_ga(task, bp_ga);
    write_text_file(bp_out, pattern_csv(beam_pattern(g, res.best_profile, task.arrival, bp_step)));
    std::cout << "min on-target pdaf " << res.best_fitness << " (bound "
              << static_cast<double>(bp_elements) * bp_elements << ")\n";
  });

  // ---- rates ----
  std::string rates_fixture, rates_out;
  std::vector<int> rates_n;
  int rates_um = 1, rates_seeds = 10;
  CLI::App* rates = app.add_subcommand("rates", "Exact vs approximated sum rate on a fixture");
  rates->add_option("--fixture", rates_fixture, "Fixture scenario JSON")->required();
  rates->add_option("--n-values", rates_n, "Comma-separated element counts")
      ->required()
      ->delimiter(',');
  rates->add_option("--um", rates_um, "Beams per RIS (1 or 2)");
  rates->add_option("--seeds", rates_seeds, "GA seeds 1..K");
  rates->add_option("-o,--output", rates_out, "Output CSV")->required();
  rates->callback([&] {
    const Scenario fx = scenario_from_json(Json::parse(read_text_file(rates_fixture)));
    const auto rows = rate_experiment(fx, rates_n, rates_um, seed_range(rates_seeds));
    write_text_file(rates_out, rates_csv(rows));
    std::cout << rows.size() << " rows\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
