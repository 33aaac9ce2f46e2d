#pragma once

// JSON and CSV interchange. JSON uses sorted-key serialization so identical
// inputs produce identical bytes; dB fields are rounded to 6 significant
// digits before serialization.

#include "risnet/experiments.hpp"
#include "risnet/graph.hpp"
#include "risnet/link_selection.hpp"
#include "risnet/placement.hpp"
#include "risnet/radio.hpp"
#include "risnet/solver.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace risnet {

using Json = nlohmann::json;

// Round to `digits` significant decimal digits (non-finite passes through).
inline double round_sig(double x, int digits = 6) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

// ---- scenario ----

inline Json scenario_to_json(const Scenario& s) {
  Json j;
  j["seed"] = s.seed;
  Json ues = Json::array();
  for (const Vec2& p : s.ue_positions) ues.push_back({p.x, p.y});
  j["ue_positions"] = std::move(ues);
  Json riss = Json::array();
  for (const Vec2& p : s.ris_positions) riss.push_back({p.x, p.y});
  j["ris_positions"] = std::move(riss);
  j["ris_orientations"] = s.ris_orientations;
  j["geometry"] = {{"elements", s.geometry.elements},
                   {"spacing", s.geometry.spacing},
                   {"wavelength", s.geometry.wavelength}};
  j["pattern"] = {{"boresight_gain", s.pattern.boresight_gain},
                  {"exponent", s.pattern.exponent}};
  j["constants"] = {{"tx_power_w", s.constants.tx_power},
                    {"ref_path_gain", s.constants.ref_path_gain},
                    {"noise_power_w", s.constants.noise_power},
                    {"carrier_hz", s.constants.carrier_hz},
                    {"bandwidth_hz", s.constants.bandwidth_hz},
                    {"d2d_snr_threshold_db", s.constants.d2d_snr_threshold_db},
                    {"ris_sinr_threshold_db", s.constants.ris_sinr_threshold_db}};
  Json fading = Json::array();
  for (const auto& row : s.d2d_fading) {
    Json jrow = Json::array();
    for (const std::complex<double>& h : row) jrow.push_back({h.real(), h.imag()});
    fading.push_back(std::move(jrow));
  }
  j["d2d_fading"] = std::move(fading);
  return j;
}

inline Scenario scenario_from_json(const Json& j) {
  Scenario s;
  s.seed = j.value("seed", std::uint64_t{0});
  for (const auto& p : j.at("ue_positions"))
    s.ue_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  for (const auto& p : j.value("ris_positions", Json::array()))
    s.ris_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  s.ris_orientations =
      j.value("ris_orientations", std::vector<double>(s.ris_positions.size(), 0.0));
  if (j.contains("geometry")) {
    const Json& g = j.at("geometry");
    s.geometry.elements = g.value("elements", s.geometry.elements);
    s.geometry.spacing = g.value("spacing", s.geometry.spacing);
    s.geometry.wavelength = g.value("wavelength", s.geometry.wavelength);
  }
  if (j.contains("pattern")) {
    const Json& p = j.at("pattern");
    s.pattern.boresight_gain = p.value("boresight_gain", s.pattern.boresight_gain);
    s.pattern.exponent = p.value("exponent", s.pattern.exponent);
  }
  if (j.contains("constants")) {
    const Json& c = j.at("constants");
    s.constants.tx_power = c.value("tx_power_w", s.constants.tx_power);
    s.constants.ref_path_gain = c.value("ref_path_gain", s.constants.ref_path_gain);
    s.constants.noise_power = c.value("noise_power_w", s.constants.noise_power);
    s.constants.carrier_hz = c.value("carrier_hz", s.constants.carrier_hz);
    s.constants.bandwidth_hz = c.value("bandwidth_hz", s.constants.bandwidth_hz);
    s.constants.d2d_snr_threshold_db =
        c.value("d2d_snr_threshold_db", s.constants.d2d_snr_threshold_db);
    s.constants.ris_sinr_threshold_db =
        c.value("ris_sinr_threshold_db", s.constants.ris_sinr_threshold_db);
  }
  for (const auto& row : j.at("d2d_fading")) {
    std::vector<std::complex<double>> r;
    for (const auto& h : row)
      r.emplace_back(h.at(0).get<double>(), h.at(1).get<double>());
    s.d2d_fading.push_back(std::move(r));
  }
  s.validate();
  return s;
}

// ---- graph ----

inline Json graph_to_json(const NetworkGraph& g) {
  Json j;
  j["vertices"] = g.vertex_count();
  Json edges = Json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"u", e.u},
                     {"v", e.v},
                     {"w", e.weight},
                     {"kind", e.kind == EdgeKind::d2d ? "d2d" : "ris"}});
  j["edges"] = std::move(edges);
  return j;
}

inline NetworkGraph graph_from_json(const Json& j) {
  NetworkGraph g(j.at("vertices").get<int>());
  for (const auto& e : j.value("edges", Json::array())) {
    const std::string kind = e.value("kind", "d2d");
    if (kind != "d2d" && kind != "ris")
      throw std::invalid_argument("graph_from_json: unknown edge kind '" + kind + "'");
    g.add_edge(e.at("u").get<int>(), e.at("v").get<int>(), e.at("w").get<double>(),
               kind == "d2d" ? EdgeKind::d2d : EdgeKind::ris_aided);
  }
  return g;
}

// ---- assignment ----

inline Json assignment_to_json(const Assignment& asg, const Scenario& scn) {
  Json j;
  j["x"] = asg.x;
  j["z"] = asg.z;
  Json beams = Json::array();
  for (int m = 0; m < asg.ris_count; ++m) {
    const auto tx = asg.transmitter_of(m);
    if (!tx) continue;
    Json targets = Json::array();
    for (int rx : asg.receivers_of(m))
      targets.push_back(round_sig(
          ris_angle(scn, m, scn.ue_positions[static_cast<std::size_t>(rx)]) * 180.0 / kPi));
    beams.push_back({{"ris", m}, {"tx", *tx}, {"targets_deg", std::move(targets)}});
  }
  j["beams"] = std::move(beams);
  return j;
}

inline Assignment assignment_from_json(const Json& j) {
  const auto x = j.at("x").get<std::vector<std::vector<std::uint8_t>>>();
  const auto z = j.at("z").get<std::vector<std::vector<std::uint8_t>>>();
  if (x.size() != z.size())
    throw std::invalid_argument("assignment_from_json: x/z row count mismatch");
  Assignment asg(static_cast<int>(x.size()), x.empty() ? 0 : static_cast<int>(x[0].size()));
  asg.x = x;
  asg.z = z;
  for (const auto& row : x)
    if (row.size() != x[0].size())
      throw std::invalid_argument("assignment_from_json: ragged x");
  for (const auto& row : z)
    if (row.size() != x[0].size())
      throw std::invalid_argument("assignment_from_json: ragged z");
  return asg;
}

// ---- configs ----

inline Json solve_config_to_json(const SolveConfig& c) {
  Json j;
  j["um"] = c.um;
  j["outer_iterations"] = c.outer_iterations;
  j["tolerance"] = c.tolerance;
  j["ga"] = {{"population_size", c.ga.population_size},
             {"generations", c.ga.generations},
             {"mutation_scale", c.ga.mutation_scale},
             {"mutation_scale_final", c.ga.mutation_scale_final},
             {"early_stop_patience", c.ga.early_stop_patience},
             {"rng_seed", c.ga.rng_seed}};
  j["adam"] = {{"step", c.adam.step},
               {"beta1", c.adam.beta1},
               {"beta2", c.adam.beta2},
               {"epsilon", c.adam.epsilon},
               {"iterations", c.adam.iterations},
               {"fd_step", c.adam.fd_step}};
  j["selection"] = {{"normalize_reliability", c.selection.normalize_reliability},
                    {"qos_retries", c.selection.qos_retries},
                    {"exact_edge_weights", c.selection.exact_edge_weights},
                    {"min_target_separation", c.selection.min_target_separation}};
  return j;
}

inline SolveConfig solve_config_from_json(const Json& j) {
  SolveConfig c;
  c.um = j.value("um", c.um);
  c.outer_iterations = j.value("outer_iterations", c.outer_iterations);
  c.tolerance = j.value("tolerance", c.tolerance);
  if (j.contains("ga")) {
    const Json& g = j.at("ga");
    c.ga.population_size = g.value("population_size", c.ga.population_size);
    c.ga.generations = g.value("generations", c.ga.generations);
    c.ga.mutation_scale = g.value("mutation_scale", c.ga.mutation_scale);
    c.ga.mutation_scale_final = g.value("mutation_scale_final", c.ga.mutation_scale_final);
    c.ga.early_stop_patience = g.value("early_stop_patience", c.ga.early_stop_patience);
    c.ga.rng_seed = g.value("rng_seed", c.ga.rng_seed);
  }
  if (j.contains("adam")) {
    const Json& a = j.at("adam");
    c.adam.step = a.value("step", c.adam.step);
    c.adam.beta1 = a.value("beta1", c.adam.beta1);
    c.adam.beta2 = a.value("beta2", c.adam.beta2);
    c.adam.epsilon = a.value("epsilon", c.adam.epsilon);
    c.adam.iterations = a.value("iterations", c.adam.iterations);
    c.adam.fd_step = a.value("fd_step", c.adam.fd_step);
  }
  if (j.contains("selection")) {
    const Json& s = j.at("selection");
    c.selection.normalize_reliability =
        s.value("normalize_reliability", c.selection.normalize_reliability);
    c.selection.qos_retries = s.value("qos_retries", c.selection.qos_retries);
    c.selection.exact_edge_weights =
        s.value("exact_edge_weights", c.selection.exact_edge_weights);
    c.selection.min_target_separation =
        s.value("min_target_separation", c.selection.min_target_separation);
  }
  c.validate();
  return c;
}

// Optional "constants" block in a config file overrides scenario constants.
inline void apply_config_overrides(Scenario& s, const Json& config) {
  if (!config.contains("constants")) return;
  Json merged = scenario_to_json(s);
  merged["constants"].update(config.at("constants"));
  s = scenario_from_json(merged);
}

// ---- solve result ----

inline Json result_to_json(const SolveResult& r, const Scenario& scenario) {
  Scenario final_scn = scenario;
  final_scn.ris_positions = r.ris_positions;
  final_scn.ris_orientations.resize(r.ris_positions.size(), 0.0);

  Json j;
  j["scheme"] = scheme_name(r.scheme);
  j["scenario_seed"] = r.scenario_seed;
  j["optimizer_seed"] = r.optimizer_seed;
  j["ue_count"] = r.ue_count;
  j["ris_count"] = r.ris_count;
  j["elements"] = r.elements;
  j["um"] = r.um;
  j["lambda2_initial"] = r.lambda2_initial;
  j["lambda2_final"] = r.lambda2_final;
  j["links_added"] = r.links_added;
  j["outer_lambda2"] = r.outer_lambda2;
  Json pos = Json::array();
  for (const Vec2& p : r.ris_positions) pos.push_back({p.x, p.y});
  j["ris_positions"] = std::move(pos);
  j["assignment"] = assignment_to_json(r.assignment, final_scn);
  Json profiles = Json::array();
  for (const auto& p : r.profiles) {
    if (p)
      profiles.push_back(p->phases);
    else
      profiles.push_back(nullptr);
  }
  j["profiles"] = std::move(profiles);
  Json links = Json::array();
  for (const LinkReport& l : r.links)
    links.push_back({{"tx", l.tx},
                     {"ris", l.ris},
                     {"rx", l.rx},
                     {"weight", l.weight},
                     {"sinr_exact_db", round_sig(l.sinr_exact_db)},
                     {"sinr_approx_db", round_sig(l.sinr_approx_db)}});
  j["links"] = std::move(links);
  j["sum_rate_exact_bps"] = r.sum_rate_exact_bps;
  j["sum_rate_approx_bps"] = r.sum_rate_approx_bps;
  j["graph_initial"] = graph_to_json(r.graph_initial);
  j["graph_final"] = graph_to_json(r.graph_final);
  return j;
}

// ---- CSV ----

namespace detail {

inline std::string csv_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace detail

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,value,scheme,seed,lambda2_initial,lambda2_final,links_added,status\n";
  for (const SweepRow& r : rows) {
    out += r.param + ',' + std::to_string(r.value) + ',' + r.scheme + ',' + r.seed + ',';
    if (r.status == "ok") {
      out += detail::csv_num(r.lambda2_initial) + ',' + detail::csv_num(r.lambda2_final) + ',' +
             detail::csv_num(r.links_added);
    } else {
      out += ",,";
    }
    out += ',' + r.status + '\n';
  }
  return out;
}

inline std::string rates_csv(const std::vector<RateRow>& rows) {
  std::string out = "elements,um,seed,rate_exact_bps,rate_approx_bps,rel_gap\n";
  for (const RateRow& r : rows) {
    out += std::to_string(r.elements) + ',' + std::to_string(r.um) + ',' + r.seed + ',' +
           detail::csv_num(r.rate_exact_bps) + ',' + detail::csv_num(r.rate_approx_bps) + ',' +
           detail::csv_num(r.rel_gap) + '\n';
  }
  return out;
}

inline std::string pattern_csv(const std::vector<PatternPoint>& points) {
  std::string out = "angle_deg,pdaf\n";
  for (const PatternPoint& p : points)
    out += detail::csv_num(p.angle_deg) + ',' + detail::csv_num(p.pdaf) + '\n';
  return out;
}

inline std::string trajectory_csv(const std::vector<TrajectoryPoint>& traj) {
  std::string out = "iter,lambda2,feasible";
  const std::size_t coords = traj.empty() ? 0 : traj.front().positions.size();
  for (std::size_t k = 0; k < coords; ++k) {
    const std::size_t m = k / 2;
    out += ",pos_m" + std::to_string(m) + (k % 2 == 0 ? "_x" : "_y");
  }
  out += '\n';
  for (const TrajectoryPoint& p : traj) {
    out += std::to_string(p.iteration) + ',' + detail::csv_num(p.lambda2) + ',' +
           (p.feasible ? "1" : "0");
    for (double c : p.positions) out += ',' + detail::csv_num(c);
    out += '\n';
  }
  return out;
}

// Canonical text form of a result: sorted keys, 2-space indent, newline EOF.
inline std::string result_to_text(const SolveResult& r, const Scenario& scenario) {
  return result_to_json(r, scenario).dump(2) + "\n";
}

}  // namespace risnet
