#include "scnet/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "scnet/types.hpp"

namespace scnet::cli {

double noise_var_per_rb(const RunConfig& cfg) {
  const double rb_hz = 180e3;
  const double thermal_dbm = -174.0 + 10.0 * std::log10(rb_hz);
  return dbm_to_watts(thermal_dbm + cfg.noise_figure_db);
}

namespace {

void fail(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

energy::EnergyParams parse_energy(const nlohmann::json& j,
                                  const std::string& path,
                                  energy::EnergyParams base) {
  for (const auto& [k, v] : j.items()) {
    if (k == "p0")
      base.p0 = v.get<double>();
    else if (k == "delta_p")
      base.delta_p = v.get<double>();
    else if (k == "p_max")
      base.p_max = v.get<double>();
    else if (k == "p_sleep")
      base.p_sleep = v.get<double>();
    else if (k == "n_t")
      base.n_t = v.get<int>();
    else
      fail(path + "." + k, "unknown key");
  }
  // revalidate through the checking constructor
  return energy::EnergyParams(base.p0, base.delta_p, base.p_max, base.p_sleep,
                              base.n_t);
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  RunConfig cfg;
  for (const auto& [k, v] : doc.items()) {
    if (k == "scenario")
      cfg.scenario = v.get<std::string>();
    else if (k == "dr")
      cfg.dr = v.get<double>();
    else if (k == "femto_power_dbm")
      cfg.femto_power_dbm = v.get<double>();
    else if (k == "macro_power_indoor_dbm")
      cfg.macro_power_indoor_dbm = v.get<double>();
    else if (k == "n_cells")
      cfg.n_cells = v.get<int>();
    else if (k == "mean_isd_m")
      cfg.mean_isd_m = v.get<double>();
    else if (k == "area_size_m")
      cfg.area_size_m = v.get<double>();
    else if (k == "pico_power_dbm")
      cfg.pico_power_dbm = v.get<double>();
    else if (k == "macro_power_outdoor_dbm")
      cfg.macro_power_outdoor_dbm = v.get<double>();
    else if (k == "ues_per_cell")
      cfg.ues_per_cell_list = v.get<std::vector<int>>();
    else if (k == "tau")
      cfg.tau_list = v.get<std::vector<double>>();
    else if (k == "iterations")
      cfg.n_iterations = v.get<int>();
    else if (k == "seed")
      cfg.seed = v.get<std::uint64_t>();
    else if (k == "epsilon")
      cfg.epsilon = v.get<double>();
    else if (k == "delta_mui")
      cfg.delta_mui = v.get<double>();
    else if (k == "bandwidth_mhz")
      cfg.bandwidth_mhz = v.get<double>();
    else if (k == "noise_figure_db")
      cfg.noise_figure_db = v.get<double>();
    else if (k == "sinr_floor_db")
      cfg.sinr_floor_db = v.get<double>();
    else if (k == "pf_alpha")
      cfg.pf_alpha = v.get<double>();
    else if (k == "sigma_indoor_db")
      cfg.sigma_indoor_db = v.get<double>();
    else if (k == "sigma_outdoor_db")
      cfg.sigma_outdoor_db = v.get<double>();
    else if (k == "solver")
      cfg.solver = v.get<std::string>();
    else if (k == "workers")
      cfg.workers = v.get<int>();
    else if (k == "feedback_overhead_enabled")
      cfg.apply_feedback_overhead = v.get<bool>();
    else if (k == "feedback_overhead")
      cfg.feedback_overhead = v.get<double>();
    else if (k == "out_dir")
      cfg.out_dir = v.get<std::string>();
    else if (k == "femto_energy")
      cfg.femto_energy = parse_energy(v, "femto_energy", cfg.femto_energy);
    else if (k == "pico_energy")
      cfg.pico_energy = parse_energy(v, "pico_energy", cfg.pico_energy);
    else
      fail(k, "unknown key");
  }

  if (cfg.scenario != "dual_stripe" && cfg.scenario != "outdoor")
    fail("scenario", "must be dual_stripe or outdoor");
  if (cfg.dr <= 0.0 || cfg.dr > 1.0) fail("dr", "dr must be in (0,1]");
  if (cfg.n_cells < 1) fail("n_cells", "must be >= 1");
  if (cfg.ues_per_cell_list.empty()) fail("ues_per_cell", "must be non-empty");
  for (int u : cfg.ues_per_cell_list)
    if (u < 1) fail("ues_per_cell", "entries must be >= 1");
  if (cfg.tau_list.empty()) fail("tau", "must be non-empty");
  if (cfg.n_iterations < 1) fail("iterations", "must be >= 1");
  if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0)
    fail("epsilon", "must be in (0,1]");
  if (cfg.delta_mui < 0.0) fail("delta_mui", "must be >= 0");
  if (cfg.bandwidth_mhz <= 0.0) fail("bandwidth_mhz", "must be > 0");
  if (cfg.solver != "exact" && cfg.solver != "greedy")
    fail("solver", "must be exact or greedy");
  if (cfg.workers < 1) fail("workers", "must be >= 1");
  if (cfg.feedback_overhead < 0.0 || cfg.feedback_overhead >= 1.0)
    fail("feedback_overhead", "must be in [0,1)");
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = cfg.scenario;
  j["dr"] = cfg.dr;
  j["femto_power_dbm"] = cfg.femto_power_dbm;
  j["macro_power_indoor_dbm"] = cfg.macro_power_indoor_dbm;
  j["n_cells"] = cfg.n_cells;
  j["mean_isd_m"] = cfg.mean_isd_m;
  j["area_size_m"] = cfg.area_size_m;
  j["pico_power_dbm"] = cfg.pico_power_dbm;
  j["macro_power_outdoor_dbm"] = cfg.macro_power_outdoor_dbm;
  j["ues_per_cell"] = cfg.ues_per_cell_list;
  j["tau"] = cfg.tau_list;
  j["iterations"] = cfg.n_iterations;
  j["seed"] = cfg.seed;
  j["epsilon"] = cfg.epsilon;
  j["delta_mui"] = cfg.delta_mui;
  j["bandwidth_mhz"] = cfg.bandwidth_mhz;
  j["n_rb"] = cfg.n_rb();
  j["noise_figure_db"] = cfg.noise_figure_db;
  j["sinr_floor_db"] = cfg.sinr_floor_db;
  j["pf_alpha"] = cfg.pf_alpha;
  j["sigma_indoor_db"] = cfg.sigma_indoor_db;
  j["sigma_outdoor_db"] = cfg.sigma_outdoor_db;
  j["solver"] = cfg.solver;
  j["workers"] = cfg.workers;
  j["feedback_overhead_enabled"] = cfg.apply_feedback_overhead;
  j["feedback_overhead"] = cfg.feedback_overhead;
  j["out_dir"] = cfg.out_dir;
  auto energy_json = [](const energy::EnergyParams& p) {
    return nlohmann::json{{"p0", p.p0},
                          {"delta_p", p.delta_p},
                          {"p_max", p.p_max},
                          {"p_sleep", p.p_sleep},
                          {"n_t", p.n_t}};
  };
  j["femto_energy"] = energy_json(cfg.femto_energy);
  j["pico_energy"] = energy_json(cfg.pico_energy);
  return j;
}

}  // namespace scnet::cli
