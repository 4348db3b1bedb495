#ifndef SCNET_CONFIG_HPP
#define SCNET_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "scnet/energy.hpp"

namespace scnet::cli {

inline constexpr const char* kSchemaVersion = "scnet-results-1";

// Full simulation configuration; defaults reproduce the reference setup
// (10 MHz, DR 0.2 indoor, 21-cell outdoor, epsilon 0.1, delta_MUI 0.05).
struct RunConfig {
  std::string scenario = "dual_stripe";  // dual_stripe | outdoor

  // indoor
  double dr = 0.2;
  double femto_power_dbm = 20.0;
  double macro_power_indoor_dbm = 46.0;

  // outdoor
  int n_cells = 21;
  double mean_isd_m = 37.0;
  double area_size_m = 250.0;
  double pico_power_dbm = 24.0;
  double macro_power_outdoor_dbm = 43.0;

  std::vector<int> ues_per_cell_list = {1};
  std::vector<double> tau_list = {-1.5};
  int n_iterations = 100;
  std::uint64_t seed = 1;

  double epsilon = 0.1;
  double delta_mui = 0.05;
  double bandwidth_mhz = 10.0;  // 5 RB per MHz
  double noise_figure_db = 9.0;
  double sinr_floor_db = 0.0;   // target-UE minimum wideband SU SINR
  double pf_alpha = 0.02;
  double sigma_indoor_db = 4.0;
  double sigma_outdoor_db = 8.0;
  int n_rx = 2;
  int n_tx = 4;
  int n_tti_before = 5;
  int n_tti_after = 5;

  energy::EnergyParams femto_energy = energy::femto_defaults();
  energy::EnergyParams pico_energy = energy::pico_defaults();

  std::string solver = "exact";  // exact | greedy
  int workers = 1;
  bool apply_feedback_overhead = false;
  double feedback_overhead = 0.3115;
  std::string out_dir = "out";

  int n_rb() const { return static_cast<int>(bandwidth_mhz * 5.0 + 0.5); }
  bool indoor() const { return scenario == "dual_stripe"; }
};

// Thermal noise power per RB (180 kHz) including the receiver noise figure.
double noise_var_per_rb(const RunConfig& cfg);

// Validated config from a JSON document; unknown keys and out-of-range
// values raise errors naming the key.
RunConfig parse_config(const nlohmann::json& doc);

nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace scnet::cli

#endif
