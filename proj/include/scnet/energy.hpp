#ifndef SCNET_ENERGY_HPP
#define SCNET_ENERGY_HPP

#include <functional>
#include <utility>
#include <vector>

#include "scnet/network.hpp"

namespace scnet::energy {

// EARTH-style per-eNB input-power parameters, per antenna chain.
struct EnergyParams {
  double p0 = 0.0;       // watts at zero RF output
  double delta_p = 0.0;  // slope
  double p_max = 0.0;    // max RF output per chain, watts
  double p_sleep = 0.0;  // idle consumption per chain, watts
  int n_t = 4;

  EnergyParams() = default;
  EnergyParams(double p0_, double delta_p_, double p_max_, double p_sleep_,
               int n_t_);
};

inline EnergyParams femto_defaults() { return {2.4, 4.0, 0.025, 1.45, 4}; }
inline EnergyParams pico_defaults() { return {3.4, 8.0, 0.065, 2.15, 4}; }

// Input power of one eNB: N_t (P0 + dP * P_out) when active, N_t * P_sleep
// when idle. Throws when load_output exceeds p_max.
double enb_power(const EnergyParams& params, bool active, double load_output);

// Total and per-cell input power over the small cells; macros are
// interference sources only and excluded. Active cells run at full load.
std::pair<double, std::vector<double>> network_power(
    const NetworkState& state,
    const std::function<EnergyParams(int cell_id)>& params_of);

// (before - after) / before
double savings_report(double before, double after);

}  // namespace scnet::energy

#endif
