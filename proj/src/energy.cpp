#include "scnet/energy.hpp"

#include <stdexcept>

namespace scnet::energy {

EnergyParams::EnergyParams(double p0_, double delta_p_, double p_max_,
                           double p_sleep_, int n_t_)
    : p0(p0_), delta_p(delta_p_), p_max(p_max_), p_sleep(p_sleep_), n_t(n_t_) {
  if (p0 < 0 || delta_p < 0 || p_max < 0 || p_sleep < 0 || n_t < 1)
    throw std::invalid_argument("energy parameters must be nonnegative");
  if (n_t * (p0 + delta_p * p_max) <= n_t * p_sleep)
    throw std::invalid_argument("active power must exceed sleep power");
}

double enb_power(const EnergyParams& params, bool active, double load_output) {
  if (load_output < 0.0 || load_output > params.p_max)
    throw std::invalid_argument("load_output outside [0, p_max]");
  if (!active) return params.n_t * params.p_sleep;
  return params.n_t * (params.p0 + params.delta_p * load_output);
}

std::pair<double, std::vector<double>> network_power(
    const NetworkState& state,
    const std::function<EnergyParams(int cell_id)>& params_of) {
  double total = 0.0;
  std::vector<double> per_cell;
  per_cell.reserve(state.cells.size());
  for (const auto& c : state.cells) {
    const EnergyParams p = params_of(c.id);
    const double w = enb_power(p, c.active, c.active ? p.p_max : 0.0);
    per_cell.push_back(w);
    total += w;
  }
  return {total, per_cell};
}

double savings_report(double before, double after) {
  if (before <= 0.0) throw std::invalid_argument("before must be > 0");
  return (before - after) / before;
}

}  // namespace scnet::energy
