#ifndef SCNET_LINK_ADAPTATION_HPP
#define SCNET_LINK_ADAPTATION_HPP

#include <cstdint>
#include <vector>

#include "scnet/network.hpp"
#include "scnet/phy.hpp"
#include "scnet/types.hpp"

namespace scnet::la {

struct CsiReport {
  int ue_id = -1;
  int enb_id = -1;
  int pmi = 0;                          // wideband
  std::vector<double> su_cqi_per_rb;    // linear SINR, one per RB
  double wideband_su_cqi = 0.0;         // linear SINR
};

struct MuAdjustParams {
  double delta_mui = 0.05;
  int n_mu = 2;
};

// Quantised SINR: snap to the nearest 1-dB step on [-10, 30] dB, returned in
// linear units. Throws on negative input.
double quantize_cqi(double sinr);

// MU-MIMO CQI from SU-MIMO CQI: power split across n_MU layers plus residual
// multi-user interference.
double mu_cqi_adjust(double cqi_su, const MuAdjustParams& params);

// Monte Carlo estimate of the mean residual MUI-to-signal ratio over Rayleigh
// channel draws, conditioned on codebook pairs whose quantised channel vectors
// have correlation below epsilon. Deterministic for a fixed seed.
double estimate_delta_mui(int n_samples, double epsilon, double noise_var,
                          std::uint64_t rng_seed);

// Attenuated-Shannon SINR-to-rate map, bits per symbol, capped at 5.55.
double rate_from_sinr(double sinr);

// Inverse of rate_from_sinr on [0, 5.55]; used for wideband effective SINR.
double sinr_from_rate(double rate);

// Mean over RBs of the (MU-adjusted) per-RB rate, bits per RB.
// Throws if the report does not belong to (ue_id, enb_id).
double expected_rate(int ue_id, int enb_id, int n_mu, const CsiReport& csi,
                     const MuAdjustParams& params);

// Channel access used by the CSI computations: entries carry transmit power
// per RB; interferer beams are the random-PMI SU precoders of that TTI.
class ChannelView {
 public:
  virtual ~ChannelView() = default;
  virtual MatrixC channel(int ue_id, int enb_id, int rb) const = 0;
  virtual VectorC interferer_precoder(int enb_id) const = 0;
};

// CSI for the UE's serving cell: interference from every other active small
// cell plus all macros.
CsiReport serving_cell_csi(int ue_id, int enb_id, const NetworkState& state,
                           const ChannelView& view, int n_rb,
                           double noise_var);

// CSI for a reassignment target cell: interference from all active eNBs
// except the target and except the UE's original serving cell; macros are
// always included. Throws "target asleep" for an inactive target.
CsiReport target_cell_csi(int ue_id, int target_enb, const NetworkState& state,
                          const ChannelView& view, int n_rb, double noise_var);

}  // namespace scnet::la

#endif
