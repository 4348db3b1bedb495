#ifndef SCNET_ENGINE_HPP
#define SCNET_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "scnet/config.hpp"

namespace scnet::engine {

struct SnapshotMetrics {
  double deactivated_fraction = 0.0;
  double power_before = 0.0;
  double power_after = 0.0;
  // spectral efficiency (bits/RB) averaged over the Reassigned UEs and their
  // Target UEs; NaN when no reassignment occurred
  double rue_tue_se_before = 0.0;
  double rue_tue_se_after = 0.0;
  double mu_rb_fraction = 0.0;        // post-reassignment TTIs
  double mean_ue_throughput = 0.0;    // bits per TTI per UE
  bool reassignment_occurred = false;
};

struct Stat {
  double mean = 0.0;
  double ci_half = 0.0;  // 1.96 * stderr; 0 when degenerate
  int count = 0;
};

struct RunSummary {
  std::string scenario;
  int ues_per_cell = 0;
  double tau = 0.0;
  int n_iterations = 0;
  std::uint64_t seed_base = 0;

  Stat deactivated_fraction;
  Stat power_before_w;
  Stat power_after_w;
  Stat power_saving_fraction;
  Stat se_before;        // over snapshots with a reassignment
  Stat se_after;
  Stat se_delta;
  Stat mu_rb_fraction;
  Stat reassignment_probability;
  Stat mean_ue_throughput;
};

// One deterministic snapshot: deployment, CSI, pre-TTIs, the five-step
// reassignment, post-TTIs, metrics.
SnapshotMetrics run_snapshot(const cli::RunConfig& cfg, int ues_per_cell,
                             double tau, std::uint64_t seed);

// Full grid sweep; seeds seed..seed+n-1 are shared across grid points.
std::vector<RunSummary> run_sweep(const cli::RunConfig& cfg);

}  // namespace scnet::engine

#endif
