#ifndef SCNET_SCHEDULER_HPP
#define SCNET_SCHEDULER_HPP

#include <map>
#include <vector>

#include "scnet/link_adaptation.hpp"

namespace scnet::sched {

struct UeSchedState {
  int ue_id = -1;
  double avg_throughput = 1e-6;  // exponentially averaged, floored
  la::CsiReport csi;             // serving-cell report
};

struct RbAllocation {
  bool mu = false;
  int ue_a = -1;
  int ue_b = -1;  // valid when mu
};

struct ScheduleDecision {
  std::vector<RbAllocation> per_rb;
  // realised rate per RB per UE; zero where the UE is not scheduled
  std::map<int, std::vector<double>> rate_per_rb;
};

double pf_metric(const UeSchedState& ue, double candidate_rate);

// Candidates whose quantised channel vector correlation with the anchor's is
// strictly below epsilon.
std::vector<int> semi_orthogonal_set(const UeSchedState& anchor,
                                     const std::vector<UeSchedState>& candidates,
                                     double epsilon);

// PF-modified SUS, one decision per RB: PF-best anchor, best semi-orthogonal
// partner, MU adopted iff the pair's summed PF metric beats the anchor's SU
// metric. Ties break to the lowest ue_id.
ScheduleDecision schedule_tti(const std::vector<UeSchedState>& attached_ues,
                              double epsilon,
                              const la::MuAdjustParams& mu_params);

// avg <- (1 - alpha) * avg + alpha * realised, floored at 1e-6.
void update_avg_throughput(UeSchedState& state, double realised_rate,
                           double alpha);

}  // namespace scnet::sched

#endif
