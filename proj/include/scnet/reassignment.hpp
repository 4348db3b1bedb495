#ifndef SCNET_REASSIGNMENT_HPP
#define SCNET_REASSIGNMENT_HPP

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scnet/network.hpp"

namespace scnet::reassign {

// Expected spectral-efficiency inputs to the mechanism. Rates are per-UE mean
// rates per RB; two-layer MU spectral efficiency is 2x the stored MU rate.
struct RateTable {
  std::unordered_map<int, double> su_rate_serving;          // r1 bar, serving
  std::unordered_map<int, double> mu_rate_serving;          // r2 bar, serving
  std::map<std::pair<int, int>, double> mu_rate_target;     // (ue, cell) -> r2 bar
};

struct FeedbackTable {
  std::unordered_map<int, int> serving_pmi;
  std::map<std::pair<int, int>, int> target_pmi;        // (ue, cell)
  std::unordered_map<int, double> wideband_su_cqi;      // serving, linear
};

struct Move {
  int ue_id = -1;
  int from_cell = -1;
  int to_cell = -1;
  int target_ue_id = -1;
};

struct ReassignmentPlan {
  std::vector<Move> moves;
  std::vector<int> cells_to_sleep;
};

// ue -> list of (target cell, target ue); only Reassignable UEs appear.
using TargetMap = std::map<int, std::vector<std::pair<int, int>>>;

// Step A: UEs not removable by the in-cell MU test and expecting a gain above
// tau (strict) in at least one neighbouring cell.
std::vector<int> select_considered_ues(const NetworkState& state,
                                       const RateTable& rates,
                                       const FeedbackTable& feedback,
                                       double epsilon, double tau);

// Step B: per considered UE, target UEs in each neighbouring cell that passes
// the tau gain test: semi-orthogonal serving precoder and wideband SU SINR at
// or above sinr_floor.
TargetMap find_target_ues(const NetworkState& state,
                          const std::vector<int>& considered,
                          const RateTable& rates, const FeedbackTable& feedback,
                          double epsilon, double sinr_floor, double tau);

// f(k): serving cell plus any target cells with a target UE.
std::map<int, std::set<int>> build_coverage_sets(const NetworkState& state,
                                                 const TargetMap& reassignable);

// Minimum-cardinality cover; lexicographically smallest cell-id set among
// optima. Branch-and-bound, exact.
std::set<int> solve_set_cover_exact(
    const std::map<int, std::set<int>>& coverage, const std::vector<int>& cells);

// Classic greedy cover: most uncovered UEs first, ties to the lowest id.
std::set<int> solve_set_cover_greedy(
    const std::map<int, std::set<int>>& coverage, const std::vector<int>& cells);

// Steps C-D: move every UE of each uncovered cell to its best in-cover target
// cell (highest expected MU rate, ties to the lowest cell id).
ReassignmentPlan build_plan(const NetworkState& state,
                            const std::set<int>& cover,
                            const TargetMap& reassignable,
                            const RateTable& rates);

// Step E: apply moves and deactivate emptied cells. Throws on an invalid
// plan, leaving the input untouched.
NetworkState apply_plan(const NetworkState& state, const ReassignmentPlan& plan);

// Audit-log record: move list plus sleep list.
std::string dump_plan(const ReassignmentPlan& plan);

}  // namespace scnet::reassign

#endif
