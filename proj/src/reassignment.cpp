#include "scnet/reassignment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scnet/phy.hpp"

namespace scnet::reassign {

namespace {

double precoder_correlation(int pmi_a, int pmi_b) {
  const auto& cb = phy::rel8_codebook_4tx();
  return phy::correlation(phy::quantized_channel_vector(cb[pmi_a]),
                          phy::quantized_channel_vector(cb[pmi_b]));
}

// I_{k,O}: another UE in the serving cell with a semi-orthogonal precoder.
bool has_in_cell_partner(const NetworkState& state, int ue_id,
                         const FeedbackTable& feedback, double epsilon) {
  const int serving = state.ue(ue_id).serving_cell;
  const int pmi_k = feedback.serving_pmi.at(ue_id);
  for (int other : state.cell(serving).attached_ues) {
    if (other == ue_id) continue;
    auto it = feedback.serving_pmi.find(other);
    if (it == feedback.serving_pmi.end()) continue;
    if (precoder_correlation(pmi_k, it->second) < epsilon) return true;
  }
  return false;
}

// Eq. 7 gain test for one (ue, cell) pair.
bool passes_gain_test(const RateTable& rates, int ue_id, int cell, double tau) {
  auto it = rates.mu_rate_target.find({ue_id, cell});
  if (it == rates.mu_rate_target.end()) return false;
  return 2.0 * it->second - rates.su_rate_serving.at(ue_id) > tau;
}

}  // namespace

std::vector<int> select_considered_ues(const NetworkState& state,
                                       const RateTable& rates,
                                       const FeedbackTable& feedback,
                                       double epsilon, double tau) {
  std::vector<int> considered;
  for (const auto& u : state.ues) {
    const bool partner = has_in_cell_partner(state, u.id, feedback, epsilon);
    const double r1 = rates.su_rate_serving.at(u.id);
    // removable: already capable of beneficial in-cell MU-MIMO
    if (partner && 2.0 * rates.mu_rate_serving.at(u.id) > r1) continue;
    bool gain = false;
    for (const auto& c : state.cells) {
      if (!c.active || c.id == u.serving_cell) continue;
      if (passes_gain_test(rates, u.id, c.id, tau)) {
        gain = true;
        break;
      }
    }
    if (gain) considered.push_back(u.id);
  }
  return considered;
}

TargetMap find_target_ues(const NetworkState& state,
                          const std::vector<int>& considered,
                          const RateTable& rates, const FeedbackTable& feedback,
                          double epsilon, double sinr_floor, double tau) {
  TargetMap result;
  for (int ue_id : considered) {
    const int serving = state.ue(ue_id).serving_cell;
    std::vector<std::pair<int, int>> targets;
    for (const auto& c : state.cells) {
      if (!c.active || c.id == serving) continue;
      if (!passes_gain_test(rates, ue_id, c.id, tau)) continue;
      auto pmi_it = feedback.target_pmi.find({ue_id, c.id});
      if (pmi_it == feedback.target_pmi.end()) continue;
      for (int cand : c.attached_ues) {
        auto cand_pmi = feedback.serving_pmi.find(cand);
        if (cand_pmi == feedback.serving_pmi.end()) continue;
        // only unpaired UEs can absorb a newcomer: with at most two
        // co-scheduled layers, a UE that already has an in-cell MU partner
        // is not available for pairing with the incoming UE
        if (has_in_cell_partner(state, cand, feedback, epsilon)) continue;
        if (precoder_correlation(pmi_it->second, cand_pmi->second) >= epsilon)
          continue;
        auto cqi = feedback.wideband_su_cqi.find(cand);
        if (cqi == feedback.wideband_su_cqi.end() || cqi->second < sinr_floor)
          continue;
        targets.emplace_back(c.id, cand);
      }
    }
    if (!targets.empty()) result[ue_id] = std::move(targets);
  }
  return result;
}

std::map<int, std::set<int>> build_coverage_sets(const NetworkState& state,
                                                 const TargetMap& reassignable) {
  std::map<int, std::set<int>> f;
  for (const auto& u : state.ues) {
    std::set<int>& cells = f[u.id];
    cells.insert(u.serving_cell);
    auto it = reassignable.find(u.id);
    if (it != reassignable.end())
      for (const auto& [cell, target_ue] : it->second) cells.insert(cell);
  }
  return f;
}

namespace {

struct CoverInstance {
  std::vector<int> cells;                       // ascending ids
  std::vector<std::vector<int>> covers;         // cell index -> ue indices
  std::vector<std::vector<int>> options;        // ue index -> cell indices
  int n_ues = 0;
};

CoverInstance make_instance(const std::map<int, std::set<int>>& coverage,
                            const std::vector<int>& cells) {
  CoverInstance inst;
  inst.cells = cells;
  std::sort(inst.cells.begin(), inst.cells.end());
  inst.covers.resize(inst.cells.size());
  std::map<int, int> cell_index;
  for (std::size_t i = 0; i < inst.cells.size(); ++i)
    cell_index[inst.cells[i]] = static_cast<int>(i);
  for (const auto& [ue, f] : coverage) {
    std::vector<int> opts;
    for (int c : f) {
      auto it = cell_index.find(c);
      if (it == cell_index.end())
        throw std::invalid_argument("coverage references unknown cell");
      opts.push_back(it->second);
      inst.covers[it->second].push_back(inst.n_ues);
    }
    std::sort(opts.begin(), opts.end());
    inst.options.push_back(std::move(opts));
    ++inst.n_ues;
  }
  return inst;
}

struct BnBState {
  const CoverInstance& inst;
  std::vector<bool> chosen;
  std::vector<int> cover_count;  // per ue, how many chosen cells cover it
  int n_uncovered;
  int n_chosen = 0;
  std::vector<int> best;         // chosen cell indices, sorted
  bool have_best = false;

  explicit BnBState(const CoverInstance& i)
      : inst(i),
        chosen(i.cells.size(), false),
        cover_count(i.n_ues, 0),
        n_uncovered(i.n_ues) {}

  bool lex_better(const std::vector<int>& a, const std::vector<int>& b) const {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      if (inst.cells[a[i]] != inst.cells[b[i]])
        return inst.cells[a[i]] < inst.cells[b[i]];
    }
    return a.size() < b.size();
  }

  void record() {
    std::vector<int> sel;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (chosen[i]) sel.push_back(static_cast<int>(i));
    if (!have_best || sel.size() < best.size() ||
        (sel.size() == best.size() && lex_better(sel, best))) {
      best = sel;
      have_best = true;
    }
  }

  void choose(int ci, int delta) {
    chosen[ci] = delta > 0;
    n_chosen += delta;
    for (int ue : inst.covers[ci]) {
      cover_count[ue] += delta;
      if (delta > 0 && cover_count[ue] == 1) --n_uncovered;
      if (delta < 0 && cover_count[ue] == 0) ++n_uncovered;
    }
  }

  void dfs() {
    if (n_uncovered == 0) {
      record();
      return;
    }
    if (have_best && n_chosen + 1 > static_cast<int>(best.size())) return;
    // cheap bound: every added cell covers at most max_cover new UEs
    std::size_t max_cover = 1;
    for (std::size_t i = 0; i < inst.covers.size(); ++i)
      if (!chosen[i]) max_cover = std::max(max_cover, inst.covers[i].size());
    const int lb = static_cast<int>(
        (n_uncovered + static_cast<int>(max_cover) - 1) /
        static_cast<int>(max_cover));
    if (have_best && n_chosen + lb > static_cast<int>(best.size())) return;

    // branch on the uncovered UE with the fewest options
    int pivot = -1;
    std::size_t fewest = SIZE_MAX;
    for (int ue = 0; ue < inst.n_ues; ++ue) {
      if (cover_count[ue] > 0) continue;
      if (inst.options[ue].size() < fewest) {
        fewest = inst.options[ue].size();
        pivot = ue;
      }
    }
    for (int ci : inst.options[pivot]) {
      if (chosen[ci]) continue;
      choose(ci, +1);
      dfs();
      choose(ci, -1);
    }
  }
};

}  // namespace

std::set<int> solve_set_cover_exact(
    const std::map<int, std::set<int>>& coverage,
    const std::vector<int>& cells) {
  const CoverInstance inst = make_instance(coverage, cells);
  if (inst.n_ues == 0) return {};
  BnBState bnb(inst);
  bnb.dfs();
  if (!bnb.have_best) throw std::logic_error("infeasible cover instance");
  std::set<int> result;
  for (int ci : bnb.best) result.insert(inst.cells[ci]);
  return result;
}

std::set<int> solve_set_cover_greedy(
    const std::map<int, std::set<int>>& coverage,
    const std::vector<int>& cells) {
  const CoverInstance inst = make_instance(coverage, cells);
  std::vector<bool> covered(inst.n_ues, false);
  int n_uncovered = inst.n_ues;
  std::set<int> result;
  while (n_uncovered > 0) {
    int best_cell = -1;
    int best_gain = 0;
    for (std::size_t i = 0; i < inst.cells.size(); ++i) {
      int gain = 0;
      for (int ue : inst.covers[i])
        if (!covered[ue]) ++gain;
      if (gain > best_gain) {  // ascending id order breaks ties low
        best_gain = gain;
        best_cell = static_cast<int>(i);
      }
    }
    if (best_cell < 0) throw std::logic_error("infeasible cover instance");
    result.insert(inst.cells[best_cell]);
    for (int ue : inst.covers[best_cell]) {
      if (!covered[ue]) {
        covered[ue] = true;
        --n_uncovered;
      }
    }
  }
  return result;
}

ReassignmentPlan build_plan(const NetworkState& state,
                            const std::set<int>& cover,
                            const TargetMap& reassignable,
                            const RateTable& rates) {
  ReassignmentPlan plan;
  for (const auto& c : state.cells) {
    if (!c.active || cover.count(c.id)) continue;
    plan.cells_to_sleep.push_back(c.id);
    for (int ue_id : c.attached_ues) {
      auto it = reassignable.find(ue_id);
      if (it == reassignable.end()) throw std::runtime_error("invalid cover");
      // best in-cover cell: highest expected MU rate, ties to lowest id
      int best_cell = -1;
      double best_rate = -1.0;
      for (const auto& [cell, target_ue] : it->second) {
        if (!cover.count(cell)) continue;
        const double r = rates.mu_rate_target.at({ue_id, cell});
        if (r > best_rate || (r == best_rate && cell < best_cell)) {
          best_rate = r;
          best_cell = cell;
        }
      }
      if (best_cell < 0) throw std::runtime_error("invalid cover");
      // best target UE there: highest current SU rate, ties to lowest id
      int best_target = -1;
      for (const auto& [cell, target_ue] : it->second) {
        if (cell != best_cell) continue;
        if (best_target < 0) {
          best_target = target_ue;
          continue;
        }
        const double r_new = rates.su_rate_serving.at(target_ue);
        const double r_old = rates.su_rate_serving.at(best_target);
        if (r_new > r_old || (r_new == r_old && target_ue < best_target))
          best_target = target_ue;
      }
      plan.moves.push_back({ue_id, c.id, best_cell, best_target});
    }
  }
  return plan;
}

NetworkState apply_plan(const NetworkState& state,
                        const ReassignmentPlan& plan) {
  // validate before mutating
  std::set<int> moved;
  for (const auto& m : plan.moves) {
    if (!moved.insert(m.ue_id).second)
      throw std::invalid_argument("invalid plan: duplicate ue in moves");
    if (state.ue(m.ue_id).serving_cell != m.from_cell)
      throw std::invalid_argument("invalid plan: stale serving cell");
    if (!state.cell(m.to_cell).active)
      throw std::invalid_argument("invalid plan: target inactive");
    if (std::count(plan.cells_to_sleep.begin(), plan.cells_to_sleep.end(),
                   m.to_cell))
      throw std::invalid_argument("invalid plan: target scheduled to sleep");
  }
  for (int cell_id : plan.cells_to_sleep) {
    for (int ue_id : state.cell(cell_id).attached_ues)
      if (!moved.count(ue_id))
        throw std::invalid_argument("invalid plan: sleeping cell not emptied");
  }

  NetworkState next = state;
  for (const auto& m : plan.moves) {
    auto& from = next.cell(m.from_cell).attached_ues;
    from.erase(std::remove(from.begin(), from.end(), m.ue_id), from.end());
    next.cell(m.to_cell).attached_ues.push_back(m.ue_id);
    next.ue(m.ue_id).serving_cell = m.to_cell;
  }
  for (int cell_id : plan.cells_to_sleep) next.cell(cell_id).active = false;
  next.check_invariants();
  return next;
}

std::string dump_plan(const ReassignmentPlan& plan) {
  std::ostringstream os;
  os << "moves:\n";
  for (const auto& m : plan.moves)
    os << "  ue " << m.ue_id << ": cell " << m.from_cell << " -> cell "
       << m.to_cell << " (target ue " << m.target_ue_id << ")\n";
  os << "sleep:";
  for (int c : plan.cells_to_sleep) os << ' ' << c;
  os << '\n';
  return os.str();
}

}  // namespace scnet::reassign
