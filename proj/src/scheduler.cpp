#include "scnet/scheduler.hpp"

#include <stdexcept>

namespace scnet::sched {

double pf_metric(const UeSchedState& ue, double candidate_rate) {
  if (ue.avg_throughput <= 0.0)
    throw std::invalid_argument("avg_throughput must be > 0");
  return candidate_rate / ue.avg_throughput;
}

std::vector<int> semi_orthogonal_set(const UeSchedState& anchor,
                                     const std::vector<UeSchedState>& candidates,
                                     double epsilon) {
  const auto& cb = phy::rel8_codebook_4tx();
  const auto anchor_q = phy::quantized_channel_vector(cb[anchor.csi.pmi]);
  std::vector<int> result;
  for (const auto& c : candidates) {
    if (c.ue_id == anchor.ue_id) continue;
    const auto q = phy::quantized_channel_vector(cb[c.csi.pmi]);
    if (phy::correlation(anchor_q, q) < epsilon) result.push_back(c.ue_id);
  }
  return result;
}

ScheduleDecision schedule_tti(const std::vector<UeSchedState>& attached_ues,
                              double epsilon,
                              const la::MuAdjustParams& mu_params) {
  if (attached_ues.empty())
    throw std::invalid_argument("no attached UEs to schedule");
  const int n_rb = static_cast<int>(attached_ues[0].csi.su_cqi_per_rb.size());

  la::MuAdjustParams mu = mu_params;
  mu.n_mu = 2;

  ScheduleDecision decision;
  decision.per_rb.resize(n_rb);
  for (const auto& u : attached_ues)
    decision.rate_per_rb[u.ue_id].assign(n_rb, 0.0);

  auto su_rate = [&](const UeSchedState& u, int rb) {
    return la::rate_from_sinr(u.csi.su_cqi_per_rb[rb]);
  };
  auto mu_rate = [&](const UeSchedState& u, int rb) {
    return la::rate_from_sinr(la::mu_cqi_adjust(u.csi.su_cqi_per_rb[rb], mu));
  };
  auto by_id = [&](int id) -> const UeSchedState& {
    for (const auto& u : attached_ues)
      if (u.ue_id == id) return u;
    throw std::logic_error("unknown ue in schedule");
  };

  for (int rb = 0; rb < n_rb; ++rb) {
    // step 1: PF-best anchor on SU rate
    const UeSchedState* anchor = nullptr;
    double best_pf = -1.0;
    for (const auto& u : attached_ues) {
      const double m = pf_metric(u, su_rate(u, rb));
      if (m > best_pf || (m == best_pf && anchor && u.ue_id < anchor->ue_id)) {
        best_pf = m;
        anchor = &u;
      }
    }
    const double anchor_su_pf = best_pf;

    // steps 2-3: best semi-orthogonal partner on MU rate
    const auto partners = semi_orthogonal_set(*anchor, attached_ues, epsilon);
    const UeSchedState* partner = nullptr;
    double partner_pf = -1.0;
    for (int id : partners) {
      const auto& u = by_id(id);
      const double m = pf_metric(u, mu_rate(u, rb));
      if (m > partner_pf ||
          (m == partner_pf && partner && id < partner->ue_id)) {
        partner_pf = m;
        partner = &u;
      }
    }

    // step 4: adopt MU iff the pair's summed PF metric beats SU
    bool adopt_mu = false;
    if (partner) {
      const double anchor_mu_pf = pf_metric(*anchor, mu_rate(*anchor, rb));
      adopt_mu = anchor_mu_pf + partner_pf > anchor_su_pf;
    }

    if (adopt_mu) {
      decision.per_rb[rb] = {true, anchor->ue_id, partner->ue_id};
      decision.rate_per_rb[anchor->ue_id][rb] = mu_rate(*anchor, rb);
      decision.rate_per_rb[partner->ue_id][rb] = mu_rate(*partner, rb);
    } else {
      decision.per_rb[rb] = {false, anchor->ue_id, -1};
      decision.rate_per_rb[anchor->ue_id][rb] = su_rate(*anchor, rb);
    }
  }
  return decision;
}

void update_avg_throughput(UeSchedState& state, double realised_rate,
                           double alpha) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha out of range");
  state.avg_throughput =
      std::max((1.0 - alpha) * state.avg_throughput + alpha * realised_rate,
               1e-6);
}

}  // namespace scnet::sched
