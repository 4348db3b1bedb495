#include "scnet/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "scnet/energy.hpp"
#include "scnet/link_adaptation.hpp"
#include "scnet/reassignment.hpp"
#include "scnet/rng.hpp"
#include "scnet/scenario.hpp"
#include "scnet/scheduler.hpp"

namespace scnet::engine {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-TTI channel access: block fading drawn on demand from counter-based
// substreams, cached for the lifetime of the view (one TTI).
class SnapshotView final : public la::ChannelView {
 public:
  SnapshotView(const scenario::Deployment& dep,
               const std::map<std::pair<int, int>, double>& amplitude,
               int n_rx, int n_tx, std::uint64_t seed, int channel_tti)
      : dep_(dep),
        amplitude_(amplitude),
        n_rx_(n_rx),
        n_tx_(n_tx),
        seed_(seed),
        tti_(channel_tti) {}

  MatrixC channel(int ue_id, int enb_id, int rb) const override {
    const int group = rb / 6;
    const auto key = std::make_tuple(ue_id, enb_id, group);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Rng rng(seed_, stream::kFading, static_cast<std::uint64_t>(ue_id),
            static_cast<std::uint64_t>(enb_id),
            static_cast<std::uint64_t>(group),
            static_cast<std::uint64_t>(tti_ + 1));
    MatrixC h = scenario::draw_fading(n_rx_, n_tx_,
                                      amplitude_.at({ue_id, enb_id}), rng);
    cache_.emplace(key, h);
    return h;
  }

  VectorC interferer_precoder(int enb_id) const override {
    Rng rng(seed_, stream::kInterfererPmi, static_cast<std::uint64_t>(enb_id),
            static_cast<std::uint64_t>(tti_ + 1));
    const auto& cb = phy::rel8_codebook_4tx();
    return cb[rng.uniform_index(cb.size())].vector;
  }

 private:
  const scenario::Deployment& dep_;
  const std::map<std::pair<int, int>, double>& amplitude_;
  int n_rx_, n_tx_;
  std::uint64_t seed_;
  int tti_;
  mutable std::map<std::tuple<int, int, int>, MatrixC> cache_;
};

std::map<std::pair<int, int>, double> link_amplitudes(
    const scenario::Deployment& dep, const cli::RunConfig& cfg,
    std::uint64_t seed) {
  const double sigma = dep.indoor ? cfg.sigma_indoor_db : cfg.sigma_outdoor_db;
  const int n_rb = cfg.n_rb();
  std::map<std::pair<int, int>, double> amp;
  auto add = [&](int ue_id, const Position& ue_pos, int enb_id,
                 const Position& enb_pos, double tx_power_w) {
    const double pl = scenario::pathloss(dep, enb_pos, ue_pos);
    const double sf = scenario::link_shadowing_db(seed, ue_id, enb_id, sigma);
    amp[{ue_id, enb_id}] =
        std::sqrt(tx_power_w / n_rb * db_to_linear(-(pl + sf)));
  };
  for (const auto& u : dep.ues) {
    for (const auto& c : dep.small_cells)
      add(u.id, u.pos, c.id, c.pos, c.max_tx_power_w);
    for (const auto& m : dep.macros)
      add(u.id, u.pos, m.id, m.pos, m.tx_power_w);
  }
  return amp;
}

struct TtiOutcome {
  std::map<int, double> se;    // per scheduled UE, bits/RB incl. layer factor
  std::map<int, double> bits;  // per UE, total bits this TTI
  long mu_rb = 0;
  long total_rb = 0;
};

TtiOutcome run_tti(const NetworkState& state, const la::ChannelView& view,
                   std::map<int, sched::UeSchedState>& sched_states,
                   const cli::RunConfig& cfg, double noise_var) {
  const int n_rb = cfg.n_rb();
  la::MuAdjustParams mu{cfg.delta_mui, 2};
  TtiOutcome out;
  for (const auto& u : state.ues) out.bits[u.id] = 0.0;

  for (const auto& cell : state.cells) {
    if (!cell.active || cell.attached_ues.empty()) continue;
    std::vector<sched::UeSchedState> ues;
    std::vector<int> ids = cell.attached_ues;
    std::sort(ids.begin(), ids.end());
    for (int ue_id : ids) {
      auto& s = sched_states[ue_id];
      s.ue_id = ue_id;
      s.csi =
          la::serving_cell_csi(ue_id, cell.id, state, view, n_rb, noise_var);
      ues.push_back(s);
    }
    const auto decision = sched::schedule_tti(ues, cfg.epsilon, mu);
    out.total_rb += n_rb;
    std::map<int, int> scheduled_rbs;
    std::map<int, double> se_sum;
    for (int rb = 0; rb < n_rb; ++rb) {
      const auto& alloc = decision.per_rb[rb];
      const int n_mu = alloc.mu ? 2 : 1;
      if (alloc.mu) ++out.mu_rb;
      for (int ue_id : {alloc.ue_a, alloc.ue_b}) {
        if (ue_id < 0) continue;
        const double rate = decision.rate_per_rb.at(ue_id)[rb];
        out.bits[ue_id] += rate;
        se_sum[ue_id] += n_mu * rate;
        scheduled_rbs[ue_id] += 1;
      }
    }
    for (const auto& [ue_id, n] : scheduled_rbs)
      out.se[ue_id] = se_sum[ue_id] / n;
  }

  // two-phase update: averages move only after all cells are scheduled
  for (const auto& u : state.ues)
    sched::update_avg_throughput(sched_states[u.id], out.bits[u.id],
                                 cfg.pf_alpha);
  return out;
}

scenario::Deployment make_deployment(const cli::RunConfig& cfg,
                                     std::uint64_t seed) {
  if (cfg.indoor()) {
    scenario::DualStripeOptions opt;
    opt.small_cell_power_dbm = cfg.femto_power_dbm;
    opt.macro_power_dbm = cfg.macro_power_indoor_dbm;
    return scenario::generate_dual_stripe(cfg.dr, seed, opt);
  }
  scenario::OutdoorOptions opt;
  opt.small_cell_power_dbm = cfg.pico_power_dbm;
  opt.macro_power_dbm = cfg.macro_power_outdoor_dbm;
  scenario::Rect area{0.0, 0.0, cfg.area_size_m, cfg.area_size_m};
  return scenario::generate_outdoor(cfg.n_cells, area, cfg.mean_isd_m, seed,
                                    opt);
}

}  // namespace

SnapshotMetrics run_snapshot(const cli::RunConfig& cfg, int ues_per_cell,
                             double tau, std::uint64_t seed) {
  auto dep = make_deployment(cfg, seed);

  scenario::AssignmentOptions aopt;
  aopt.ues_per_cell = ues_per_cell;
  aopt.n_tx_ports = cfg.n_tx;
  aopt.sigma_indoor_db = cfg.sigma_indoor_db;
  aopt.sigma_outdoor_db = cfg.sigma_outdoor_db;
  NetworkState state = scenario::initial_assignment(dep, aopt, seed);

  const auto amplitude = link_amplitudes(dep, cfg, seed);
  const double noise_var = cli::noise_var_per_rb(cfg);
  const int n_rb = cfg.n_rb();

  auto energy_of = [&](int cell_id) {
    for (const auto& c : dep.small_cells)
      if (c.id == cell_id)
        return c.cls == scenario::CellClass::kFemto ? cfg.femto_energy
                                                    : cfg.pico_energy;
    throw std::out_of_range("unknown cell id");
  };

  std::map<int, sched::UeSchedState> sched_states;
  for (const auto& u : state.ues) sched_states[u.id].ue_id = u.id;

  std::map<int, double> se_sum_before, se_sum_after;
  std::map<int, int> se_cnt_before, se_cnt_after;
  std::map<int, double> total_bits;
  long mu_rb_after = 0, total_rb_after = 0;

  for (int t = 0; t < cfg.n_tti_before; ++t) {
    SnapshotView view(dep, amplitude, cfg.n_rx, cfg.n_tx, seed, t - 1);
    const auto out = run_tti(state, view, sched_states, cfg, noise_var);
    for (const auto& [ue, se] : out.se) {
      se_sum_before[ue] += se;
      se_cnt_before[ue] += 1;
    }
    for (const auto& [ue, b] : out.bits) total_bits[ue] += b;
  }

  SnapshotMetrics m;
  m.power_before = energy::network_power(state, energy_of).first;

  // --- reassignment between the pre and post phases ---
  reassign::ReassignmentPlan plan;
  {
    SnapshotView view(dep, amplitude, cfg.n_rx, cfg.n_tx, seed,
                      cfg.n_tti_before - 1);
    reassign::RateTable rates;
    reassign::FeedbackTable feedback;
    la::MuAdjustParams params{cfg.delta_mui, 2};
    for (const auto& u : state.ues) {
      const auto csi = la::serving_cell_csi(u.id, u.serving_cell, state, view,
                                            n_rb, noise_var);
      rates.su_rate_serving[u.id] =
          la::expected_rate(u.id, u.serving_cell, 1, csi, params);
      rates.mu_rate_serving[u.id] =
          la::expected_rate(u.id, u.serving_cell, 2, csi, params);
      feedback.serving_pmi[u.id] = csi.pmi;
      feedback.wideband_su_cqi[u.id] = csi.wideband_su_cqi;
      for (const auto& c : state.cells) {
        if (!c.active || c.id == u.serving_cell) continue;
        const auto tcsi =
            la::target_cell_csi(u.id, c.id, state, view, n_rb, noise_var);
        rates.mu_rate_target[{u.id, c.id}] =
            la::expected_rate(u.id, c.id, 2, tcsi, params);
        feedback.target_pmi[{u.id, c.id}] = tcsi.pmi;
      }
    }

    const auto considered = reassign::select_considered_ues(
        state, rates, feedback, cfg.epsilon, tau);
    const auto targets = reassign::find_target_ues(
        state, considered, rates, feedback, cfg.epsilon,
        db_to_linear(cfg.sinr_floor_db), tau);
    const auto coverage = reassign::build_coverage_sets(state, targets);
    std::vector<int> active_cells;
    for (const auto& c : state.cells)
      if (c.active) active_cells.push_back(c.id);
    const auto cover =
        cfg.solver == "exact"
            ? reassign::solve_set_cover_exact(coverage, active_cells)
            : reassign::solve_set_cover_greedy(coverage, active_cells);
    plan = reassign::build_plan(state, cover, targets, rates);
    state = reassign::apply_plan(state, plan);
  }

  for (int t = cfg.n_tti_before; t < cfg.n_tti_before + cfg.n_tti_after; ++t) {
    SnapshotView view(dep, amplitude, cfg.n_rx, cfg.n_tx, seed, t - 1);
    const auto out = run_tti(state, view, sched_states, cfg, noise_var);
    for (const auto& [ue, se] : out.se) {
      se_sum_after[ue] += se;
      se_cnt_after[ue] += 1;
    }
    for (const auto& [ue, b] : out.bits) total_bits[ue] += b;
    mu_rb_after += out.mu_rb;
    total_rb_after += out.total_rb;
  }

  m.power_after = energy::network_power(state, energy_of).first;
  m.deactivated_fraction =
      static_cast<double>(plan.cells_to_sleep.size()) / state.cells.size();
  m.reassignment_occurred = !plan.moves.empty();
  m.mu_rb_fraction =
      total_rb_after > 0 ? static_cast<double>(mu_rb_after) / total_rb_after
                         : 0.0;

  if (m.reassignment_occurred) {
    std::set<int> members;
    for (const auto& mv : plan.moves) {
      members.insert(mv.ue_id);
      members.insert(mv.target_ue_id);
    }
    double before = 0.0, after = 0.0;
    for (int ue : members) {
      before += se_cnt_before[ue] > 0 ? se_sum_before[ue] / se_cnt_before[ue]
                                      : 0.0;
      after += se_cnt_after[ue] > 0 ? se_sum_after[ue] / se_cnt_after[ue] : 0.0;
    }
    m.rue_tue_se_before = before / members.size();
    m.rue_tue_se_after = after / members.size();
  } else {
    m.rue_tue_se_before = kNaN;
    m.rue_tue_se_after = kNaN;
  }

  double bits = 0.0;
  for (const auto& [ue, b] : total_bits) bits += b;
  const int n_tti = cfg.n_tti_before + cfg.n_tti_after;
  m.mean_ue_throughput = bits / (state.ues.size() * n_tti);
  return m;
}

namespace {

Stat make_stat(const std::vector<double>& xs) {
  Stat s;
  for (double x : xs)
    if (!std::isnan(x)) {
      s.mean += x;
      ++s.count;
    }
  if (s.count == 0) {
    s.mean = kNaN;
    return s;
  }
  s.mean /= s.count;
  if (s.count < 2) return s;
  double var = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) var += (x - s.mean) * (x - s.mean);
  var /= (s.count - 1);
  s.ci_half = 1.96 * std::sqrt(var / s.count);
  return s;
}

}  // namespace

std::vector<RunSummary> run_sweep(const cli::RunConfig& cfg) {
  std::vector<RunSummary> summaries;
  for (int upc : cfg.ues_per_cell_list) {
    for (double tau : cfg.tau_list) {
      const int n = cfg.n_iterations;
      std::vector<SnapshotMetrics> results(n);
      std::atomic<int> next{0};
      auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          results[i] = run_snapshot(cfg, upc, tau, cfg.seed + i);
      };
      const int n_workers = std::min(cfg.workers, n);
      if (n_workers <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }

      RunSummary s;
      s.scenario = cfg.scenario;
      s.ues_per_cell = upc;
      s.tau = tau;
      s.n_iterations = n;
      s.seed_base = cfg.seed;
      auto collect = [&](auto&& get) {
        std::vector<double> xs;
        xs.reserve(n);
        for (const auto& r : results) xs.push_back(get(r));
        return make_stat(xs);
      };
      s.deactivated_fraction =
          collect([](const auto& r) { return r.deactivated_fraction; });
      s.power_before_w = collect([](const auto& r) { return r.power_before; });
      s.power_after_w = collect([](const auto& r) { return r.power_after; });
      s.power_saving_fraction = collect([](const auto& r) {
        return energy::savings_report(r.power_before, r.power_after);
      });
      s.se_before = collect([](const auto& r) { return r.rue_tue_se_before; });
      s.se_after = collect([](const auto& r) { return r.rue_tue_se_after; });
      s.se_delta = collect([](const auto& r) {
        return r.rue_tue_se_after - r.rue_tue_se_before;
      });
      s.mu_rb_fraction =
          collect([](const auto& r) { return r.mu_rb_fraction; });
      s.reassignment_probability = collect(
          [](const auto& r) { return r.reassignment_occurred ? 1.0 : 0.0; });
      const double overhead_factor =
          cfg.apply_feedback_overhead ? 1.0 - cfg.feedback_overhead : 1.0;
      s.mean_ue_throughput = collect([&](const auto& r) {
        return overhead_factor * r.mean_ue_throughput;
      });
      summaries.push_back(std::move(s));
    }
  }
  return summaries;
}

}  // namespace scnet::engine
