#include "scnet/link_adaptation.hpp"

#include <cmath>
#include <stdexcept>

#include "scnet/rng.hpp"

namespace scnet::la {

namespace {
constexpr double kCqiMinDb = -10.0;
constexpr double kCqiMaxDb = 30.0;
constexpr double kRateSlope = 0.75;
constexpr double kRateCap = 5.55;
constexpr int kSubbandRbs = 6;  // CSI granularity matches fading blocks
}  // namespace

double quantize_cqi(double sinr) {
  if (sinr < 0.0 || !std::isfinite(sinr))
    throw std::invalid_argument("invalid SINR");
  double db = sinr > 0.0 ? linear_to_db(sinr) : kCqiMinDb;
  db = std::clamp(std::round(db), kCqiMinDb, kCqiMaxDb);
  return db_to_linear(db);
}

double mu_cqi_adjust(double cqi_su, const MuAdjustParams& params) {
  if (cqi_su < 0.0) throw std::invalid_argument("invalid SINR");
  if (params.delta_mui < 0.0 || params.n_mu < 1)
    throw std::invalid_argument("invalid MU adjust parameters");
  if (cqi_su == 0.0) return 0.0;
  return 1.0 / (params.n_mu / cqi_su + params.delta_mui * (params.n_mu - 1));
}

double rate_from_sinr(double sinr) {
  if (sinr < 0.0) throw std::invalid_argument("invalid SINR");
  return std::min(kRateSlope * std::log2(1.0 + sinr), kRateCap);
}

double sinr_from_rate(double rate) {
  rate = std::clamp(rate, 0.0, kRateCap);
  return std::exp2(rate / kRateSlope) - 1.0;
}

double estimate_delta_mui(int n_samples, double epsilon, double noise_var,
                          std::uint64_t rng_seed) {
  if (n_samples < 1000) throw std::invalid_argument("n_samples too small");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("epsilon out of range");
  if (noise_var <= 0.0) throw std::invalid_argument("noise_var must be > 0");

  const auto& cb = phy::rel8_codebook_4tx();
  // pairability precheck
  bool any_pair = false;
  for (std::size_t a = 0; a < cb.size() && !any_pair; ++a)
    for (std::size_t b = 0; b < cb.size(); ++b) {
      if (a == b) continue;
      if (phy::correlation(phy::quantized_channel_vector(cb[a]),
                           phy::quantized_channel_vector(cb[b])) < epsilon) {
        any_pair = true;
        break;
      }
    }
  if (!any_pair)
    throw std::invalid_argument("epsilon too small for codebook");

  Rng rng(rng_seed);
  double acc = 0.0;
  int accepted = 0;
  long attempts = 0;
  const long max_attempts = 1000L * n_samples;
  while (accepted < n_samples && attempts++ < max_attempts) {
    phy::ChannelMatrix h;
    h.entries = MatrixC(2, 4);
    const double s = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 4; ++c)
        h.entries(r, c) = Complex(s * rng.normal(), s * rng.normal());

    const int k = phy::select_wideband_pmi({h}, cb, noise_var);
    std::vector<int> partners;
    const auto qk = phy::quantized_channel_vector(cb[k]);
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (static_cast<int>(j) == k) continue;
      if (phy::correlation(qk, phy::quantized_channel_vector(cb[j])) < epsilon)
        partners.push_back(static_cast<int>(j));
    }
    if (partners.empty()) continue;
    const int j = partners[rng.uniform_index(partners.size())];

    const auto g = phy::mmse_irc_filter(h, cb[k], cb[j], {}, noise_var);
    const double sig = std::norm((g.vector * h.entries * cb[k].vector)(0));
    const double mui = std::norm((g.vector * h.entries * cb[j].vector)(0));
    if (sig > 0.0) {
      acc += mui / (2.0 * sig);
      ++accepted;
    }
  }
  if (accepted == 0) throw std::runtime_error("no valid samples drawn");
  return acc / accepted;
}

double expected_rate(int ue_id, int enb_id, int n_mu, const CsiReport& csi,
                     const MuAdjustParams& params) {
  if (csi.ue_id != ue_id || csi.enb_id != enb_id)
    throw std::invalid_argument("csi report does not match (ue, enb)");
  if (csi.su_cqi_per_rb.empty())
    throw std::invalid_argument("empty CQI report");
  MuAdjustParams p = params;
  p.n_mu = n_mu;
  double sum = 0.0;
  for (double cqi : csi.su_cqi_per_rb) sum += rate_from_sinr(mu_cqi_adjust(cqi, p));
  return sum / static_cast<double>(csi.su_cqi_per_rb.size());
}

namespace {

CsiReport compute_csi(int ue_id, int enb_id, const NetworkState& state,
                      const ChannelView& view, int n_rb, double noise_var,
                      int excluded_enb) {
  const auto& cb = phy::rel8_codebook_4tx();
  const int n_groups = (n_rb + kSubbandRbs - 1) / kSubbandRbs;

  std::vector<phy::ChannelMatrix> wideband;
  wideband.reserve(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    phy::ChannelMatrix ch;
    ch.entries = view.channel(ue_id, enb_id, g * kSubbandRbs);
    ch.ue_id = ue_id;
    ch.enb_id = enb_id;
    ch.rb_index = g * kSubbandRbs;
    wideband.push_back(std::move(ch));
  }
  const int pmi = phy::select_wideband_pmi(wideband, cb, noise_var);

  CsiReport report;
  report.ue_id = ue_id;
  report.enb_id = enb_id;
  report.pmi = pmi;
  report.su_cqi_per_rb.resize(n_rb);

  for (int g = 0; g < n_groups; ++g) {
    const int rb = g * kSubbandRbs;
    phy::InterfererSet interferers;
    for (const auto& c : state.cells) {
      if (!c.active || c.id == enb_id || c.id == excluded_enb) continue;
      interferers.push_back({view.channel(ue_id, c.id, rb),
                             view.interferer_precoder(c.id), true, 1.0});
    }
    for (int m : state.macro_ids) {
      interferers.push_back({view.channel(ue_id, m, rb),
                             view.interferer_precoder(m), true, 1.0});
    }
    const auto& desired = wideband[g];
    const auto filt = phy::mmse_irc_filter(desired, cb[pmi], std::nullopt,
                                           interferers, noise_var);
    const double sinr = phy::post_sinr(filt, desired, cb[pmi], std::nullopt,
                                       interferers, noise_var);
    const double cqi = quantize_cqi(sinr);
    for (int r = rb; r < std::min(rb + kSubbandRbs, n_rb); ++r)
      report.su_cqi_per_rb[r] = cqi;
  }

  // rate-domain averaging for the wideband effective CQI
  double mean_rate = 0.0;
  for (double cqi : report.su_cqi_per_rb) mean_rate += rate_from_sinr(cqi);
  mean_rate /= static_cast<double>(n_rb);
  report.wideband_su_cqi = sinr_from_rate(mean_rate);
  return report;
}

}  // namespace

CsiReport serving_cell_csi(int ue_id, int enb_id, const NetworkState& state,
                           const ChannelView& view, int n_rb,
                           double noise_var) {
  return compute_csi(ue_id, enb_id, state, view, n_rb, noise_var, -1);
}

CsiReport target_cell_csi(int ue_id, int target_enb, const NetworkState& state,
                          const ChannelView& view, int n_rb,
                          double noise_var) {
  if (!state.cell(target_enb).active)
    throw std::invalid_argument("target asleep");
  const int serving = state.ue(ue_id).serving_cell;
  if (serving == target_enb)
    throw std::invalid_argument("target equals serving cell");
  return compute_csi(ue_id, target_enb, state, view, n_rb, noise_var, serving);
}

}  // namespace scnet::la
