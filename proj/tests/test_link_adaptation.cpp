#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <utility>

#include "scnet/link_adaptation.hpp"
#include "scnet/rng.hpp"

using namespace scnet;
using namespace scnet::la;

namespace {

// Channel view backed by fixed per-(ue, enb) matrices; RB-independent.
class FixedView : public ChannelView {
 public:
  std::map<std::pair<int, int>, MatrixC> channels;
  std::map<int, int> pmis;

  MatrixC channel(int ue_id, int enb_id, int) const override {
    auto it = channels.find({ue_id, enb_id});
    if (it == channels.end()) return MatrixC::Zero(2, 4);
    return it->second;
  }
  VectorC interferer_precoder(int enb_id) const override {
    const auto& cb = phy::rel8_codebook_4tx();
    auto it = pmis.find(enb_id);
    return cb[it == pmis.end() ? 0 : it->second].vector;
  }
};

MatrixC random_channel(Rng& rng) {
  MatrixC h(2, 4);
  const double s = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) h(r, c) = Complex(s * rng.normal(), s * rng.normal());
  return h;
}

}  // namespace

TEST_CASE("quantize_cqi: nearest 1-dB grid point") {
  CHECK(quantize_cqi(std::pow(10.0, 1.44)) ==
        doctest::Approx(std::pow(10.0, 1.4)).epsilon(1e-12));
  CHECK(quantize_cqi(1e5) == doctest::Approx(1e3).epsilon(1e-12));  // 30 dB clip
  CHECK(quantize_cqi(1e-9) == doctest::Approx(0.1).epsilon(1e-12));  // -10 dB clip
  CHECK(quantize_cqi(0.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_WITH(quantize_cqi(-0.5), "invalid SINR");
}

TEST_CASE("quantize_cqi: idempotent and monotone") {
  Rng rng(5);
  double prev = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double x = std::pow(10.0, rng.uniform(-2.0, 4.0));
    const double q = quantize_cqi(x);
    CHECK(quantize_cqi(q) == doctest::Approx(q).epsilon(1e-12));
  }
  for (double db = -15.0; db <= 35.0; db += 0.1) {
    const double q = quantize_cqi(db_to_linear(db));
    CHECK(q >= prev - 1e-12);
    prev = q;
  }
}

TEST_CASE("mu_cqi_adjust: hand-evaluated two-layer value") {
  // 1/(2/10 + 0.05) computed by hand
  CHECK(mu_cqi_adjust(10.0, {0.05, 2}) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("mu_cqi_adjust: limits and monotonicity") {
  CHECK(mu_cqi_adjust(7.3, {0.05, 1}) == doctest::Approx(7.3).epsilon(1e-12));
  CHECK(mu_cqi_adjust(7.3, {0.0, 2}) == doctest::Approx(3.65).epsilon(1e-12));
  CHECK(mu_cqi_adjust(0.0, {0.05, 2}) == 0.0);

  double prev = 0.0;
  for (double x = 0.1; x < 100.0; x *= 1.3) {
    const double v = mu_cqi_adjust(x, {0.05, 2});
    CHECK(v > prev);
    CHECK(v <= x / 2.0 + 1e-15);
    prev = v;
  }
  CHECK(mu_cqi_adjust(10.0, {0.1, 2}) < mu_cqi_adjust(10.0, {0.05, 2}));
}

TEST_CASE("rate map: values and inverse") {
  CHECK(rate_from_sinr(0.0) == 0.0);
  CHECK(rate_from_sinr(1e6) == doctest::Approx(5.55).epsilon(1e-12));
  CHECK(rate_from_sinr(3.0) == doctest::Approx(1.5).epsilon(1e-12));
  for (double r = 0.0; r <= 5.55; r += 0.37)
    CHECK(rate_from_sinr(sinr_from_rate(r)) == doctest::Approx(r).epsilon(1e-12));
  double prev = -1.0;
  for (double db = -20.0; db <= 40.0; db += 0.25) {
    const double r = rate_from_sinr(db_to_linear(db));
    CHECK(r >= prev);
    CHECK(r <= 5.55 + 1e-15);
    prev = r;
  }
}

TEST_CASE("estimate_delta_mui: deterministic and near adopted value") {
  const double v1 = estimate_delta_mui(2000, 0.1, 1.0, 99);
  const double v2 = estimate_delta_mui(2000, 0.1, 1.0, 99);
  CHECK(v1 == v2);
  CHECK(v1 > 0.0);
  // adopted reference value 0.05, within a factor of 4
  CHECK(v1 > 0.05 / 4.0);
  CHECK(v1 < 0.05 * 4.0);
  CHECK(v1 < 0.2);
  CHECK_THROWS_WITH(estimate_delta_mui(500, 0.1, 1.0, 1), "n_samples too small");
  // the codebook contains exactly orthogonal pairs, so any valid epsilon > 0
  // admits a pairing; only out-of-range bounds are rejected
  CHECK_THROWS(estimate_delta_mui(2000, 0.0, 1.0, 1));
  CHECK_THROWS(estimate_delta_mui(2000, 1.0, -1.0, 1));
}

TEST_CASE("expected_rate: constant channel and report validation") {
  CsiReport csi;
  csi.ue_id = 3;
  csi.enb_id = 7;
  csi.su_cqi_per_rb.assign(50, 3.0);
  csi.wideband_su_cqi = 3.0;
  CHECK(expected_rate(3, 7, 1, csi, {}) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(expected_rate(3, 7, 2, csi, {0.05, 2}) <=
        expected_rate(3, 7, 1, csi, {0.05, 1}));
  CHECK_THROWS(expected_rate(4, 7, 1, csi, {}));
}

TEST_CASE("expected_rate: matches per-RB loop oracle") {
  Rng rng(17);
  CsiReport csi;
  csi.ue_id = 0;
  csi.enb_id = 0;
  for (int i = 0; i < 50; ++i)
    csi.su_cqi_per_rb.push_back(std::pow(10.0, rng.uniform(-1.0, 3.0)));
  const MuAdjustParams p{0.05, 2};
  double acc = 0.0;
  for (double c : csi.su_cqi_per_rb)
    acc += std::min(0.75 * std::log2(1.0 + 1.0 / (2.0 / c + 0.05)), 5.55);
  CHECK(expected_rate(0, 0, 2, csi, p) ==
        doctest::Approx(acc / 50.0).epsilon(1e-12));
}

TEST_CASE("SU/MU spectral-efficiency ordering across the SINR range") {
  // scan constant-CQI reports from -10 dB to 30 dB and compare
  // 2 * expected_rate(n_mu = 2) against expected_rate(n_mu = 1)
  auto mu_wins = [](double db, double delta) {
    CsiReport csi;
    csi.ue_id = 0;
    csi.enb_id = 0;
    csi.su_cqi_per_rb.assign(10, db_to_linear(db));
    const double su = expected_rate(0, 0, 1, csi, {delta, 1});
    const double mu2 = 2.0 * expected_rate(0, 0, 2, csi, {delta, 2});
    return mu2 > su;
  };

  // at the adopted delta = 0.05 the two-layer sum rate dominates everywhere:
  // the algebraic crossover c = (1 - 2d)/d^2 sits at 25.6 dB, but the SU
  // rate cap (5.55 from 22.3 dB up) removes it, so no flip occurs
  for (double db = -10.0; db <= 30.0; db += 0.5) CHECK(mu_wins(db, 0.05));

  // a crossover exists once the MUI floor bites harder: at delta = 0.3 the
  // ordering flips exactly once, MU below ~6.5 dB, SU above
  int flips = 0;
  bool prev = mu_wins(-10.0, 0.3);
  CHECK(prev);
  for (double db = -9.5; db <= 30.0; db += 0.5) {
    const bool w = mu_wins(db, 0.3);
    if (w != prev) ++flips;
    prev = w;
  }
  CHECK(flips == 1);
  CHECK(!prev);  // high-SINR end favours SU under strong residual MUI
}

TEST_CASE("serving_cell_csi: report shape and subband structure") {
  Rng rng(31);
  NetworkState state;
  state.cells = {{1, true, {10}}, {2, true, {11}}};
  state.macro_ids = {100};
  state.ues = {{10, 1}, {11, 2}};
  FixedView view;
  view.channels[{10, 1}] = random_channel(rng);
  view.channels[{10, 2}] = 0.1 * random_channel(rng);
  view.channels[{10, 100}] = 0.05 * random_channel(rng);

  const auto csi = serving_cell_csi(10, 1, state, view, 50, 0.01);
  CHECK(csi.ue_id == 10);
  CHECK(csi.enb_id == 1);
  CHECK(csi.su_cqi_per_rb.size() == 50);
  for (double c : csi.su_cqi_per_rb) {
    CHECK(c >= 0.0);
    CHECK(std::isfinite(c));
  }
  // RB-independent view: all subbands see the same channel, so CQI constant
  for (double c : csi.su_cqi_per_rb)
    CHECK(c == doctest::Approx(csi.su_cqi_per_rb[0]).epsilon(1e-12));
  CHECK(csi.wideband_su_cqi > 0.0);
}

TEST_CASE("target_cell_csi: exclusion of the original serving cell") {
  Rng rng(37);
  NetworkState state;
  state.cells = {{1, true, {10}}, {2, true, {11}}, {3, true, {12}}};
  state.ues = {{10, 1}, {11, 2}, {12, 3}};
  FixedView view;
  view.channels[{10, 1}] = random_channel(rng);   // original, strong
  view.channels[{10, 2}] = random_channel(rng);   // target
  view.channels[{10, 3}] = 0.3 * random_channel(rng);

  const auto with_orig_active = target_cell_csi(10, 2, state, view, 50, 0.01);

  // deactivate the original cell (and detach its UE) -> identical report
  NetworkState state2 = state;
  state2.cell(1).active = false;
  state2.cell(1).attached_ues.clear();
  state2.cell(3).attached_ues.push_back(10);
  state2.ue(10).serving_cell = 3;
  // keep serving exclusion comparable: compare against manual exclusion below
  const auto csi = with_orig_active;
  CHECK(csi.enb_id == 2);

  // oracle: rebuild the interferer set by hand for subband 0 — only cell 3
  const auto& cb = phy::rel8_codebook_4tx();
  phy::ChannelMatrix desired;
  desired.entries = view.channels[{10, 2}];
  const int pmi = phy::select_wideband_pmi({desired}, cb, 0.01);
  CHECK(pmi == csi.pmi);
  phy::InterfererSet intf;
  intf.push_back({view.channels[{10, 3}], view.interferer_precoder(3), true, 1.0});
  const auto g = phy::mmse_irc_filter(desired, cb[pmi], std::nullopt, intf, 0.01);
  const double sinr =
      phy::post_sinr(g, desired, cb[pmi], std::nullopt, intf, 0.01);
  CHECK(csi.su_cqi_per_rb[0] ==
        doctest::Approx(quantize_cqi(sinr)).epsilon(1e-12));
}

TEST_CASE("target_cell_csi: noise-limited with no other cells") {
  Rng rng(41);
  NetworkState state;
  state.cells = {{1, true, {10}}, {2, true, {}}};
  state.ues = {{10, 1}};
  FixedView view;
  view.channels[{10, 1}] = random_channel(rng);
  view.channels[{10, 2}] = random_channel(rng);
  const auto csi = target_cell_csi(10, 2, state, view, 50, 0.01);

  const auto& cb = phy::rel8_codebook_4tx();
  phy::ChannelMatrix desired;
  desired.entries = view.channels[{10, 2}];
  const double matched =
      (desired.entries * cb[csi.pmi].vector).squaredNorm() / 0.01;
  CHECK(csi.su_cqi_per_rb[0] ==
        doctest::Approx(quantize_cqi(matched)).epsilon(1e-9));
}

TEST_CASE("target_cell_csi: inactive target throws") {
  NetworkState state;
  state.cells = {{1, true, {10}}, {2, false, {}}};
  state.ues = {{10, 1}};
  FixedView view;
  CHECK_THROWS_WITH(target_cell_csi(10, 2, state, view, 50, 0.01),
                    "target asleep");
}
