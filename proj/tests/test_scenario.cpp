#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "scnet/scenario.hpp"

using namespace scnet;
using namespace scnet::scenario;

TEST_CASE("dual stripe: dr = 1 gives exactly 40 HeNBs") {
  const auto dep = generate_dual_stripe(1.0, 1);
  CHECK(dep.small_cells.size() == 40);
  CHECK(dep.indoor);
  CHECK(dep.buildings.size() == 2);
  for (const auto& c : dep.small_cells) {
    bool inside = false;
    for (const auto& b : dep.buildings) inside = inside || b.contains(c.pos);
    CHECK(inside);
  }
}

TEST_CASE("dual stripe: mean HeNB count near 40 * dr") {
  double total = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s)
    total += static_cast<double>(generate_dual_stripe(0.2, 1000 + s).small_cells.size());
  CHECK(total / n == doctest::Approx(8.0).epsilon(0.025));
}

TEST_CASE("dual stripe: deterministic and validated") {
  const auto a = generate_dual_stripe(0.3, 77);
  const auto b = generate_dual_stripe(0.3, 77);
  REQUIRE(a.small_cells.size() == b.small_cells.size());
  for (std::size_t i = 0; i < a.small_cells.size(); ++i) {
    CHECK(a.small_cells[i].pos.x == b.small_cells[i].pos.x);
    CHECK(a.small_cells[i].pos.y == b.small_cells[i].pos.y);
  }
  CHECK(a.macros.size() == 3);
  CHECK_THROWS_WITH(generate_dual_stripe(1.5, 1), "dr must be in (0,1]");
  CHECK_THROWS_WITH(generate_dual_stripe(0.0, 1), "dr must be in (0,1]");
}

TEST_CASE("outdoor: separation and macro ring") {
  const Rect area{0, 0, 250, 250};
  const auto dep = generate_outdoor(21, area, 37.0, 5);
  CHECK(dep.small_cells.size() == 21);
  CHECK(dep.macros.size() == 18);
  CHECK(!dep.indoor);
  for (std::size_t i = 0; i < dep.small_cells.size(); ++i) {
    CHECK(area.contains(dep.small_cells[i].pos));
    for (std::size_t j = i + 1; j < dep.small_cells.size(); ++j)
      CHECK(distance(dep.small_cells[i].pos, dep.small_cells[j].pos) >=
            0.7 * 37.0 - 1e-9);
  }
  const auto dep2 = generate_outdoor(21, area, 37.0, 5);
  for (std::size_t i = 0; i < dep.small_cells.size(); ++i)
    CHECK(dep.small_cells[i].pos.x == dep2.small_cells[i].pos.x);

  CHECK(generate_outdoor(1, area, 37.0, 9).small_cells.size() == 1);
  CHECK_THROWS_WITH(generate_outdoor(500, Rect{0, 0, 50, 50}, 37.0, 1),
                    "area too dense");
}

TEST_CASE("indoor pathloss: hand-evaluated values") {
  // empty wall list isolates the distance terms
  std::vector<WallSegment> no_walls;
  std::vector<Rect> bld = {{0, 0, 100, 20}};
  // 10 m fully indoors: 38.46 + 20*log10(10) + 0.7*10 = 65.46
  CHECK(pathloss_indoor({1, 5}, {11, 5}, no_walls, bld) ==
        doctest::Approx(65.46).epsilon(1e-12));
  // 1 m: 38.46 + 0 + 0.7
  CHECK(pathloss_indoor({1, 5}, {2, 5}, no_walls, bld) ==
        doctest::Approx(39.16).epsilon(1e-12));
  // below 1 m clamps the log-distance term
  CHECK(pathloss_indoor({1, 5}, {1.2, 5}, no_walls, bld) ==
        doctest::Approx(38.46 + 0.7 * 0.2).epsilon(1e-9));
}

TEST_CASE("indoor pathloss: wall additivity and symmetry") {
  std::vector<Rect> bld = {{0, 0, 100, 20}};
  std::vector<WallSegment> one_int = {{{5, 0}, {5, 20}, 5.0, false}};
  std::vector<WallSegment> one_ext = {{{5, 0}, {5, 20}, 10.0, true}};
  std::vector<WallSegment> none;
  const Position tx{1, 5}, rx{11, 5};
  CHECK(pathloss_indoor(tx, rx, one_int, bld) -
            pathloss_indoor(tx, rx, none, bld) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(pathloss_indoor(tx, rx, one_ext, bld) -
            pathloss_indoor(tx, rx, none, bld) ==
        doctest::Approx(10.0).epsilon(1e-12));
  CHECK(count_wall_crossings(tx, rx, one_int, false) ==
        count_wall_crossings(rx, tx, one_int, false));
}

TEST_CASE("dual stripe wall counts on a real deployment") {
  const auto dep = generate_dual_stripe(1.0, 3);
  // across one interior partition within a building
  CHECK(count_wall_crossings({5, 5}, {15, 5}, dep.walls, false) == 1);
  // across the inter-row partition
  CHECK(count_wall_crossings({5, 5}, {5, 15}, dep.walls, false) == 1);
  // street crossing between the buildings: 2 exterior walls
  CHECK(count_wall_crossings({5, 15}, {5, 35}, dep.walls, true) == 2);
}

TEST_CASE("outdoor pathloss: hand-evaluated values and monotonicity") {
  CHECK(pathloss_outdoor({0, 0}, {1000, 0}) ==
        doctest::Approx(140.7).epsilon(1e-12));
  CHECK(pathloss_outdoor({0, 0}, {100, 0}) ==
        doctest::Approx(104.0).epsilon(1e-12));
  double prev = 0.0;
  for (double d = 1.0; d < 2000.0; d *= 1.25) {
    const double pl = pathloss_outdoor({0, 0}, {d, 0});
    CHECK(pl >= prev);
    prev = pl;
  }
  // below ~3 m the free-space clip binds (NLOS extrapolation drops under it)
  CHECK(pathloss_outdoor({0, 0}, {1, 0}) ==
        doctest::Approx(38.46).epsilon(1e-9));
  // at 10 m the NLOS term already dominates: 140.7 - 2*36.7 = 67.3
  CHECK(pathloss_outdoor({0, 0}, {10, 0}) ==
        doctest::Approx(67.3).epsilon(1e-9));
}

TEST_CASE("shadowing: zero sigma, zero mean, std recovery") {
  Rng rng(123);
  CHECK(draw_shadowing(0.0, rng) == 0.0);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = draw_shadowing(4.0, rng);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double stdev = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.1);
  CHECK(stdev == doctest::Approx(4.0).epsilon(0.025));
}

TEST_CASE("fading: variance calibration, determinism, independence") {
  Rng rng(9);
  double acc = 0.0;
  const int n = 20000;  // 8 entries per draw
  for (int i = 0; i < n; ++i)
    acc += draw_fading(2, 4, 1.0, rng).squaredNorm() / 8.0;
  CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));

  Rng r1(5, stream::kFading, 1, 2, 3, 4);
  Rng r2(5, stream::kFading, 1, 2, 3, 4);
  CHECK((draw_fading(2, 4, 1.0, r1) - draw_fading(2, 4, 1.0, r2)).norm() == 0.0);

  // entries from different TTI keys are uncorrelated
  double corr = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Rng ra(5, stream::kFading, 1, 2, 3, static_cast<std::uint64_t>(i));
    Rng rb(5, stream::kFading, 1, 2, 3, static_cast<std::uint64_t>(i) + 10000);
    corr += draw_fading(1, 1, 1.0, ra)(0, 0).real() *
            draw_fading(1, 1, 1.0, rb)(0, 0).real();
  }
  CHECK(std::abs(corr / 10000.0 / 0.5) < 0.05);
}

TEST_CASE("rsrp: decreasing in pathloss, scale-invariant argmax") {
  auto dep = generate_dual_stripe(1.0, 11);
  const Position ue{5, 5};
  const auto& near = dep.small_cells[0];
  double base = rsrp(dep, ue, 0.0, near, 4);
  CHECK(base > 0.0);
  // +10 dB shadowing attenuates by 10x
  CHECK(rsrp(dep, ue, 10.0, near, 4) == doctest::Approx(base / 10.0).epsilon(1e-12));

  AssignmentOptions opt;
  opt.ues_per_cell = 1;
  auto dep_scaled = dep;
  for (auto& c : dep_scaled.small_cells) c.max_tx_power_w *= 3.7;
  const auto s1 = initial_assignment(dep, opt, 42);
  const auto s2 = initial_assignment(dep_scaled, opt, 42);
  REQUIRE(s1.ues.size() == s2.ues.size());
  for (std::size_t i = 0; i < s1.ues.size(); ++i)
    CHECK(s1.ues[i].serving_cell == s2.ues[i].serving_cell);
}

TEST_CASE("initial assignment: quotas, invariants, determinism") {
  auto dep = generate_dual_stripe(0.4, 21);
  AssignmentOptions opt;
  opt.ues_per_cell = 2;
  const auto state = initial_assignment(dep, opt, 7);
  state.check_invariants();
  CHECK(state.ues.size() == 2 * dep.small_cells.size());
  for (const auto& c : state.cells) {
    CHECK(c.active);
    CHECK(c.attached_ues.size() == 2);
  }
  CHECK(dep.ues.size() == state.ues.size());

  auto dep2 = generate_dual_stripe(0.4, 21);
  const auto state2 = initial_assignment(dep2, opt, 7);
  for (std::size_t i = 0; i < dep.ues.size(); ++i) {
    CHECK(dep.ues[i].pos.x == dep2.ues[i].pos.x);
    CHECK(state.ues[i].serving_cell == state2.ues[i].serving_cell);
  }
}

TEST_CASE("initial assignment: every UE is on its max-RSRP cell") {
  auto dep = generate_dual_stripe(0.5, 33);
  AssignmentOptions opt;
  const auto state = initial_assignment(dep, opt, 13);
  for (const auto& u : dep.ues) {
    int best = -1;
    double best_rsrp = -1.0;
    for (const auto& c : dep.small_cells) {
      const double sf = link_shadowing_db(13, u.id, c.id, opt.sigma_indoor_db);
      const double p = rsrp(dep, u.pos, sf, c, opt.n_tx_ports);
      if (p > best_rsrp) {
        best_rsrp = p;
        best = c.id;
      }
    }
    CHECK(state.ue(u.id).serving_cell == best);
  }
}

TEST_CASE("scenario dump: parseable content") {
  auto dep = generate_dual_stripe(1.0, 2);
  AssignmentOptions opt;
  initial_assignment(dep, opt, 2);
  const std::string dump = dump_scenario(dep);
  CHECK(dump.find("\"small_cells\"") != std::string::npos);
  CHECK(dump.find("\"walls\"") != std::string::npos);
  CHECK(dump.find("\"ues\"") != std::string::npos);
  CHECK(dump.find("\"power_dbm\"") != std::string::npos);
}
