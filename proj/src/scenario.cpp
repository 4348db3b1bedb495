#include "scnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace scnet::scenario {

namespace {

constexpr double kApartment = 10.0;
constexpr int kApartmentsPerRow = 10;
constexpr int kMacroIdBase = 1000;

double cross(const Position& o, const Position& a, const Position& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool proper_intersect(const Position& p1, const Position& p2,
                      const Position& p3, const Position& p4) {
  const double d1 = cross(p3, p4, p1);
  const double d2 = cross(p3, p4, p2);
  const double d3 = cross(p1, p2, p3);
  const double d4 = cross(p1, p2, p4);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double clipped_length(const Position& a, const Position& b, const Rect& r) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double t0 = 0.0, t1 = 1.0;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double t = q / p;
    if (p < 0.0) {
      if (t > t1) return false;
      if (t > t0) t0 = t;
    } else {
      if (t < t0) return false;
      if (t < t1) t1 = t;
    }
    return true;
  };
  if (clip(-dx, a.x - r.x0) && clip(dx, r.x1 - a.x) && clip(-dy, a.y - r.y0) &&
      clip(dy, r.y1 - a.y) && t1 >= t0)
    return (t1 - t0) * std::hypot(dx, dy);
  return 0.0;
}

void add_building_walls(Deployment& dep, const Rect& b) {
  auto wall = [&](double x0, double y0, double x1, double y1, double loss,
                  bool ext) {
    dep.walls.push_back({{x0, y0}, {x1, y1}, loss, ext});
  };
  // perimeter
  wall(b.x0, b.y0, b.x1, b.y0, 10.0, true);
  wall(b.x1, b.y0, b.x1, b.y1, 10.0, true);
  wall(b.x1, b.y1, b.x0, b.y1, 10.0, true);
  wall(b.x0, b.y1, b.x0, b.y0, 10.0, true);
  // interior partitions
  for (int i = 1; i < kApartmentsPerRow; ++i)
    wall(b.x0 + i * kApartment, b.y0, b.x0 + i * kApartment, b.y1, 5.0, false);
  wall(b.x0, (b.y0 + b.y1) / 2.0, b.x1, (b.y0 + b.y1) / 2.0, 5.0, false);
}

}  // namespace

Deployment generate_dual_stripe(double dr, std::uint64_t rng_seed,
                                const DualStripeOptions& opt) {
  if (dr <= 0.0 || dr > 1.0)
    throw std::invalid_argument("dr must be in (0,1]");

  Deployment dep;
  dep.indoor = true;
  const double width = kApartmentsPerRow * kApartment;
  dep.buildings = {{0.0, 0.0, width, 2 * kApartment},
                   {0.0, 3 * kApartment, width, 5 * kApartment}};
  dep.drop_regions = dep.buildings;
  for (const auto& b : dep.buildings) add_building_walls(dep, b);

  Rng rng(rng_seed, stream::kDeployment);
  const double power_w = dbm_to_watts(opt.small_cell_power_dbm);
  for (int attempt = 0; attempt < 1000 && dep.small_cells.empty(); ++attempt) {
    int id = 0;
    for (const auto& b : dep.buildings) {
      for (int row = 0; row < 2; ++row) {
        for (int col = 0; col < kApartmentsPerRow; ++col) {
          const bool occupied = rng.uniform() < dr;
          if (!occupied) continue;
          const double margin = 0.5;
          Position p{b.x0 + col * kApartment +
                         rng.uniform(margin, kApartment - margin),
                     b.y0 + row * kApartment +
                         rng.uniform(margin, kApartment - margin)};
          dep.small_cells.push_back({id++, p, power_w, CellClass::kFemto});
        }
      }
    }
  }
  if (dep.small_cells.empty())
    throw std::runtime_error("no HeNB deployed after bounded redraws");

  const Position macro_pos = opt.macro_offset;
  const double macro_w = dbm_to_watts(opt.macro_power_dbm);
  for (int s = 0; s < opt.macro_sectors; ++s)
    dep.macros.push_back({kMacroIdBase + s, macro_pos, macro_w});

  dep.bounds = {std::min(-10.0, macro_pos.x - 10.0),
                std::min(-10.0, macro_pos.y - 10.0),
                std::max(width + 10.0, macro_pos.x + 10.0),
                std::max(5 * kApartment + 10.0, macro_pos.y + 10.0)};
  return dep;
}

Deployment generate_outdoor(int n_cells, const Rect& area, double mean_isd,
                            std::uint64_t rng_seed, const OutdoorOptions& opt) {
  if (n_cells < 1) throw std::invalid_argument("n_cells must be >= 1");

  Deployment dep;
  dep.indoor = false;
  dep.bounds = area;
  dep.drop_regions = {area};

  Rng rng(rng_seed, stream::kDeployment);
  const double min_sep = 0.7 * mean_isd;
  const double power_w = dbm_to_watts(opt.small_cell_power_dbm);
  const int max_attempts = 2000 * n_cells;
  int attempts = 0;
  while (static_cast<int>(dep.small_cells.size()) < n_cells) {
    if (attempts++ > max_attempts) throw std::runtime_error("area too dense");
    Position p{rng.uniform(area.x0, area.x1), rng.uniform(area.y0, area.y1)};
    bool ok = true;
    for (const auto& c : dep.small_cells) {
      if (distance(c.pos, p) < min_sep) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const int id = static_cast<int>(dep.small_cells.size());
    dep.small_cells.push_back({id, p, power_w, CellClass::kPico});
  }

  const Position center{(area.x0 + area.x1) / 2.0, (area.y0 + area.y1) / 2.0};
  const double macro_w = dbm_to_watts(opt.macro_power_dbm);
  int macro_id = kMacroIdBase;
  for (int s = 0; s < opt.macro_sites; ++s) {
    const double ang = 2.0 * M_PI * s / opt.macro_sites;
    Position p{center.x + opt.macro_ring_radius * std::cos(ang),
               center.y + opt.macro_ring_radius * std::sin(ang)};
    for (int sec = 0; sec < 3; ++sec)
      dep.macros.push_back({macro_id++, p, macro_w});
  }
  return dep;
}

int count_wall_crossings(const Position& tx, const Position& rx,
                         const std::vector<WallSegment>& walls,
                         bool exterior_only) {
  int n = 0;
  for (const auto& w : walls) {
    if (w.exterior != exterior_only) continue;
    if (proper_intersect(tx, rx, w.a, w.b)) ++n;
  }
  return n;
}

double pathloss_indoor(const Position& tx, const Position& rx,
                       const std::vector<WallSegment>& walls,
                       const std::vector<Rect>& buildings) {
  const double d = std::max(distance(tx, rx), 1.0);
  double d_indoor = 0.0;
  for (const auto& b : buildings) d_indoor += clipped_length(tx, rx, b);
  const int n_int = count_wall_crossings(tx, rx, walls, false);
  const int n_ext = count_wall_crossings(tx, rx, walls, true);
  return 38.46 + 20.0 * std::log10(d) + 0.7 * d_indoor + 5.0 * n_int +
         10.0 * n_ext;
}

double pathloss_outdoor(const Position& tx, const Position& rx) {
  const double d = std::max(distance(tx, rx), 0.1);
  const double model = 140.7 + 36.7 * std::log10(d / 1000.0);
  const double free_space = 20.0 * std::log10(d) + 38.46;  // 2 GHz
  return std::max(model, free_space);
}

double pathloss(const Deployment& dep, const Position& tx, const Position& rx) {
  return dep.indoor ? pathloss_indoor(tx, rx, dep.walls, dep.buildings)
                    : pathloss_outdoor(tx, rx);
}

double draw_shadowing(double sigma_db, Rng& rng) {
  return sigma_db * rng.normal();
}

MatrixC draw_fading(int n_r, int n_t, double amplitude, Rng& rng) {
  MatrixC h(n_r, n_t);
  const double s = amplitude / std::sqrt(2.0);
  for (int r = 0; r < n_r; ++r)
    for (int c = 0; c < n_t; ++c)
      h(r, c) = Complex(s * rng.normal(), s * rng.normal());
  return h;
}

double link_shadowing_db(std::uint64_t snapshot_seed, int ue_id, int enb_id,
                         double sigma_db) {
  Rng rng(snapshot_seed, stream::kShadowing,
          static_cast<std::uint64_t>(ue_id),
          static_cast<std::uint64_t>(enb_id));
  return draw_shadowing(sigma_db, rng);
}

double rsrp(const Deployment& dep, const Position& ue_pos, double shadow_db,
            const SmallCellSite& cell, int n_tx_ports) {
  const double per_port = cell.max_tx_power_w / n_tx_ports;
  const double pl = pathloss(dep, cell.pos, ue_pos);
  return per_port * db_to_linear(-(pl + shadow_db));
}

NetworkState initial_assignment(Deployment& dep, const AssignmentOptions& opt,
                                std::uint64_t snapshot_seed) {
  if (opt.ues_per_cell < 1)
    throw std::invalid_argument("ues_per_cell must be >= 1");
  const double sigma =
      dep.indoor ? opt.sigma_indoor_db : opt.sigma_outdoor_db;

  double total_area = 0.0;
  for (const auto& r : dep.drop_regions)
    total_area += (r.x1 - r.x0) * (r.y1 - r.y0);

  Rng rng(snapshot_seed, stream::kUeDrop);
  auto random_position = [&]() {
    double pick = rng.uniform() * total_area;
    for (const auto& r : dep.drop_regions) {
      const double a = (r.x1 - r.x0) * (r.y1 - r.y0);
      if (pick <= a || &r == &dep.drop_regions.back())
        return Position{rng.uniform(r.x0, r.x1), rng.uniform(r.y0, r.y1)};
      pick -= a;
    }
    return Position{};  // unreachable
  };

  dep.ues.clear();
  NetworkState state;
  for (const auto& c : dep.small_cells)
    state.cells.push_back({c.id, true, {}});
  for (const auto& m : dep.macros) state.macro_ids.push_back(m.id);

  int ue_id = 0;
  for (const auto& cell : dep.small_cells) {
    for (int slot = 0; slot < opt.ues_per_cell; ++slot, ++ue_id) {
      std::vector<double> shadow(dep.small_cells.size());
      for (std::size_t i = 0; i < dep.small_cells.size(); ++i)
        shadow[i] = link_shadowing_db(snapshot_seed, ue_id,
                                      dep.small_cells[i].id, sigma);
      bool placed = false;
      for (int attempt = 0; attempt < opt.max_redraws_per_ue; ++attempt) {
        Position pos;
        if (attempt < opt.max_redraws_per_ue / 2) {
          pos = random_position();
        } else {
          // the cell's own neighbourhood always wins on RSRP, so shrink a
          // sampling disc around the site until a valid drop lands
          const int local = attempt - opt.max_redraws_per_ue / 2;
          const double radius = 30.0 * std::pow(0.5, local / 250);
          const double ang = rng.uniform(0.0, 2.0 * M_PI);
          const double r = radius * std::sqrt(rng.uniform());
          pos = {cell.pos.x + r * std::cos(ang), cell.pos.y + r * std::sin(ang)};
          bool in_region = false;
          for (const auto& reg : dep.drop_regions)
            in_region = in_region || reg.contains(pos);
          if (!in_region) continue;
        }
        int best = -1;
        double best_rsrp = -1.0;
        for (std::size_t i = 0; i < dep.small_cells.size(); ++i) {
          const double p =
              rsrp(dep, pos, shadow[i], dep.small_cells[i], opt.n_tx_ports);
          if (p > best_rsrp) {  // strict: equal RSRP keeps the lower id
            best_rsrp = p;
            best = dep.small_cells[i].id;
          }
        }
        if (best == cell.id) {
          dep.ues.push_back({ue_id, pos});
          state.ues.push_back({ue_id, cell.id});
          state.cell(cell.id).attached_ues.push_back(ue_id);
          placed = true;
          break;
        }
      }
      if (!placed)
        throw std::runtime_error("ue quota unsatisfiable after bounded redraws");
    }
  }
  state.check_invariants();
  return state;
}

std::string dump_scenario(const Deployment& dep) {
  nlohmann::json j;
  j["indoor"] = dep.indoor;
  j["bounds"] = {dep.bounds.x0, dep.bounds.y0, dep.bounds.x1, dep.bounds.y1};
  for (const auto& c : dep.small_cells)
    j["small_cells"].push_back({{"id", c.id},
                                {"x_m", c.pos.x},
                                {"y_m", c.pos.y},
                                {"power_dbm", watts_to_dbm(c.max_tx_power_w)},
                                {"class", c.cls == CellClass::kFemto
                                              ? "femto"
                                              : "pico"}});
  for (const auto& m : dep.macros)
    j["macros"].push_back({{"id", m.id},
                           {"x_m", m.pos.x},
                           {"y_m", m.pos.y},
                           {"power_dbm", watts_to_dbm(m.tx_power_w)}});
  for (const auto& u : dep.ues)
    j["ues"].push_back({{"id", u.id}, {"x_m", u.pos.x}, {"y_m", u.pos.y}});
  for (const auto& w : dep.walls)
    j["walls"].push_back({{"x0_m", w.a.x},
                          {"y0_m", w.a.y},
                          {"x1_m", w.b.x},
                          {"y1_m", w.b.y},
                          {"loss_db", w.loss_db},
                          {"exterior", w.exterior}});
  return j.dump(2);
}

}  // namespace scnet::scenario
