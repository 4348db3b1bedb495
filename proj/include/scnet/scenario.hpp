#ifndef SCNET_SCENARIO_HPP
#define SCNET_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "scnet/network.hpp"
#include "scnet/rng.hpp"
#include "scnet/types.hpp"

namespace scnet::scenario {

enum class CellClass { kFemto, kPico };

struct SmallCellSite {
  int id = -1;
  Position pos;
  double max_tx_power_w = 0.0;
  CellClass cls = CellClass::kFemto;
};

struct MacroSite {
  int id = -1;
  Position pos;
  double tx_power_w = 0.0;
};

struct UeSite {
  int id = -1;
  Position pos;
};

struct WallSegment {
  Position a;
  Position b;
  double loss_db = 5.0;
  bool exterior = false;
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool contains(const Position& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

struct Deployment {
  std::vector<SmallCellSite> small_cells;
  std::vector<MacroSite> macros;
  std::vector<UeSite> ues;
  std::vector<WallSegment> walls;   // empty for outdoor
  std::vector<Rect> buildings;      // indoor-distance regions
  std::vector<Rect> drop_regions;   // where UEs may be placed
  Rect bounds;
  bool indoor = true;
};

struct DualStripeOptions {
  double small_cell_power_dbm = 20.0;  // femto
  double macro_power_dbm = 46.0;
  int macro_sectors = 3;               // one tri-sector site
  Position macro_offset{50.0, -200.0};
};

struct OutdoorOptions {
  double small_cell_power_dbm = 24.0;  // pico
  double macro_power_dbm = 43.0;
  int macro_sites = 6;                 // tri-sector each: 18 interferers
  double macro_ring_radius = 300.0;
};

// Two side-by-side apartment buildings, each two stripes of ten 10 m x 10 m
// apartments, 10 m street between. Each apartment holds a HeNB with
// probability dr; at least one HeNB overall (redrawn otherwise).
Deployment generate_dual_stripe(double dr, std::uint64_t rng_seed,
                                const DualStripeOptions& opt = {});

// n_cells picocells by minimum-separation rejection sampling (0.7 * mean
// inter-site distance), macro interferers on a ring outside the area.
Deployment generate_outdoor(int n_cells, const Rect& area, double mean_isd,
                            std::uint64_t rng_seed,
                            const OutdoorOptions& opt = {});

int count_wall_crossings(const Position& tx, const Position& rx,
                         const std::vector<WallSegment>& walls,
                         bool exterior_only);

// Simplified Dual Stripe pathloss: distance term, indoor-distance term and
// per-wall penetration losses.
double pathloss_indoor(const Position& tx, const Position& rx,
                       const std::vector<WallSegment>& walls,
                       const std::vector<Rect>& buildings);

// Urban-micro NLOS statistical model, lower-clipped by free space at 2 GHz.
double pathloss_outdoor(const Position& tx, const Position& rx);

double pathloss(const Deployment& dep, const Position& tx, const Position& rx);

// Zero-mean log-normal shadowing in dB.
double draw_shadowing(double sigma_db, Rng& rng);

// Block-fading channel: i.i.d. unit-variance CN(0,1) entries scaled by the
// link's linear amplitude gain.
MatrixC draw_fading(int n_r, int n_t, double amplitude, Rng& rng);

struct AssignmentOptions {
  int ues_per_cell = 1;
  int n_tx_ports = 4;        // RSRP uses per-port power max_tx / n_tx_ports
  double sigma_indoor_db = 4.0;
  double sigma_outdoor_db = 8.0;
  int max_redraws_per_ue = 5000;
};

// Shadowing in dB for one link, fixed per snapshot.
double link_shadowing_db(std::uint64_t snapshot_seed, int ue_id, int enb_id,
                         double sigma_db);

// RSRP in watts for a candidate UE position against one small cell.
double rsrp(const Deployment& dep, const Position& ue_pos, double shadow_db,
            const SmallCellSite& cell, int n_tx_ports);

// Quota-driven UE drop plus max-RSRP association: places ues_per_cell UEs in
// each small cell's best-RSRP region (filling dep.ues) and returns the
// initial all-active NetworkState. Ties break to the lowest cell id.
NetworkState initial_assignment(Deployment& dep, const AssignmentOptions& opt,
                                std::uint64_t snapshot_seed);

// Scenario dump (cells/UEs/walls, metres and dBm) for regression fixtures.
std::string dump_scenario(const Deployment& dep);

}  // namespace scnet::scenario

#endif
