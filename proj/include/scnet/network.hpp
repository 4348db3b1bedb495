#ifndef SCNET_NETWORK_HPP
#define SCNET_NETWORK_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "scnet/types.hpp"

namespace scnet {

struct CellRecord {
  int id = -1;
  bool active = true;
  std::vector<int> attached_ues;
};

struct UeRecord {
  int id = -1;
  int serving_cell = -1;
};

// Assignment relation between UEs and small cells, plus small-cell activity
// flags. Macro eNBs are interference-only and carry no attached UEs.
struct NetworkState {
  std::vector<CellRecord> cells;
  std::vector<int> macro_ids;
  std::vector<UeRecord> ues;

  const CellRecord& cell(int id) const {
    for (const auto& c : cells)
      if (c.id == id) return c;
    throw std::out_of_range("unknown cell id");
  }
  CellRecord& cell(int id) {
    return const_cast<CellRecord&>(
        static_cast<const NetworkState*>(this)->cell(id));
  }
  const UeRecord& ue(int id) const {
    for (const auto& u : ues)
      if (u.id == id) return u;
    throw std::out_of_range("unknown ue id");
  }
  UeRecord& ue(int id) {
    return const_cast<UeRecord&>(
        static_cast<const NetworkState*>(this)->ue(id));
  }

  // Invariants: every UE on exactly one active cell, memberships consistent.
  void check_invariants() const {
    for (const auto& u : ues) {
      const auto& c = cell(u.serving_cell);
      if (!c.active) throw std::logic_error("ue attached to inactive cell");
      if (std::count(c.attached_ues.begin(), c.attached_ues.end(), u.id) != 1)
        throw std::logic_error("ue/cell membership mismatch");
    }
    std::size_t total = 0;
    for (const auto& c : cells) total += c.attached_ues.size();
    if (total != ues.size())
      throw std::logic_error("attachment relation not a partition");
  }
};

}  // namespace scnet

#endif
