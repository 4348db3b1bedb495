#ifndef SCNET_REPORT_HPP
#define SCNET_REPORT_HPP

#include <string>
#include <vector>

#include "scnet/engine.hpp"

namespace scnet::cli {

// Deterministic result emission:
//   results.csv          one row per (scenario, ues_per_cell, tau)
//   results.json         schema string, resolved config echo, full summaries
//   fig_<metric>.csv     plot data, x = ues_per_cell, one series per tau
// Returns the list of written paths. Throws on an unwritable directory.
std::vector<std::string> emit_results(
    const RunConfig& cfg, const std::vector<engine::RunSummary>& summaries,
    const std::string& out_dir);

// CSV body as a string (header + rows, 6 significant digits).
std::string results_csv(const std::vector<engine::RunSummary>& summaries);

}  // namespace scnet::cli

#endif
