#include "scnet/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace scnet::cli {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

nlohmann::json stat_json(const engine::Stat& s) {
  return {{"mean", std::isnan(s.mean) ? nlohmann::json() : nlohmann::json(s.mean)},
          {"ci_half", s.ci_half},
          {"count", s.count}};
}

nlohmann::json summary_json(const engine::RunSummary& s) {
  return {{"scenario", s.scenario},
          {"ues_per_cell", s.ues_per_cell},
          {"tau", s.tau},
          {"iterations", s.n_iterations},
          {"seed_base", s.seed_base},
          {"deactivated_fraction", stat_json(s.deactivated_fraction)},
          {"power_before_w", stat_json(s.power_before_w)},
          {"power_after_w", stat_json(s.power_after_w)},
          {"power_saving_fraction", stat_json(s.power_saving_fraction)},
          {"se_before", stat_json(s.se_before)},
          {"se_after", stat_json(s.se_after)},
          {"se_delta", stat_json(s.se_delta)},
          {"mu_rb_fraction", stat_json(s.mu_rb_fraction)},
          {"reassignment_probability", stat_json(s.reassignment_probability)},
          {"mean_ue_throughput", stat_json(s.mean_ue_throughput)}};
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

struct FigureSpec {
  const char* file;
  double scale;
  engine::Stat engine::RunSummary::* field;
};

}  // namespace

std::string results_csv(const std::vector<engine::RunSummary>& summaries) {
  std::ostringstream os;
  os << "scenario,ues_per_cell,tau,"
        "deactivated_pct_mean,deactivated_pct_ci,"
        "power_saved_pct_mean,power_saved_pct_ci,"
        "se_gain_rue_tue_mean,se_gain_rue_tue_ci,"
        "mu_rb_fraction_mean,mu_rb_fraction_ci\n";
  for (const auto& s : summaries) {
    os << s.scenario << ',' << s.ues_per_cell << ',' << fmt(s.tau) << ','
       << fmt(100.0 * s.deactivated_fraction.mean) << ','
       << fmt(100.0 * s.deactivated_fraction.ci_half) << ','
       << fmt(100.0 * s.power_saving_fraction.mean) << ','
       << fmt(100.0 * s.power_saving_fraction.ci_half) << ','
       << fmt(s.se_delta.mean) << ',' << fmt(s.se_delta.ci_half) << ','
       << fmt(s.mu_rb_fraction.mean) << ',' << fmt(s.mu_rb_fraction.ci_half)
       << '\n';
  }
  return os.str();
}

std::vector<std::string> emit_results(
    const RunConfig& cfg, const std::vector<engine::RunSummary>& summaries,
    const std::string& out_dir) {
  if (summaries.empty()) throw std::invalid_argument("no summaries to emit");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;

  const std::string csv_path = out_dir + "/results.csv";
  write_file(csv_path, results_csv(summaries));
  written.push_back(csv_path);

  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["config"] = config_to_json(cfg);
  for (const auto& s : summaries) j["summaries"].push_back(summary_json(s));
  const std::string json_path = out_dir + "/results.json";
  write_file(json_path, j.dump(2) + "\n");
  written.push_back(json_path);

  // figure layouts: x = ues_per_cell, one series (mean, ci) per tau
  const FigureSpec figures[] = {
      {"fig_deactivated_pct.csv", 100.0,
       &engine::RunSummary::deactivated_fraction},
      {"fig_power_saved_pct.csv", 100.0,
       &engine::RunSummary::power_saving_fraction},
      {"fig_se_gain.csv", 1.0, &engine::RunSummary::se_delta},
      {"fig_mu_rb_fraction.csv", 1.0, &engine::RunSummary::mu_rb_fraction},
  };

  std::set<int> upcs;
  std::set<double> taus;
  for (const auto& s : summaries) {
    upcs.insert(s.ues_per_cell);
    taus.insert(s.tau);
  }
  for (const auto& fig : figures) {
    std::ostringstream os;
    os << "ues_per_cell";
    for (double tau : taus)
      os << ",tau_" << fmt(tau) << "_mean,tau_" << fmt(tau) << "_ci";
    os << '\n';
    for (int upc : upcs) {
      os << upc;
      for (double tau : taus) {
        const engine::RunSummary* match = nullptr;
        for (const auto& s : summaries)
          if (s.ues_per_cell == upc && s.tau == tau) match = &s;
        if (match) {
          const engine::Stat& st = match->*(fig.field);
          os << ',' << fmt(fig.scale * st.mean) << ','
             << fmt(fig.scale * st.ci_half);
        } else {
          os << ",nan,nan";
        }
      }
      os << '\n';
    }
    const std::string path = out_dir + "/" + fig.file;
    write_file(path, os.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace scnet::cli
