#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "scnet/engine.hpp"
#include "scnet/report.hpp"
#include "scnet/scenario.hpp"

namespace {

scnet::cli::RunConfig load_config(const std::string& config_path,
                                  const nlohmann::json& overrides) {
  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config " + config_path);
    in >> doc;
  }
  for (const auto& [k, v] : overrides.items()) doc[k] = v;
  return scnet::cli::parse_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-cell MU-MIMO reassignment and sleep-mode simulator"};
  app.require_subcommand(1);

  std::string config_path;
  nlohmann::json overrides = nlohmann::json::object();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option_function<std::string>(
        "--scenario", [&](const std::string& v) { overrides["scenario"] = v; },
        "dual_stripe or outdoor");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { overrides["seed"] = v; });
    cmd->add_option_function<double>(
        "--dr", [&](double v) { overrides["dr"] = v; });
    cmd->add_option_function<int>(
        "--n-cells", [&](int v) { overrides["n_cells"] = v; });
  };

  auto* run = app.add_subcommand("run", "execute a sweep and emit results");
  add_common(run);
  std::vector<double> taus;
  std::vector<int> upcs;
  run->add_option("--tau", taus, "reassignment thresholds, bits/RB");
  run->add_option("--ues-per-cell", upcs, "UEs per small cell");
  run->add_option_function<int>(
      "--iterations", [&](int v) { overrides["iterations"] = v; });
  run->add_option_function<std::string>(
      "--solver", [&](const std::string& v) { overrides["solver"] = v; },
      "exact or greedy");
  run->add_option_function<int>(
      "--workers", [&](int v) { overrides["workers"] = v; });
  run->add_option_function<std::string>(
      "--out-dir", [&](const std::string& v) { overrides["out_dir"] = v; });
  run->add_flag_function(
      "--overhead",
      [&](std::int64_t) { overrides["feedback_overhead_enabled"] = true; },
      "apply the feedback overhead factor to throughput outputs");

  auto* dump = app.add_subcommand("dump-scenario",
                                  "generate one deployment and print it");
  add_common(dump);
  int dump_upc = 1;
  dump->add_option("--ues-per-cell", dump_upc);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!taus.empty()) overrides["tau"] = taus;
    if (!upcs.empty()) overrides["ues_per_cell"] = upcs;
    scnet::cli::RunConfig cfg = load_config(config_path, overrides);

    if (dump->parsed()) {
      auto dep = cfg.indoor()
                     ? scnet::scenario::generate_dual_stripe(cfg.dr, cfg.seed)
                     : scnet::scenario::generate_outdoor(
                           cfg.n_cells,
                           {0.0, 0.0, cfg.area_size_m, cfg.area_size_m},
                           cfg.mean_isd_m, cfg.seed);
      scnet::scenario::AssignmentOptions aopt;
      aopt.ues_per_cell = dump_upc;
      aopt.n_tx_ports = cfg.n_tx;
      scnet::scenario::initial_assignment(dep, aopt, cfg.seed);
      std::cout << scnet::scenario::dump_scenario(dep) << '\n';
      return 0;
    }

    const auto summaries = scnet::engine::run_sweep(cfg);
    const auto written =
        scnet::cli::emit_results(cfg, summaries, cfg.out_dir);
    for (const auto& p : written) std::cout << "wrote " << p << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
