// dwlab command line: run experiment scenarios from JSON configs, or list the
// scenario catalog.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dwlab/scenarios.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, long seed,
            int parallel) {
  dwlab::json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file: " << config_path << "\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::cerr << "config parse error: " << e.what() << "\n";
      return 2;
    }
  }
  if (!config.contains("scenario")) {
    std::cerr << "config must name a \"scenario\"; known scenarios:\n";
    for (const auto& info : dwlab::scenario_catalog()) std::cerr << "  " << info.name << "\n";
    return 2;
  }
  if (seed >= 0) config["seed"] = static_cast<std::uint64_t>(seed);

  std::filesystem::path dir = out_dir.empty()
                                  ? std::filesystem::path("out") /
                                        config.at("scenario").get<std::string>()
                                  : std::filesystem::path(out_dir);
  try {
    dwlab::ScenarioReport report = dwlab::run_scenario(config, dir, parallel);
    std::cout << report.to_log();
    std::cout << "outputs in " << dir.string() << "\n";
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_list(bool as_json) {
  if (as_json) {
    std::cout << dwlab::scenario_catalog_json().dump(2) << "\n";
    return 0;
  }
  for (const auto& info : dwlab::scenario_catalog()) {
    std::cout << info.name << "\n    " << info.anchor << "\n    modules:";
    for (const auto& m : info.modules) std::cout << " " << m;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwlab: numerical experiments for damped wave diffusion phenomena"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long seed = -1;
  int parallel = 1;
  auto* run = app.add_subcommand("run", "run a scenario from a JSON config file");
  run->add_option("config", config_path, "path to the scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory (default out/<scenario>)");
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--parallel", parallel, "parallel independent checks within a scenario");

  bool as_json = false;
  auto* list = app.add_subcommand("list", "list the scenario catalog");
  list->add_flag("--json", as_json, "machine-readable catalog");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(run)) return cmd_run(config_path, out_dir, seed, parallel);
  return cmd_list(as_json);
}
