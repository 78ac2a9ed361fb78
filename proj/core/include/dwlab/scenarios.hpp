// Named experiment scenarios binding all modules: each one reproduces a
// quantitative claim (identity residuals, bound surveys, decay-rate fits,
// certificates) from a declarative JSON config, writes CSV series plus a
// versioned summary.json, and reports per-check pass/fail.
#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "dwlab/report.hpp"

namespace dwlab {

struct ScenarioInfo {
  std::string name;
  std::string anchor;  // one-line description of the claim the scenario checks
  std::vector<std::string> modules;
};

const std::vector<ScenarioInfo>& scenario_catalog();
json scenario_catalog_json();

// Built-in defaults for a scenario; unknown names throw with the catalog.
json default_config(const std::string& scenario);

// Merges `config` over the scenario defaults (config must name "scenario"),
// runs it, and writes CSV outputs, summary.json, and run.log under out_dir.
ScenarioReport run_scenario(const json& config, const std::filesystem::path& out_dir,
                            int parallel = 1);

}  // namespace dwlab
