// Experiment reporting: CSV series, the versioned summary.json, and
// human-readable logs. One writer per run; all numeric output is produced
// from deterministic reductions so reruns are byte-identical.
#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "dwlab/block_system.hpp"
#include "dwlab/contour.hpp"
#include "dwlab/gcc.hpp"
#include "dwlab/rates.hpp"
#include "dwlab/resolvent.hpp"

namespace dwlab {

using json = nlohmann::json;

inline constexpr int kSummarySchemaVersion = 1;

struct CheckResult {
  std::string id;
  std::string claim;  // one-line anchor for what is being checked
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";  // how value compares against threshold
  bool pass = false;
  std::string detail;

  static CheckResult le(std::string id, std::string claim, double value, double threshold,
                        std::string detail = "");
  static CheckResult ge(std::string id, std::string claim, double value, double threshold,
                        std::string detail = "");
  static CheckResult flag(std::string id, std::string claim, bool ok,
                          std::string detail = "");
};

struct ScenarioReport {
  std::string scenario;
  json config_echo;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
  json to_json() const;
  std::string to_log() const;
};

class RunWriter {
 public:
  explicit RunWriter(std::filesystem::path out_dir);

  const std::filesystem::path& dir() const { return dir_; }

  void write_series(const std::string& name, const TimeSeries& series);
  void write_trajectory(const std::string& name, const Trajectory& traj,
                        const SelfAdjointOperator& a);
  void write_profile_difference(const std::string& name, const TimeSeries& diff,
                                const TimeSeries& normalized, double certificate_exponent);
  void write_survey(const std::string& name, const BoundSurvey& survey);
  void write_contour(const std::string& name, const Contour& contour);
  void write_gcc_samples(const std::string& name, const GccReport& report);
  void write_summary(const ScenarioReport& report);

 private:
  std::filesystem::path dir_;
};

}  // namespace dwlab
