#include "dwlab/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dwlab {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("report: cannot open " + p.string());
  os << std::setprecision(17);
  return os;
}

}  // namespace

CheckResult CheckResult::le(std::string id, std::string claim, double value, double threshold,
                            std::string detail) {
  CheckResult c;
  c.id = std::move(id);
  c.claim = std::move(claim);
  c.value = value;
  c.threshold = threshold;
  c.relation = "<=";
  c.pass = std::isfinite(value) && value <= threshold;
  c.detail = std::move(detail);
  return c;
}

CheckResult CheckResult::ge(std::string id, std::string claim, double value, double threshold,
                            std::string detail) {
  CheckResult c;
  c.id = std::move(id);
  c.claim = std::move(claim);
  c.value = value;
  c.threshold = threshold;
  c.relation = ">=";
  c.pass = std::isfinite(value) && value >= threshold;
  c.detail = std::move(detail);
  return c;
}

CheckResult CheckResult::flag(std::string id, std::string claim, bool ok, std::string detail) {
  CheckResult c;
  c.id = std::move(id);
  c.claim = std::move(claim);
  c.value = ok ? 1.0 : 0.0;
  c.threshold = 1.0;
  c.relation = "==";
  c.pass = ok;
  c.detail = std::move(detail);
  return c;
}

bool ScenarioReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json ScenarioReport::to_json() const {
  json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["scenario"] = scenario;
  j["config_echo"] = config_echo;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"id", c.id},
                           {"paper_ref", c.claim},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"relation", c.relation},
                           {"pass", c.pass},
                           {"detail", c.detail}});
  }
  j["notes"] = notes;
  j["all_pass"] = all_pass();
  return j;
}

std::string ScenarioReport::to_log() const {
  std::ostringstream os;
  os << "scenario " << scenario << "\n";
  for (const auto& c : checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ": " << c.claim << " (value=" << c.value
       << " " << c.relation << " " << c.threshold << ")";
    if (!c.detail.empty()) os << " -- " << c.detail;
    os << "\n";
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  os << (all_pass() ? "ALL CHECKS PASSED" : "CHECKS FAILED") << "\n";
  return os.str();
}

RunWriter::RunWriter(std::filesystem::path out_dir) : dir_(std::move(out_dir)) {
  std::filesystem::create_directories(dir_);
}

void RunWriter::write_series(const std::string& name, const TimeSeries& series) {
  auto os = open_out(dir_ / (name + ".csv"));
  os << "t,value,normalization\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    os << series.times[i] << "," << series.values[i] << "," << series.normalization << "\n";
}

void RunWriter::write_trajectory(const std::string& name, const Trajectory& traj,
                                 const SelfAdjointOperator& a) {
  auto os = open_out(dir_ / (name + ".csv"));
  os << "t,norm_L2_u,norm_H1_u,norm_L2_v,energy0,energyH\n";
  const Eigen::Index n = a.size();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Eigen::VectorXd u = traj.states[i].head(n);
    const Eigen::VectorXd v = traj.states[i].tail(n);
    const EnergyPair e = energy(traj.states[i], a);
    os << traj.times[i] << "," << discrete_norm(u, NormKind::L2, a.grid()) << ","
       << discrete_norm(u, NormKind::H1, a.grid(), &a) << ","
       << discrete_norm(v, NormKind::L2, a.grid()) << "," << e.energy0 << "," << e.energyH
       << "\n";
  }
}

void RunWriter::write_profile_difference(const std::string& name, const TimeSeries& diff,
                                         const TimeSeries& normalized,
                                         double certificate_exponent) {
  auto os = open_out(dir_ / (name + ".csv"));
  os << "t,diff_L2,normalized_diff,certificate_running_sup\n";
  double running = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    running = std::max(running,
                       std::pow(diff.times[i], certificate_exponent) * normalized.values[i]);
    os << diff.times[i] << "," << diff.values[i] << "," << normalized.values[i] << ","
       << running << "\n";
  }
}

void RunWriter::write_survey(const std::string& name, const BoundSurvey& survey) {
  auto os = open_out(dir_ / (name + ".csv"));
  os << "lemma_id,re_lambda,im_lambda,measured,bound,margin\n";
  for (const auto& row : survey.rows)
    os << survey.lemma << "," << row.lambda.real() << "," << row.lambda.imag() << ","
       << row.measured << "," << row.bound << "," << row.margin << "\n";
}

void RunWriter::write_contour(const std::string& name, const Contour& contour) {
  auto os = open_out(dir_ / (name + ".csv"));
  os << "segment_id,s,re_lambda,im_lambda,weight\n";
  for (const auto& node : contour.nodes) {
    std::ostringstream w;
    w << std::setprecision(17) << node.weight.real() << std::showpos << node.weight.imag()
      << "i";
    os << node.segment << "," << node.s << "," << node.lambda.real() << ","
       << node.lambda.imag() << "," << w.str() << "\n";
  }
}

void RunWriter::write_gcc_samples(const std::string& name, const GccReport& report) {
  auto os = open_out(dir_ / (name + ".csv"));
  os << "x0,x1,x2,xi0,xi1,xi2,average\n";
  for (const auto& row : report.sample_dump) {
    const auto& q = row.point;
    os << q.x[0] << "," << q.x[1] << "," << q.x[2] << "," << q.xi[0] << "," << q.xi[1] << ","
       << q.xi[2] << "," << row.average << "\n";
  }
  // Arg-min row plus a summary line carry the verdict.
  const auto& p = report.arg_min;
  os << p.x[0] << "," << p.x[1] << "," << p.x[2] << "," << p.xi[0] << "," << p.xi[1] << ","
     << p.xi[2] << "," << report.min_average << "\n";
  os << "# samples=" << report.samples << " horizon=" << report.horizon
     << " min_average=" << report.min_average << " alpha_estimate=" << report.alpha_estimate
     << " pass=" << report.pass << " min_on_boundary=" << report.min_on_boundary << "\n";
}

void RunWriter::write_summary(const ScenarioReport& report) {
  {
    auto os = open_out(dir_ / "summary.json");
    os << report.to_json().dump(2) << "\n";
  }
  auto log = open_out(dir_ / "run.log");
  log << report.to_log();
}

}  // namespace dwlab
