#include "dwlab/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dwlab/contour.hpp"
#include "dwlab/gcc.hpp"
#include "dwlab/heat_profile.hpp"

#include <atomic>
#include <future>

namespace dwlab {

namespace {

// Order-preserving parallel map over [0, n); bodies must only touch their own
// slot so the reduction stays deterministic regardless of scheduling.
template <typename Body>
void parallel_for(int n, int workers, Body&& body) {
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::future<void>> futs;
  std::atomic<int> next{0};
  for (int w = 0; w < std::min(workers, n); ++w)
    futs.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    }));
  for (auto& f : futs) f.get();
}

// ---------------------------------------------------------------------------
// Config parsing

std::array<double, 3> center_from(const json& j, const std::string& key) {
  std::array<double, 3> c{0, 0, 0};
  if (j.contains(key)) {
    auto arr = j.at(key);
    for (std::size_t i = 0; i < arr.size() && i < 3; ++i) c[i] = arr[i].get<double>();
  }
  return c;
}

CoefficientField field_from_json(const json& j) {
  const std::string preset = j.at("preset").get<std::string>();
  const auto center = center_from(j, "center");
  if (preset == "constant") return CoefficientField::constant(j.at("value").get<double>());
  if (preset == "sine")
    return CoefficientField::sine(j.at("base").get<double>(), j.at("amp").get<double>(),
                                  j.at("period").get<double>(), center);
  if (preset == "gaussian_bump")
    return CoefficientField::gaussian_bump(j.at("base").get<double>(),
                                           j.at("amp").get<double>(),
                                           j.at("width").get<double>(), center);
  if (preset == "bump")
    return CoefficientField::bump(j.at("amp").get<double>(), j.at("radius").get<double>(),
                                  j.at("flat").get<double>(), center);
  if (preset == "bump_complement")
    return CoefficientField::bump_complement(j.at("outside").get<double>(),
                                             j.at("radius").get<double>(),
                                             j.at("flat").get<double>(), center);
  if (preset == "sigmoid_ring")
    return CoefficientField::sigmoid_ring(j.at("base").get<double>(), j.at("amp").get<double>(),
                                          j.at("radius").get<double>(),
                                          j.at("width").get<double>(), center);
  throw std::invalid_argument("unknown field preset '" + preset + "'");
}

Grid grid_from_json(const json& j) {
  const std::string boundary = j.value("boundary", "periodic");
  const int dim = j.value("dim", 1);
  const int n = j.at("n").get<int>();
  const double length = j.at("length").get<double>();
  return boundary == "periodic" ? Grid::periodic(dim, n, length)
                                : Grid::dirichlet(dim, n, length);
}

std::vector<double> times_from_json(const json& j) {
  const std::string kind = j.value("kind", "geometric");
  const double t0 = j.at("t0").get<double>();
  const double t1 = j.at("t1").get<double>();
  const int count = j.at("count").get<int>();
  return kind == "geometric" ? geometric_times(t0, t1, count) : uniform_times(t0, t1, count);
}

struct WaveSetup {
  std::shared_ptr<SelfAdjointOperator> a;
  DampingOperator b;
  std::shared_ptr<SelfAdjointOperator> tilde_a;
};

WaveSetup build_wave_setup(const json& cfg, bool surrogate = false) {
  const Grid grid = grid_from_json(cfg.at("grid"));
  const CoefficientField g = field_from_json(cfg.at("fields").at("g"));
  auto a_op = std::make_shared<SelfAdjointOperator>(build_divergence_form(grid, g));

  Eigen::VectorXd diag = field_from_json(cfg.at("fields").at("a")).sample(grid);
  if (surrogate) diag += field_from_json(cfg.at("fields").at("b")).sample(grid);
  const double floor = diag.minCoeff();
  DampingOperator b(diag, std::max(floor, 0.0));

  // The conjugated operator only exists for strictly positive damping; runs
  // with a vanishing floor (the control-condition presets) do without it.
  std::shared_ptr<SelfAdjointOperator> tilde;
  if (b.strictly_positive())
    tilde = std::make_shared<SelfAdjointOperator>(build_tilde_a(*a_op, b));
  return WaveSetup{a_op, b, tilde};
}

CauchyData data_from_json(const json& j, const Grid& grid) {
  const std::string preset = j.value("preset", "gaussian");
  if (preset == "gaussian")
    return make_gaussian_data(grid, j.value("width", 5.0), j.value("center_fraction", 0.5),
                              j.value("in_u0", true), j.value("in_u1", false));
  if (preset == "single_cell") return make_single_cell_data(grid, j.value("cell", grid.size() / 2));
  throw std::invalid_argument("unknown data preset '" + preset + "'");
}

double gap_time_of(const SelfAdjointOperator& op) {
  return op.gap_time();
}

// ---------------------------------------------------------------------------
// Shared instance builders

std::shared_ptr<SelfAdjointOperator> random_spd(int n, CounterRng& rng, double shift = 0.1) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
  Eigen::MatrixXd m = g.transpose() * g / double(n);
  m.diagonal().array() += shift;
  m = 0.5 * (m + m.transpose()).eval();
  return std::make_shared<SelfAdjointOperator>(std::move(m),
                                               Grid::periodic(1, n, double(n)));
}

DampingOperator random_damping(int n, CounterRng& rng, double c, double hi) {
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = c + (hi - c) * rng.next_uniform();
  return DampingOperator(std::move(d), c);
}

// ---------------------------------------------------------------------------
// identities: machine-precision algebra on random instances

ScenarioReport scenario_identities(const json& cfg, RunWriter& writer, int parallel) {
  ScenarioReport rep;
  const int instances = cfg.value("instances", 50);
  const int max_n = cfg.value("max_size", 50);
  const std::uint64_t seed = cfg.value("seed", 20240901u);

  // One slot of residual maxima per instance; instances draw from their own
  // streams so the run is deterministic under any scheduling.
  struct Worst {
    double block = 0, split = 0, conj = 0, comm = 0, adjoint = 0, idem = 0, cutadj = 0;
  };
  std::vector<Worst> slots(instances);

  parallel_for(instances, parallel, [&](int k) {
    CounterRng rng(seed, 100 + static_cast<std::uint64_t>(k));
    Worst& w = slots[k];
    const int n = 2 + int(rng.next_uniform() * (max_n - 2 + 1));
    auto a = random_spd(n, rng);
    DampingOperator b = random_damping(n, rng, 0.5, 10.0);

    // Two lambdas in the guaranteed-resolvent region (Re > 0), one on the
    // imaginary axis.
    const Complex lams[3] = {
        Complex(0.1 + 0.9 * rng.next_uniform(), 0.1 + 1.9 * rng.next_uniform()),
        Complex(0.3 + 1.7 * rng.next_uniform(), -(0.1 + 0.9 * rng.next_uniform())),
        Complex(0.0, 0.2 + 1.3 * rng.next_uniform())};
    for (const Complex lam : lams) {
      w.block = std::max(w.block, block_resolvent(*a, b, lam).identity_residual);
      const SplittingResidual sr = verify_heat_splitting(*a, b, lam);
      w.split = std::max(w.split, sr.splitting);
      w.conj = std::max(w.conj, sr.conjugation);
      w.comm = std::max(w.comm, sr.commutation);

      const Eigen::MatrixXcd r = quadratic_resolvent(*a, b, lam);
      const Eigen::MatrixXcd r_conj = quadratic_resolvent(*a, b, std::conj(lam));
      w.adjoint = std::max(
          w.adjoint, (r.adjoint() - r_conj).cwiseAbs().maxCoeff() /
                         r.cwiseAbs().maxCoeff());
    }

    // Cutoff projector identities at a nontrivial threshold.
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);
    const auto& ev = tilde.spectrum().eigenvalues;
    const double eps = ev[ev.size() / 2] * (1.0 - 1e-9);
    const Eigen::MatrixXd phi =
        apply_spectral_function(tilde, [eps](double x) { return x >= eps ? 1.0 : 0.0; });
    const Eigen::VectorXd bs = b.diagonal().cwiseSqrt();
    const Eigen::MatrixXd cutoff = bs.cwiseInverse().asDiagonal() * phi * bs.asDiagonal();
    const double scale = std::max(cutoff.cwiseAbs().maxCoeff(), 1e-300);
    w.idem = std::max(w.idem, (cutoff * cutoff - cutoff).cwiseAbs().maxCoeff() / scale);
    const Eigen::MatrixXd adj = bs.asDiagonal() * phi * bs.cwiseInverse().asDiagonal();
    w.cutadj = std::max(w.cutadj, (cutoff.transpose() - adj).cwiseAbs().maxCoeff() / scale);
  });

  double worst_block = 0, worst_split = 0, worst_conj = 0, worst_comm = 0;
  double worst_adjoint = 0, worst_idem = 0, worst_cutadj = 0;
  for (const Worst& w : slots) {
    worst_block = std::max(worst_block, w.block);
    worst_split = std::max(worst_split, w.split);
    worst_conj = std::max(worst_conj, w.conj);
    worst_comm = std::max(worst_comm, w.comm);
    worst_adjoint = std::max(worst_adjoint, w.adjoint);
    worst_idem = std::max(worst_idem, w.idem);
    worst_cutadj = std::max(worst_cutadj, w.cutadj);
  }

  // Analyticity proxy: circle average reproduces the center value.
  CounterRng rng2(seed, 2);
  auto a20 = random_spd(20, rng2);
  DampingOperator b20 = random_damping(20, rng2, 0.5, 5.0);
  const double cauchy_res = cauchy_integral_check(*a20, b20, Complex(1.0, 1.0), 0.4, 64);

  rep.checks.push_back(CheckResult::le("block-identity",
                                       "block resolvent formula inverts lambda - generator",
                                       worst_block, 1e-9));
  rep.checks.push_back(CheckResult::le(
      "splitting", "resolvent splits into heat part minus lambda^2 correction", worst_split,
      1e-9));
  rep.checks.push_back(CheckResult::le(
      "conjugation", "(B la + A)^{-1} equals the conjugated shifted inverse", worst_conj,
      1e-9));
  rep.checks.push_back(CheckResult::le(
      "commutation", "R(la) commutes with (B la + A)^{-1}", worst_comm, 1e-9));
  rep.checks.push_back(CheckResult::le("adjoint-symmetry", "R(la)* equals R(conj la)",
                                       worst_adjoint, 1e-12));
  rep.checks.push_back(CheckResult::le("cutoff-idempotent",
                                       "high-frequency projector squares to itself",
                                       worst_idem, 1e-10));
  rep.checks.push_back(CheckResult::le("cutoff-adjoint",
                                       "projector adjoint equals the conjugated projector",
                                       worst_cutadj, 1e-10));
  rep.checks.push_back(CheckResult::le(
      "analyticity", "circle average of R reproduces the center value", cauchy_res, 1e-8));
  (void)writer;
  return rep;
}

// ---------------------------------------------------------------------------
// lemma-surveys: proof constants and refinement-stable O(.) constants

struct SurveyInstance {
  std::string name;
  std::shared_ptr<SelfAdjointOperator> a;
  DampingOperator b;
};

SurveyInstance dirichlet_instance(int n, double length, double g_amp, double b_amp) {
  const Grid grid = Grid::dirichlet(1, n, length);
  const CoefficientField g =
      g_amp > 0 ? CoefficientField::sine(1.0, g_amp, length) : CoefficientField::constant(1.0);
  auto a = std::make_shared<SelfAdjointOperator>(build_divergence_form(grid, g));
  const CoefficientField bf = b_amp > 0 ? CoefficientField::sine(1.0, b_amp, length)
                                        : CoefficientField::constant(2.0);
  DampingOperator b = DampingOperator::from_field(grid, bf);
  std::ostringstream os;
  os << "dirichlet-" << n;
  return {os.str(), a, b};
}

SurveyInstance periodic_instance(int n, double length, double b_amp) {
  const Grid grid = Grid::periodic(1, n, length);
  auto a = std::make_shared<SelfAdjointOperator>(
      build_divergence_form(grid, CoefficientField::constant(1.0)));
  DampingOperator b =
      DampingOperator::from_field(grid, CoefficientField::sine(1.0, b_amp, length));
  std::ostringstream os;
  os << "periodic-" << n;
  return {os.str(), a, b};
}

ScenarioReport scenario_lemma_surveys(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  const std::uint64_t seed = cfg.value("seed", 7u);
  CounterRng rng(seed, 3);

  std::vector<SurveyInstance> instances;
  instances.push_back(dirichlet_instance(16, 17.0, 0.0, 0.0));
  instances.push_back(dirichlet_instance(64, 65.0, 0.3, 0.5));
  instances.push_back(periodic_instance(128, 128.0, 0.5));
  instances.push_back({"random-24", random_spd(24, rng), random_damping(24, rng, 0.5, 4.0)});
  instances.push_back({"random-48", random_spd(48, rng), random_damping(48, rng, 0.5, 4.0)});

  // Proof-constant lemmas on 200-point grids for every instance.
  double min_margin_31 = std::numeric_limits<double>::infinity();
  double min_margin_32 = std::numeric_limits<double>::infinity();
  for (const auto& inst : instances) {
    const double c = inst.b.lower_bound();
    const LambdaGrid strip =
        LambdaGrid::imag_strip(-0.4 * c, 0.5, 0.05, 20.0, 10, 10);  // 200 points
    BoundSurvey s31 = survey_lemma_bounds(*inst.a, inst.b, strip, ResolventBound::imag_part_constant);
    writer.write_survey("imag-constant-" + inst.name, s31);
    min_margin_31 = std::min(min_margin_31, s31.min_margin);

    const LambdaGrid sector = LambdaGrid::real_sector(0.05, 20.0, 25, 8);  // 200 points
    BoundSurvey s32 = survey_lemma_bounds(*inst.a, inst.b, sector, ResolventBound::real_part_constant);
    writer.write_survey("real-constant-" + inst.name, s32);
    min_margin_32 = std::min(min_margin_32, s32.min_margin);
  }
  rep.checks.push_back(CheckResult::ge(
      "imag-constant-margin", "imaginary-part proof constant never violated", min_margin_31, 1.0));
  rep.checks.push_back(CheckResult::ge(
      "real-constant-margin", "real-part proof constant never violated", min_margin_32, 1.0));

  // O(.) lemmas: constants must be stable under one refinement of both the
  // spatial grid and the lambda grid.
  // Dirichlet pair: strictly positive, so every weighted norm is regular.
  const SurveyInstance coarse = dirichlet_instance(64, 65.0, 0.3, 0.5);
  const SurveyInstance fine = dirichlet_instance(129, 65.0, 0.3, 0.5);

  auto drift_check = [&](const std::string& id, const std::string& claim, ResolventBound which,
                         const SurveyInstance& c_inst, const SurveyInstance& f_inst,
                         const LambdaGrid& c_grid, const LambdaGrid& f_grid) {
    BoundSurvey sc = survey_lemma_bounds(*c_inst.a, c_inst.b, c_grid, lemma);
    BoundSurvey sf = survey_lemma_bounds(*f_inst.a, f_inst.b, f_grid, lemma);
    writer.write_survey(id + "-coarse", sc);
    writer.write_survey(id + "-fine", sf);
    rep.checks.push_back(
        CheckResult::le(id, claim, survey_constant_drift(sc, sf), 0.15,
                        "coarse=" + std::to_string(sc.survey_constant) +
                            " fine=" + std::to_string(sf.survey_constant)));
  };

  // O(.) constants target the continuum operator, so the survey stays inside
  // the spectral range both grids resolve (|lambda|^2 well below ||A||).
  const LambdaGrid ann_c = LambdaGrid::origin_annuli(0.02, 1.0, 10, 6);
  const LambdaGrid ann_f = LambdaGrid::origin_annuli(0.02, 1.0, 20, 12);
  drift_check("h-h1-drift", "H to H1 bound constant is refinement-stable",
              ResolventBound::h_to_h1, coarse, fine, ann_c, ann_f);
  drift_check("h1-h1-drift", "H1 to H1 bound constant is refinement-stable",
              ResolventBound::h1_to_h1, coarse, fine, ann_c, ann_f);

  const LambdaGrid strip_c = LambdaGrid::imag_strip(-0.1, 0.3, 0.05, 1.0, 5, 4);
  const LambdaGrid strip_f = LambdaGrid::imag_strip(-0.1, 0.3, 0.05, 1.0, 8, 7);
  {
    const auto sc = survey_block_resolvent_bounds(*coarse.a, coarse.b, strip_c);
    const auto sf = survey_block_resolvent_bounds(*fine.a, fine.b, strip_f);
    const char* ids[3] = {"block-h0-drift", "block-hh0-drift", "block-hh-drift"};
    const char* claims[3] = {"energy-space resolvent constant is refinement-stable",
                             "H to H0 resolvent constant is refinement-stable",
                             "H to H resolvent constant is refinement-stable"};
    for (int i = 0; i < 3; ++i) {
      const BoundSurvey& c_s = sc[i];
      const BoundSurvey& f_s = sf[i];
      writer.write_survey(std::string(ids[i]) + "-coarse", c_s);
      writer.write_survey(std::string(ids[i]) + "-fine", f_s);
      rep.checks.push_back(
          CheckResult::le(ids[i], claims[i], survey_constant_drift(c_s, f_s), 0.15,
                          "coarse=" + std::to_string(c_s.survey_constant) +
                              " fine=" + std::to_string(f_s.survey_constant)));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// thm1.1-1d / individual: profile closeness at rate 1/t

ScenarioReport scenario_thm11(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  WaveSetup setup = build_wave_setup(cfg);
  const Grid& grid = setup.a->grid();

  CauchyData data = data_from_json(cfg.at("data"), grid);
  const std::vector<double> times = times_from_json(cfg.at("times"));
  BlockGenerator gen(setup.a, setup.b);
  Trajectory traj = propagate(gen, data, times);
  HeatProfile profile = profile_v(*setup.tilde_a, setup.b, data, traj.times);
  ProfileDifference diff = profile_difference(traj, profile, *setup.a, data);

  const double t_lo = cfg.at("window").at("t_lo").get<double>();
  const double t_hi =
      std::min(cfg.at("window").at("t_hi").get<double>(), gap_time_of(*setup.tilde_a));
  const RateFit fit = fit_loglog(diff.difference, t_lo, t_hi);
  const TailTrendVerdict tail = tail_trend_to_zero(diff.difference, 1.0, t_lo, t_hi);

  writer.write_trajectory("trajectory", traj, *setup.a);
  writer.write_profile_difference("profile-difference", diff.difference, diff.normalized, 1.0);

  rep.checks.push_back(CheckResult::le(
      "profile-slope", "difference to the heat profile decays at least like 1/t", fit.slope,
      cfg.value("slope_threshold", -0.9),
      "rms residual " + std::to_string(fit.rms_residual)));
  rep.checks.push_back(CheckResult::flag(
      "tail-trend", "t * difference is eventually decreasing", tail.decreasing,
      tail.decreasing ? "" : "first violation at t=" + std::to_string(tail.first_violation_t)));
  // Exploratory (non-gating): the endpoint rate over the late half-window,
  // where the pre-asymptotic transient has died out, is typically sharper
  // than 1/t for localized data.
  {
    const auto& ts = diff.difference;
    std::size_t mid = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts.times[i] >= std::sqrt(t_lo * t_hi)) {
        mid = i;
        break;
      }
    if (mid > 0 && ts.values[mid] > 0 && ts.values.back() > 0) {
      const double late_rate = std::log(ts.values.back() / ts.values[mid]) /
                               std::log(ts.times.back() / ts.times[mid]);
      std::ostringstream os;
      os << "late-window endpoint rate " << late_rate;
      rep.notes.push_back(os.str());
      rep.config_echo["derived"]["late_endpoint_rate"] = late_rate;
    }
  }
  rep.config_echo["derived"]["gap_time"] = gap_time_of(*setup.tilde_a);
  rep.config_echo["derived"]["window"] = {t_lo, t_hi};
  rep.config_echo["derived"]["fit_slope"] = fit.slope;
  return rep;
}

// ---------------------------------------------------------------------------
// thm1.2-1d: measured diffusion exponent, then the upgraded certificate

ScenarioReport scenario_thm12(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  WaveSetup setup = build_wave_setup(cfg);
  const Grid& grid = setup.a->grid();

  // Step 1: measure m from the L1->L2 semigroup norm slope.
  const json& mt = cfg.at("m_times");
  const std::vector<double> m_times = times_from_json(mt);
  OperatorNormSeries l1l2 =
      semigroup_norm_series(*setup.tilde_a, m_times, SemigroupNormKind::L1_to_L2);
  writer.write_series("l1l2-norm", l1l2.series);
  const RateFit m_fit = fit_loglog(l1l2.series, m_times.front(), m_times.back());
  const double m_measured = -m_fit.slope;
  rep.checks.push_back(CheckResult::le(
      "diffusion-exponent", "L1 to L2 heat norm decays like t^{-d/4}",
      std::abs(m_fit.slope + 0.25), cfg.value("m_tolerance", 0.05),
      "slope " + std::to_string(m_fit.slope)));

  // Step 2: certificate at the measured rate for single-bump L1-cap-L2 data.
  CauchyData data = data_from_json(cfg.at("data"), grid);
  const std::vector<double> times = times_from_json(cfg.at("times"));
  BlockGenerator gen(setup.a, setup.b);
  Trajectory traj = propagate(gen, data, times);
  HeatProfile profile = profile_v(*setup.tilde_a, setup.b, data, traj.times);
  ProfileDifference diff = profile_difference(traj, profile, *setup.a, data);

  // Theorem-style normalization with L1-cap-L2 norms of the data.
  const double norm12 = discrete_norm(data.u0, NormKind::L1, grid) +
                        discrete_norm(data.u0, NormKind::L2, grid) +
                        discrete_norm(data.u0, NormKind::H1, grid, setup.a.get()) +
                        discrete_norm(data.u1, NormKind::L1, grid) +
                        discrete_norm(data.u1, NormKind::L2, grid);
  TimeSeries normalized = diff.difference;
  normalized.label = "profile-difference-L1L2-normalized";
  normalized.normalization = norm12;
  for (auto& v : normalized.values) v /= norm12;

  const double t_lo = cfg.at("window").at("t_lo").get<double>();
  const double t_hi =
      std::min(cfg.at("window").at("t_hi").get<double>(), gap_time_of(*setup.tilde_a));
  const BoundCertificate cert =
      certify_bound(normalized, 1.0 + m_measured, BoundModifier::none, t_lo, t_hi);
  writer.write_profile_difference("profile-difference", diff.difference, normalized,
                                  1.0 + m_measured);
  rep.checks.push_back(CheckResult::flag(
      "upgraded-certificate",
      "sup of t^{1+m} * normalized difference stabilizes at the measured m",
      cert.stabilized && std::isfinite(cert.sup_value),
      "sup=" + std::to_string(cert.sup_value) +
          " q3-ratio=" + std::to_string(cert.last_quartile_ratio)));
  rep.config_echo["derived"] = {{"m_measured", m_measured},
                                {"certificate_exponent", 1.0 + m_measured},
                                {"certificate_sup", cert.sup_value}};
  return rep;
}

// ---------------------------------------------------------------------------
// optimality: eigenmode data keeps t * ||u - v|| bounded away from zero, and
// the closed-contour residue reproduces the decay envelope exactly.

ScenarioReport scenario_optimality(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  WaveSetup setup = build_wave_setup(cfg);
  const Grid& grid = setup.a->grid();

  double worst_ratio = std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  for (double target : cfg.at("targets").get<std::vector<double>>()) {
    CauchyData data = make_spectral_bump_data(*setup.tilde_a, setup.b, target);
    const auto& ev = setup.tilde_a->spectrum().eigenvalues;
    double a_eff = target;
    {  // recover the eigenvalue actually used
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i] - target) < best) {
          best = std::abs(ev[i] - target);
          a_eff = ev[i];
        }
    }
    const double t_star = 1.0 / a_eff;
    BlockGenerator gen(setup.a, setup.b);
    Trajectory traj = propagate(gen, data, {t_star});
    HeatProfile profile = profile_v(*setup.tilde_a, setup.b, data, traj.times);
    const Eigen::VectorXd du = traj.states[0].head(grid.size()) - profile.states[0];
    const double ratio = traj.times[0] * discrete_norm(du, NormKind::L2, grid) /
                         discrete_norm(data.u1, NormKind::L2, grid);
    worst_ratio = std::min(worst_ratio, ratio);
    detail << "a=" << a_eff << " ratio=" << ratio << "; ";
  }
  rep.checks.push_back(CheckResult::ge(
      "optimality-floor", "t * profile distance stays bounded away from zero", worst_ratio,
      cfg.value("ratio_floor", 0.1), detail.str()));

  double worst_residue = 0.0;
  for (double a : cfg.at("residue_a").get<std::vector<double>>()) {
    const double t = 1.0 / a;
    const Complex value = residue_check_optimality(a, t, cfg.value("panels", 16));
    worst_residue = std::max(worst_residue,
                             std::abs(t * value.real() - std::exp(-1.0)) +
                                 std::abs(t * value.imag()));
  }
  rep.checks.push_back(CheckResult::le(
      "residue-envelope", "closed-contour residue reproduces t*value = 1/e", worst_residue,
      cfg.value("residue_tolerance", 1e-4)));
  (void)writer;
  return rep;
}

// ---------------------------------------------------------------------------
// energy-decay: abstract t^{-1/2} certificate over random draws

ScenarioReport scenario_energy_decay(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;

  auto sup_series = [&](const json& sub_cfg, TimeSeries& out) {
    WaveSetup setup = build_wave_setup(sub_cfg);
    BlockGenerator gen(setup.a, setup.b);
    const std::vector<double> times = times_from_json(sub_cfg.at("times"));
    const int draws = sub_cfg.value("draws", 20);
    CounterRng rng(sub_cfg.value("seed", 42u), 11);
    out.label = "energy0-over-H-sup";
    out.times.clear();
    out.values.clear();
    for (int d = 0; d < draws; ++d) {
      CauchyData data = make_random_h_data(*setup.a, rng);
      Trajectory traj = propagate(gen, data, times);
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double n0 = discrete_norm(traj.states[i], NormKind::energy0,
                                        setup.a->grid(), setup.a.get());
        if (d == 0) {
          out.times.push_back(traj.times[i]);
          out.values.push_back(n0);
        } else {
          out.values[i] = std::max(out.values[i], n0);
        }
      }
    }
    return setup;
  };

  TimeSeries fine_series;
  WaveSetup setup = sup_series(cfg, fine_series);
  writer.write_series("energy-sup", fine_series);
  const double t_lo = cfg.at("window").at("t_lo").get<double>();
  const double t_hi =
      std::min(cfg.at("window").at("t_hi").get<double>(), gap_time_of(*setup.tilde_a));
  const BoundCertificate cert =
      certify_bound(fine_series, 0.5, BoundModifier::none, t_lo, t_hi);
  rep.checks.push_back(CheckResult::flag(
      "sqrt-t-certificate", "sup of t^{1/2} energy norm over random draws stabilizes",
      cert.stabilized && std::isfinite(cert.sup_value),
      "sup=" + std::to_string(cert.sup_value)));

  // Drift under one grid refinement: the scenario grid is the fine one.
  json coarse_cfg = cfg;
  coarse_cfg["grid"]["n"] = cfg.at("grid").at("n").get<int>() / 2;
  TimeSeries coarse_series;
  sup_series(coarse_cfg, coarse_series);
  const BoundCertificate coarse_cert =
      certify_bound(coarse_series, 0.5, BoundModifier::none, t_lo, t_hi);
  const double drift = std::abs(cert.sup_value - coarse_cert.sup_value) /
                       std::max(coarse_cert.sup_value, 1e-300);
  rep.checks.push_back(CheckResult::le(
      "certificate-drift", "certificate constant stable under one grid refinement", drift,
      cfg.value("drift_tolerance", 0.10),
      "coarse=" + std::to_string(coarse_cert.sup_value) +
          " fine=" + std::to_string(cert.sup_value)));

  // Localized data decay faster; the energy-norm slope for a bump.
  CauchyData bump = data_from_json(cfg.at("data"), setup.a->grid());
  BlockGenerator gen(setup.a, setup.b);
  Trajectory traj = propagate(gen, bump, times_from_json(cfg.at("times")));
  TimeSeries energy_series;
  energy_series.label = "energy0-localized";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    energy_series.times.push_back(traj.times[i]);
    energy_series.values.push_back(discrete_norm(traj.states[i], NormKind::energy0,
                                                 setup.a->grid(), setup.a.get()));
  }
  writer.write_series("energy-localized", energy_series);
  const RateFit efit = fit_loglog(energy_series, t_lo, t_hi);
  rep.checks.push_back(CheckResult::le(
      "localized-energy-slope", "energy norm slope for localized data", efit.slope,
      cfg.value("localized_slope_threshold", -0.6)));
  rep.config_echo["derived"] = {{"gap_time", gap_time_of(*setup.tilde_a)},
                                {"certificate_sup", cert.sup_value},
                                {"energy_slope", efit.slope}};
  return rep;
}

// ---------------------------------------------------------------------------
// highfreq-t2: spectral cutoff decays at least like t^{-2}

ScenarioReport scenario_highfreq(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  WaveSetup setup = build_wave_setup(cfg);
  CounterRng rng(cfg.value("seed", 42u), 13);
  CauchyData data = make_random_h_data(*setup.a, rng);
  BlockGenerator gen(setup.a, setup.b);
  const std::vector<double> times = times_from_json(cfg.at("times"));
  const double eps = cfg.value("eps", 0.1);

  CutoffDecayResult result = highfreq_cutoff_decay(gen, *setup.tilde_a, data, eps, times);
  writer.write_series("cutoff-norm", result.series);
  rep.checks.push_back(CheckResult::flag(
      "t2-certificate", "sup of t^2 * cutoff norm is finite and stabilized",
      result.certificate.stabilized && std::isfinite(result.certificate.sup_value),
      "sup=" + std::to_string(result.certificate.sup_value)));

  // Weighted series decreasing beyond the pre-asymptotic window.
  const double t_decr = cfg.value("decreasing_after", 20.0);
  bool decreasing = true;
  double prev = -1.0;
  for (std::size_t i = 0; i < result.series.size(); ++i) {
    if (result.series.times[i] < t_decr) continue;
    const double w = result.series.times[i] * result.series.times[i] *
                     result.series.values[i];
    if (prev >= 0.0 && w > prev * 1.01) decreasing = false;
    prev = w;
  }
  rep.checks.push_back(CheckResult::flag(
      "t2-decreasing", "t^2 * cutoff norm decreases beyond the transient", decreasing));
  rep.checks.push_back(CheckResult::le("cutoff-idempotent",
                                       "projector identities hold to machine precision",
                                       std::max(result.idempotence_residual,
                                                result.adjoint_residual),
                                       1e-10));
  if (result.cutoff_vacuous) rep.notes.push_back("cutoff below the lowest positive eigenvalue");
  return rep;
}

// ---------------------------------------------------------------------------
// heat-bounds (1d and 2d)

ScenarioReport scenario_heat_bounds(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  const bool surrogate = cfg.value("use_surrogate", false);
  WaveSetup setup = build_wave_setup(cfg, surrogate);
  const Grid& grid = setup.a->grid();
  const int dim = grid.dim;

  // L1 contraction in the modified-mass weight c^{1/2}; plain L1 is only
  // uniformly bounded (by the weight ratio).
  const std::vector<double> norm_times = times_from_json(cfg.at("norm_times"));
  const Eigen::VectorXd mass_weight = setup.b.diagonal().cwiseSqrt();
  OperatorNormSeries l1l1 = semigroup_norm_series(
      *setup.tilde_a, norm_times, SemigroupNormKind::L1_to_L1, &mass_weight);
  writer.write_series("l1l1-norm", l1l1.series);
  double l1l1_max = 0;
  for (double v : l1l1.series.values) l1l1_max = std::max(l1l1_max, v);
  rep.checks.push_back(CheckResult::le(
      "l1-contraction", "heat semigroup contracts the modified-mass L1 norm", l1l1_max,
      1.0 + 1e-8));
  OperatorNormSeries plain =
      semigroup_norm_series(*setup.tilde_a, norm_times, SemigroupNormKind::L1_to_L1);
  double plain_max = 0;
  for (double v : plain.series.values) plain_max = std::max(plain_max, v);
  const double weight_ratio = mass_weight.maxCoeff() / mass_weight.minCoeff();
  rep.checks.push_back(CheckResult::le(
      "l1-bounded", "plain L1 norms stay within the weight-ratio bound", plain_max,
      weight_ratio * (1.0 + 1e-8)));

  // L1->L2 slope in the gap-respecting window.
  OperatorNormSeries l1l2 =
      semigroup_norm_series(*setup.tilde_a, norm_times, SemigroupNormKind::L1_to_L2);
  writer.write_series("l1l2-norm", l1l2.series);
  const double slope_target = -0.25 * dim;
  const double slope_tol = cfg.value("slope_tolerance", dim == 1 ? 0.05 : 0.08);
  const RateFit fit = fit_loglog(l1l2.series, norm_times.front(),
                                 std::min(norm_times.back(), gap_time_of(*setup.tilde_a)));
  rep.checks.push_back(CheckResult::le(
      "l1l2-slope", "L1 to L2 norm decays like t^{-d/4}", std::abs(fit.slope - slope_target),
      slope_tol, "slope " + std::to_string(fit.slope)));

  // Conservation, positivity, Nash quotient on the heat flow.
  DampingOperator c_op = setup.b;
  CounterRng rng(cfg.value("seed", 42u), 19);
  CauchyData gauss = data_from_json(cfg.at("data"), grid);
  const std::vector<double> flow_times = times_from_json(cfg.at("flow_times"));
  NashReport nash =
      nash_and_conservation_checks(*setup.tilde_a, c_op, gauss.u0, flow_times, rng);
  rep.checks.push_back(CheckResult::le("total-heat-drift",
                                       "modified total heat is conserved",
                                       nash.total_heat_drift, 1e-8));
  rep.checks.push_back(CheckResult::flag("nash-quotient",
                                         "Nash quotient H(t) is nonincreasing",
                                         nash.quotient_monotone));

  // Positivity on delta-like data.
  CauchyData delta = make_single_cell_data(grid, grid.size() / 2);
  CounterRng rng2(cfg.value("seed", 42u), 23);
  NashReport pos =
      nash_and_conservation_checks(*setup.tilde_a, c_op, delta.u0, flow_times, rng2, 0);
  rep.checks.push_back(CheckResult::ge(
      "positivity", "heat flow preserves positivity", pos.min_entry, -1e-10));

  // Nash constant stability under one coarsening.
  if (cfg.value("nash_refinement", true)) {
    json coarse_cfg = cfg;
    coarse_cfg["grid"]["n"] = cfg.at("grid").at("n").get<int>() / 2;
    WaveSetup coarse = build_wave_setup(coarse_cfg, surrogate);
    CounterRng rng3(cfg.value("seed", 42u), 19);
    CauchyData cgauss = data_from_json(cfg.at("data"), coarse.a->grid());
    NashReport cnash = nash_and_conservation_checks(*coarse.tilde_a, coarse.b, cgauss.u0,
                                                    flow_times, rng3);
    const double drift = std::abs(nash.nash_constant - cnash.nash_constant) /
                         std::max(cnash.nash_constant, 1e-300);
    rep.checks.push_back(CheckResult::le(
        "nash-constant-drift", "Nash constant is grid-stable", drift,
        cfg.value("nash_drift_tolerance", 0.3),
        "coarse=" + std::to_string(cnash.nash_constant) +
            " fine=" + std::to_string(nash.nash_constant)));
  }

  // L1 norm equivalence constants for B^{1/2} (diagonal: exact extremes).
  const Eigen::VectorXd sq = setup.b.diagonal().cwiseSqrt();
  rep.checks.push_back(CheckResult::flag(
      "b-sqrt-l1-equivalence", "B^{1/2} is an L1 isomorphism with finite constants",
      sq.minCoeff() > 0 && std::isfinite(sq.maxCoeff()),
      "lower=" + std::to_string(sq.minCoeff()) + " upper=" + std::to_string(sq.maxCoeff())));
  rep.config_echo["derived"] = {{"gap_time", gap_time_of(*setup.tilde_a)},
                                {"l1l2_slope", fit.slope},
                                {"nash_constant", nash.nash_constant}};
  return rep;
}

// ---------------------------------------------------------------------------
// contour-semigroup

ScenarioReport scenario_contour_semigroup(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;

  // Operators with spectra spanning [0, 10].
  std::vector<std::shared_ptr<SelfAdjointOperator>> ops;
  {
    Eigen::VectorXd d(6);
    d << 0.0, 0.01, 0.1, 1.0, 4.0, 10.0;
    ops.push_back(std::make_shared<SelfAdjointOperator>(
        Eigen::MatrixXd(d.asDiagonal()), Grid::periodic(1, 6, 6.0)));
  }
  {
    CounterRng rng(cfg.value("seed", 42u), 29);
    auto a = random_spd(24, rng, 0.0);
    // rescale the random instance into [0, 10]
    const auto& ev = a->spectrum().eigenvalues;
    Eigen::MatrixXd m = a->matrix() * (10.0 / std::max(ev[ev.size() - 1], 1e-12));
    ops.push_back(std::make_shared<SelfAdjointOperator>(0.5 * (m + m.transpose()).eval(),
                                                        Grid::periodic(1, 24, 24.0)));
  }

  const std::vector<double> tgrid = cfg.value("t_grid", std::vector<double>{1.5, 5.0, 20.0, 100.0});
  double worst = 0.0, worst_deform = 0.0;
  for (const auto& op : ops) {
    for (double t : tgrid) {
      const double delta = std::max(0.1, 1.4 / t);
      const double height = delta;
      const Contour contour = build_contour(t, delta, height, 1e4, 20);
      const Eigen::MatrixXd via = semigroup_via_contour(*op, t, contour);
      const Eigen::MatrixXd direct =
          apply_spectral_function(*op, [t](double x) { return std::exp(-t * x); });
      const double scale = std::max(direct.cwiseAbs().maxCoeff(), 1e-300);
      worst = std::max(worst, (via - direct).cwiseAbs().maxCoeff() / scale);

      // Deformation invariance: +-30% on delta and height.
      const Contour wide = build_contour(t, 1.3 * delta, 0.7 * height, 1e4, 20);
      const Eigen::MatrixXd via2 = semigroup_via_contour(*op, t, wide, false);
      worst_deform = std::max(worst_deform, (via2 - via).cwiseAbs().maxCoeff() / scale);
    }
  }
  rep.checks.push_back(CheckResult::le(
      "contour-vs-spectral", "contour quadrature reproduces the spectral exponential", worst,
      cfg.value("match_tolerance", 1e-6)));
  rep.checks.push_back(CheckResult::le(
      "deformation-invariance", "result is invariant under contour deformation", worst_deform,
      cfg.value("deformation_tolerance", 1e-8)));

  {  // contour dump for debugging/plotting
    const Contour contour = build_contour(10.0, 0.1, 0.1, 1e4, 12);
    writer.write_contour("contour-t10", contour);
    rep.checks.push_back(CheckResult::le("contour-continuity",
                                         "segments join end-to-start exactly",
                                         contour.continuity_residual(), 1e-14));
  }

  // Low-frequency profile integral: scalar oracle and the decay trend.
  {
    const Grid g1 = Grid::periodic(1, 2, 2.0);
    Eigen::MatrixXd a1(2, 2);
    a1 << 1.0, 0.0, 0.0, 1.0;
    auto a_op = std::make_shared<SelfAdjointOperator>(a1, g1);
    DampingOperator b(Eigen::VectorXd::Constant(2, 2.0), 2.0);
    const SelfAdjointOperator tilde = build_tilde_a(*a_op, b);
    CauchyData data;
    data.u0 = Eigen::VectorXd::Zero(2);
    data.u1 = Eigen::VectorXd::Ones(2);
    // Wide contour: the omitted horizontal tails scale like e^{-at}/t.
    const double t = 12.0;
    const Contour around = build_contour(t, 3.0, 0.9, 1e4, 14, false);
    const Eigen::VectorXd lowfreq =
        low_frequency_profile_integral(*a_op, b, tilde, data, t, around, 10.0);
    // eps above the spectrum: the projector is the identity, and the exact
    // solution of u'' + 2u' + u = 0, u(0)=0, u'(0)=1 is t e^{-t}.
    const double exact = t * std::exp(-t);
    const double err = (lowfreq - Eigen::VectorXd::Constant(2, exact)).cwiseAbs().maxCoeff();
    rep.checks.push_back(CheckResult::le(
        "profile-integral-scalar", "around-origin integral matches the closed-form solution",
        err, cfg.value("profile_scalar_tolerance", 1e-6)));
  }
  {
    // Discrepancy against the propagator decays in t, at a rate independent
    // of the grid size.
    const double eps = cfg.value("profile_eps", 0.1);
    auto trend = [&](int n) {
      const Grid grid = Grid::periodic(1, n, 128.0);
      auto a_op = std::make_shared<SelfAdjointOperator>(
          build_divergence_form(grid, CoefficientField::constant(1.0)));
      DampingOperator b = DampingOperator::from_field(grid, CoefficientField::constant(1.0));
      const SelfAdjointOperator tilde = build_tilde_a(*a_op, b);
      CauchyData data = make_gaussian_data(grid, 4.0);
      BlockGenerator gen(a_op, b);
      const Eigen::MatrixXd phi = apply_spectral_function(
          tilde, [eps](double x) { return x >= eps ? 1.0 : 0.0; });
      const Eigen::VectorXd bs = b.diagonal().cwiseSqrt();
      std::vector<double> discrepancy;
      for (double t : {10.0, 20.0, 40.0}) {
        const Contour around = build_contour(t, 0.3, 0.3, 1e4, 14, false);
        const Eigen::VectorXd integral =
            low_frequency_profile_integral(*a_op, b, tilde, data, t, around, eps);
        Trajectory traj = propagate(gen, data, {t});
        const Eigen::VectorXd u = traj.states[0].head(grid.size());
        const Eigen::VectorXd low =
            u - bs.cwiseInverse().cwiseProduct(phi * bs.cwiseProduct(u));
        discrepancy.push_back(
            discrete_norm(Eigen::VectorXd(integral - low), NormKind::L2, grid));
      }
      return discrepancy;
    };
    const std::vector<double> fine = trend(128);
    const std::vector<double> half = trend(64);
    const bool geometric = fine[1] < 0.6 * fine[0] && fine[2] < 0.6 * fine[1];
    std::ostringstream os;
    os << "discrepancy " << fine[0] << " -> " << fine[1] << " -> " << fine[2];
    rep.checks.push_back(CheckResult::flag(
        "profile-integral-trend",
        "integral-vs-propagator discrepancy decays at least geometrically in t", geometric,
        os.str()));
    const double rate_fine = fine[2] / fine[0];
    const double rate_half = half[2] / half[0];
    const double rate_ratio = rate_fine / std::max(rate_half, 1e-300);
    rep.checks.push_back(CheckResult::flag(
        "profile-integral-grid-free",
        "trend rate is independent of the grid size", rate_ratio > 0.5 && rate_ratio < 2.0,
        "rate(n=128)=" + std::to_string(rate_fine) +
            " rate(n=64)=" + std::to_string(rate_half)));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// gcc-audit: flow quality and the control condition itself

ScenarioReport scenario_gcc_audit(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;

  // Flow quality on a curved metric: p conservation and 4th-order convergence.
  HamiltonianSystem curved{CoefficientField::gaussian_bump(1.0, 0.5, 1.5, {0.4, -0.3, 0.0}),
                           CoefficientField::constant(1.0), 2};
  const PhasePoint p0 = on_unit_shell(curved, {-2.0, 0.1, 0.0}, {1.0, 0.35, 0.0});
  const double horizon = cfg.value("flow_horizon", 8.0);
  const double dt = cfg.value("flow_dt", 0.02);
  const FlowTrajectory coarse_flow = hamiltonian_flow(curved, p0, horizon, dt);
  const FlowTrajectory fine_flow = hamiltonian_flow(curved, p0, horizon, dt / 2.0);
  rep.checks.push_back(CheckResult::le("p-conservation",
                                       "Hamiltonian is conserved along the flow",
                                       coarse_flow.max_p_drift, 1e-8));
  const double order_ratio = coarse_flow.max_p_drift / std::max(fine_flow.max_p_drift, 1e-300);
  rep.checks.push_back(CheckResult::ge(
      "p-order", "p drift shrinks at 4th order under step halving", order_ratio, 8.0,
      "ratio=" + std::to_string(order_ratio)));

  // Angular momentum analog on a radially symmetric metric.
  HamiltonianSystem radial{CoefficientField::gaussian_bump(1.0, 0.4, 1.2, {0, 0, 0}),
                           CoefficientField::constant(1.0), 2};
  const PhasePoint q0 = on_unit_shell(radial, {1.3, 0.0, 0.0}, {0.2, 1.0, 0.0});
  const FlowTrajectory rad_flow = hamiltonian_flow(radial, q0, horizon, dt / 2.0);
  double ell0 = 0, ell_drift = 0;
  for (std::size_t i = 0; i < rad_flow.points.size(); ++i) {
    const auto& p = rad_flow.points[i];
    const double ell = p.x[0] * p.xi[1] - p.x[1] * p.xi[0];
    if (i == 0)
      ell0 = ell;
    else
      ell_drift = std::max(ell_drift, std::abs(ell - ell0) / std::abs(ell0));
  }
  rep.checks.push_back(CheckResult::le(
      "angular-momentum", "angular momentum analog conserved on radial metrics", ell_drift,
      1e-7));

  // Compact-hole preset: certified against the analytic crossing-fraction
  // oracle for straight rays at speed 2.
  const double hole_radius = cfg.value("hole_radius", 2.0);
  const double hole_flat = cfg.value("hole_flat", 0.5);
  const double horizon_gcc = cfg.value("gcc_horizon", 10.0);
  HamiltonianSystem hole{CoefficientField::constant(1.0),
                         CoefficientField::bump_complement(1.0, hole_radius, hole_flat,
                                                           {0, 0, 0}),
                         2};
  GccSampleSpec spec;
  spec.box_lo = {-3.0, -3.0, 0.0};
  spec.box_hi = {3.0, 3.0, 0.0};
  spec.positions_per_axis = cfg.value("positions_per_axis", 16);
  spec.directions = cfg.value("directions", 64);
  const GccReport hole_report = check_gcc(hole, spec, horizon_gcc, /*alpha=*/0.0,
                                           cfg.value("gcc_dt", 0.01), /*keep_samples=*/true);
  writer.write_gcc_samples("gcc-hole", hole_report);

  // Oracle: worst ray crosses the full diameter at speed 2; the plateau bump
  // integrates in closed form along the chord.
  const double chord_integral =
      2.0 * hole_radius * (hole_flat + (1.0 - hole_flat) * 8.0 / 15.0);
  const double oracle = 1.0 - (chord_integral / 2.0) / horizon_gcc;
  rep.checks.push_back(CheckResult::ge(
      "hole-min-average", "compact-hole min damping average meets the crossing oracle",
      hole_report.min_average, oracle * 0.95,
      "oracle=" + std::to_string(oracle) +
          " measured=" + std::to_string(hole_report.min_average)));
  if (hole_report.min_on_boundary)
    rep.notes.push_back("hole preset: minimum attained on the sample-box boundary");

  // Trapped preset: a stable circular geodesic at r = 1 inside the undamped
  // hole (orbit below the sigmoid inflection so the radial potential has a
  // local max).
  HamiltonianSystem trapped{
      CoefficientField::sigmoid_ring(1.0, 16.0 / 11.0, 1.0 + 0.1 * std::log(3.0), 0.1,
                                     {0, 0, 0}),
      CoefficientField::bump_complement(1.0, cfg.value("trap_damping_radius", 2.5), 0.9,
                                        {0, 0, 0}),
      2};
  const GccReport trap_report =
      check_gcc(trapped, spec, horizon_gcc, cfg.value("trap_alpha", 0.05),
                cfg.value("gcc_dt", 0.01), /*keep_samples=*/true);
  writer.write_gcc_samples("gcc-trapped", trap_report);
  rep.checks.push_back(CheckResult::flag(
      "trapped-fails", "trapped-geodesic preset fails the control condition",
      !trap_report.pass, "min_average=" + std::to_string(trap_report.min_average)));
  rep.config_echo["derived"] = {{"oracle", oracle},
                                {"hole_min_average", hole_report.min_average},
                                {"trapped_min_average", trap_report.min_average}};
  return rep;
}

// ---------------------------------------------------------------------------
// gcc-wave: damped wave with compactly vanishing damping

ScenarioReport scenario_gcc_wave(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  WaveSetup setup = build_wave_setup(cfg, /*surrogate=*/false);
  const Grid& grid = setup.a->grid();

  // Energy decay certificate t^{1/2} for the vanishing-damping run.
  CounterRng rng(cfg.value("seed", 42u), 31);
  CauchyData data = make_random_h_data(*setup.a, rng);
  BlockGenerator gen(setup.a, setup.b);
  const std::vector<double> times = times_from_json(cfg.at("times"));
  Trajectory traj = propagate(gen, data, times);
  TimeSeries series;
  series.label = "energy0-gcc";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    series.times.push_back(traj.times[i]);
    series.values.push_back(
        discrete_norm(traj.states[i], NormKind::energy0, grid, setup.a.get()));
  }
  writer.write_trajectory("gcc-trajectory", traj, *setup.a);
  const double t_lo = cfg.at("window").at("t_lo").get<double>();
  const double t_hi = cfg.at("window").at("t_hi").get<double>();
  const BoundCertificate cert = certify_bound(series, 0.5, BoundModifier::none, t_lo, t_hi);
  rep.checks.push_back(CheckResult::flag(
      "gcc-energy-certificate", "t^{1/2} energy certificate for vanishing damping",
      cert.stabilized && std::isfinite(cert.sup_value),
      "sup=" + std::to_string(cert.sup_value)));

  // Low-frequency resolvent bound |la| ||R|| = O(1), plus middle frequencies.
  const json& sv = cfg.at("survey");
  const Grid sgrid = grid_from_json(sv.at("grid"));
  auto p_op = std::make_shared<SelfAdjointOperator>(
      build_divergence_form(sgrid, field_from_json(cfg.at("fields").at("g"))));
  DampingOperator a_damp(field_from_json(cfg.at("fields").at("a")).sample(sgrid), 0.0);

  std::vector<Complex> near;
  for (double r : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1})
    for (double deg : {0.0, 45.0, 85.0}) {
      const double th = deg * std::numbers::pi / 180.0;
      near.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  std::vector<double> mids;
  for (int i = 0; i < 16; ++i) mids.push_back(0.2 + i * 0.3);
  const GccResolventSurvey survey = gcc_resolvent_survey(*p_op, a_damp, near, mids);
  rep.checks.push_back(CheckResult::flag(
      "low-frequency-bound", "|lambda| * resolvent norm bounded near the origin",
      survey.all_exist && std::isfinite(survey.near_origin_sup),
      "sup=" + std::to_string(survey.near_origin_sup)));

  // Stability of the scaled sup under one coarsening of the survey grid.
  json coarse_sv = sv;
  coarse_sv["grid"]["n"] = sv.at("grid").at("n").get<int>() / 2;
  const Grid cgrid = grid_from_json(coarse_sv.at("grid"));
  auto cp_op = std::make_shared<SelfAdjointOperator>(
      build_divergence_form(cgrid, field_from_json(cfg.at("fields").at("g"))));
  DampingOperator ca_damp(field_from_json(cfg.at("fields").at("a")).sample(cgrid), 0.0);
  const GccResolventSurvey coarse_survey = gcc_resolvent_survey(*cp_op, ca_damp, near, mids);
  const double drift = std::abs(survey.near_origin_sup - coarse_survey.near_origin_sup) /
                       std::max(coarse_survey.near_origin_sup, 1e-300);
  rep.checks.push_back(CheckResult::le(
      "low-frequency-stability", "scaled resolvent sup stable under grid refinement", drift,
      cfg.value("survey_drift_tolerance", 0.3)));
  rep.checks.push_back(CheckResult::flag(
      "mid-frequency", "resolvent exists along the middle-frequency imaginary axis",
      survey.all_exist && std::isfinite(survey.mid_frequency_sup),
      survey.failure_note.empty() ? ("sup=" + std::to_string(survey.mid_frequency_sup))
                                  : survey.failure_note));
  rep.config_echo["derived"] = {{"near_origin_sup", survey.near_origin_sup},
                                {"mid_frequency_sup", survey.mid_frequency_sup}};
  return rep;
}

// ---------------------------------------------------------------------------
// indefinite-damping

ScenarioReport scenario_indefinite(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  const Grid grid = grid_from_json(cfg.at("grid"));
  auto p_op = std::make_shared<SelfAdjointOperator>(
      build_divergence_form(grid, field_from_json(cfg.at("fields").at("g"))));
  const Eigen::VectorXd a_diag = field_from_json(cfg.at("fields").at("a")).sample(grid);
  const Eigen::VectorXd b_diag = field_from_json(cfg.at("fields").at("b")).sample(grid);

  auto run_case = [&](double eps, bool expect_pass) {
    DampingOperator damping = DampingOperator::indefinite(a_diag - eps * b_diag);
    std::vector<Complex> near;
    for (double r : {1e-2, 3e-2, 1e-1})
      for (double deg : {45.0, 85.0}) {
        const double th = deg * std::numbers::pi / 180.0;
        near.emplace_back(r * std::cos(th), r * std::sin(th));
      }
    std::vector<double> mids;
    for (int i = 0; i < 12; ++i) mids.push_back(0.25 + 0.4 * i);
    const GccResolventSurvey survey = gcc_resolvent_survey(*p_op, damping, near, mids);

    bool blowup = false;
    double growth_sup = 0.0;
    try {
      BlockGenerator gen(p_op, damping);
      CounterRng rng(cfg.value("seed", 42u), 37);
      CauchyData data = make_random_h_data(*p_op, rng);
      PropagateOptions opts;
      opts.growth_rate = cfg.value("growth_rate", 0.2);
      opts.blowup_factor = 50.0;
      const std::vector<double> times = times_from_json(cfg.at("times"));
      Trajectory traj = propagate(gen, data, times, opts);
      Eigen::VectorXd z0(2 * grid.size());
      z0 << data.u0, data.u1;
      const double n0 = discrete_norm(z0, NormKind::energy0, grid, p_op.get());
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double nt =
            discrete_norm(traj.states[i], NormKind::energy0, grid, p_op.get());
        growth_sup = std::max(
            growth_sup, nt / (n0 * std::exp(opts.growth_rate * traj.times[i])));
      }
    } catch (const std::runtime_error&) {
      blowup = true;
    }
    const bool healthy = survey.all_exist && !blowup && growth_sup <= 1.0 + 1e-8;
    std::ostringstream os;
    os << "eps=" << eps << " survey_ok=" << survey.all_exist << " blowup=" << blowup
       << " growth_sup=" << growth_sup;
    rep.checks.push_back(CheckResult::flag(
        expect_pass ? "perturbation-benign" : "perturbation-detected",
        expect_pass ? "small sign-indefinite perturbation keeps decay"
                    : "large perturbation failure is detected and reported",
        expect_pass ? healthy : !healthy, os.str()));
  };

  run_case(cfg.value("eps_small", 0.05), true);
  run_case(cfg.value("eps_large", 5.0), false);
  (void)writer;
  return rep;
}

// ---------------------------------------------------------------------------
// d2-log-profile: endpoint profile certificate with the log modifier

ScenarioReport scenario_d2_log_profile(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;
  WaveSetup plain = build_wave_setup(cfg, /*surrogate=*/false);   // damping a only
  WaveSetup surro = build_wave_setup(cfg, /*surrogate=*/true);    // c = a + b
  const Grid& grid = plain.a->grid();

  CauchyData data = data_from_json(cfg.at("data"), grid);
  BlockGenerator gen(plain.a, plain.b);
  const std::vector<double> times = times_from_json(cfg.at("times"));
  Trajectory traj = propagate(gen, data, times);
  HeatProfile profile =
      profile_v(*surro.tilde_a, surro.b, data, traj.times, ProfileVariant::gcc_surrogate);
  ProfileDifference diff = profile_difference(traj, profile, *plain.a, data);
  writer.write_profile_difference("d2-profile-difference", diff.difference, diff.normalized,
                                  1.0);

  const double t_lo = cfg.at("window").at("t_lo").get<double>();
  const double t_hi =
      std::min(cfg.at("window").at("t_hi").get<double>(), gap_time_of(*surro.tilde_a));
  const BoundCertificate cert =
      certify_bound(diff.normalized, 1.0, BoundModifier::log_factor, t_lo, t_hi);
  rep.checks.push_back(CheckResult::flag(
      "d2-log-certificate",
      "sup of t/log t * normalized profile difference stabilizes on the 2d grid",
      cert.stabilized && std::isfinite(cert.sup_value),
      "sup=" + std::to_string(cert.sup_value) +
          " q3-ratio=" + std::to_string(cert.last_quartile_ratio)));
  rep.notes.push_back(
      "bound-style check: the log factor is not separable by slope fitting at this scale");
  rep.config_echo["derived"] = {{"gap_time", gap_time_of(*surro.tilde_a)},
                                {"certificate_sup", cert.sup_value}};
  return rep;
}

// ---------------------------------------------------------------------------
// cutoff-resolvent: endpoint growth exponents of chi R chi near the origin

ScenarioReport scenario_cutoff_resolvent(const json& cfg, RunWriter& writer, int) {
  ScenarioReport rep;

  auto run_dim = [&](const json& sub, const std::string& tag, double target, double tol,
                     bool expect_log) {
    const Grid grid = grid_from_json(sub.at("grid"));
    auto p_op = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator c_op =
        DampingOperator::from_field(grid, CoefficientField::constant(sub.value("c", 1.0)));
    const CoefficientField chi_field = field_from_json(sub.at("chi"));
    const Eigen::VectorXd chi = chi_field.sample(grid);

    std::vector<double> radii;
    const double r_lo = sub.value("r_lo", 1e-4), r_hi = sub.value("r_hi", 1e-1);
    const int nr = sub.value("n_radii", 13);
    for (int i = 0; i < nr; ++i)
      radii.push_back(r_lo * std::pow(r_hi / r_lo, double(i) / (nr - 1)));
    const CutoffSurvey survey = cutoff_resolvent_survey(*p_op, c_op, chi, radii);

    TimeSeries ts;
    ts.label = tag;
    for (const auto& row : survey.rows) {
      ts.times.push_back(row.radius);
      ts.values.push_back(row.measured);
    }
    writer.write_series(tag, ts);

    if (expect_log) {
      // The log factor is not separable by direct slope fitting at this
      // scale: compensate it and require the leftover exponent in the band,
      // with the log model beating the pure power model.
      const bool in_band = survey.log_compensated_exponent > target - tol &&
                           survey.log_compensated_exponent < 0.0;
      const bool log_better = survey.log_fit_residual < survey.power_fit_residual;
      rep.checks.push_back(CheckResult::flag(
          tag, "cutoff resolvent grows consistently with a log in 2d",
          in_band && log_better,
          "raw_exponent=" + std::to_string(survey.fitted_exponent) +
              " log_compensated=" + std::to_string(survey.log_compensated_exponent) +
              " log_res=" + std::to_string(survey.log_fit_residual) +
              " pow_res=" + std::to_string(survey.power_fit_residual)));
    } else {
      rep.checks.push_back(CheckResult::le(
          tag, "cutoff resolvent growth exponent", std::abs(survey.fitted_exponent - target),
          tol, "exponent=" + std::to_string(survey.fitted_exponent)));
    }
    return survey;
  };

  run_dim(cfg.at("d1"), "cutoff-exponent-d1", -0.5, cfg.value("d1_tolerance", 0.1), false);

  {  // contrast: the uncut resolvent blows up like 1/|lambda|
    const json& sub = cfg.at("d1");
    const Grid grid = grid_from_json(sub.at("grid"));
    auto p_op = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator c_op = DampingOperator::from_field(grid, CoefficientField::constant(1.0));
    std::vector<double> radii;
    for (int i = 0; i < 9; ++i) radii.push_back(1e-4 * std::pow(1e3, i / 8.0));
    const CutoffSurvey full =
        cutoff_resolvent_survey(*p_op, c_op, Eigen::VectorXd::Ones(grid.size()), radii);
    rep.checks.push_back(CheckResult::le(
        "uncut-exponent-d1", "full resolvent blows up like 1/|lambda| in contrast",
        std::abs(full.fitted_exponent + 1.0), 0.1,
        "exponent=" + std::to_string(full.fitted_exponent)));
  }

  run_dim(cfg.at("d2"), "cutoff-exponent-d2", 0.0, 0.15, true);
  return rep;
}

// ---------------------------------------------------------------------------
// Catalog and dispatch

struct ScenarioEntry {
  ScenarioInfo info;
  json defaults;
  ScenarioReport (*fn)(const json&, RunWriter&, int);
};

json criterion3_defaults() {
  return json{
      {"grid", {{"dim", 1}, {"n", 2048}, {"length", 400.0}, {"boundary", "periodic"}}},
      {"fields",
       {{"g", {{"preset", "constant"}, {"value", 1.0}}},
        {"a", {{"preset", "sine"}, {"base", 1.0}, {"amp", 0.5}, {"period", 400.0}}}}},
      {"data", {{"preset", "gaussian"}, {"width", 5.0}}},
      {"times", {{"kind", "geometric"}, {"t0", 10.0}, {"t1", 200.0}, {"count", 40}}},
      {"window", {{"t_lo", 20.0}, {"t_hi", 200.0}}},
      {"seed", 42}};
}

const std::vector<ScenarioEntry>& registry() {
  static const std::vector<ScenarioEntry> entries = [] {
    std::vector<ScenarioEntry> r;

    r.push_back({{"identities",
                  "machine-precision resolvent and projector identities on random instances",
                  {"operators", "resolvent_lab"}},
                 json{{"instances", 50}, {"max_size", 50}, {"seed", 20240901}},
                 &scenario_identities});

    r.push_back({{"lemma-surveys",
                  "resolvent norm bounds: proof constants and refinement-stable constants",
                  {"operators", "resolvent_lab"}},
                 json{{"seed", 7}},
                 &scenario_lemma_surveys});

    {
      json d = criterion3_defaults();
      d["slope_threshold"] = -0.9;
      r.push_back({{"thm1.1-1d",
                    "solution approaches the heat profile at rate 1/t (1d)",
                    {"operators", "damped_wave", "heat_profile", "rates"}},
                   d, &scenario_thm11});
    }
    {
      json d = criterion3_defaults();
      d["slope_threshold"] = -0.9;
      d["data"] = {{"preset", "gaussian"}, {"width", 4.0}, {"center_fraction", 0.45},
                   {"in_u0", true}, {"in_u1", true}};
      r.push_back({{"individual",
                    "for fixed data, t * profile distance tends to zero",
                    {"operators", "damped_wave", "heat_profile", "rates"}},
                   d, &scenario_thm11});
    }
    {
      json d = criterion3_defaults();
      d["m_times"] = {{"kind", "geometric"}, {"t0", 1.0}, {"t1", 100.0}, {"count", 20}};
      d["m_tolerance"] = 0.05;
      d["data"] = {{"preset", "gaussian"}, {"width", 5.0}, {"in_u0", true}, {"in_u1", true}};
      d["window"] = {{"t_lo", 10.0}, {"t_hi", 200.0}};
      r.push_back({{"thm1.2-1d",
                    "diffusion-rate upgrade: certificate at the measured L1->L2 exponent",
                    {"operators", "damped_wave", "heat_profile", "rates"}},
                   d, &scenario_thm12});
    }
    r.push_back(
        {{"optimality",
          "rate 1/t is sharp: eigenmode data and the closed-contour residue envelope",
          {"operators", "damped_wave", "heat_profile", "contour"}},
         json{{"grid", {{"dim", 1}, {"n", 1024}, {"length", 180.0}, {"boundary", "periodic"}}},
              {"fields",
               {{"g", {{"preset", "constant"}, {"value", 1.0}}},
                {"a", {{"preset", "constant"}, {"value", 1.0}}}}},
              {"targets", {0.2, 0.1, 0.05}},
              {"residue_a", {0.2, 0.1, 0.05}},
              {"panels", 16},
              {"ratio_floor", 0.1},
              {"residue_tolerance", 1e-4},
              {"seed", 42}},
         &scenario_optimality});
    {
      json d = criterion3_defaults();
      d["draws"] = 20;
      d["times"] = {{"kind", "geometric"}, {"t0", 10.0}, {"t1", 200.0}, {"count", 30}};
      d["window"] = {{"t_lo", 10.0}, {"t_hi", 200.0}};
      d["drift_tolerance"] = 0.10;
      d["localized_slope_threshold"] = -0.6;
      r.push_back({{"energy-decay",
                    "abstract t^{-1/2} energy decay certificate over random draws",
                    {"operators", "damped_wave", "rates"}},
                   d, &scenario_energy_decay});
    }
    {
      json d = criterion3_defaults();
      d["eps"] = 0.1;
      d["times"] = {{"kind", "geometric"}, {"t0", 5.0}, {"t1", 200.0}, {"count", 40}};
      d["decreasing_after"] = 20.0;
      r.push_back({{"highfreq-t2",
                    "high-frequency cutoff part decays like t^{-2}",
                    {"operators", "damped_wave", "heat_profile", "rates"}},
                   d, &scenario_highfreq});
    }
    {
      json d = criterion3_defaults();
      d["norm_times"] = {{"kind", "geometric"}, {"t0", 1.0}, {"t1", 100.0}, {"count", 16}};
      d["flow_times"] = {{"kind", "uniform"}, {"t0", 1e-6}, {"t1", 100.0}, {"count", 21}};
      d["slope_tolerance"] = 0.05;
      r.push_back({{"heat-bounds-1d",
                    "heat semigroup battery in 1d: contraction, conservation, positivity, Nash",
                    {"operators", "heat_profile", "rates"}},
                   d, &scenario_heat_bounds});
    }
    {
      json d;
      d["grid"] = {{"dim", 2}, {"n", 48}, {"length", 80.0}, {"boundary", "periodic"}};
      d["fields"] = {{"g", {{"preset", "constant"}, {"value", 1.0}}},
                     {"a", {{"preset", "sine"}, {"base", 1.0}, {"amp", 0.3}, {"period", 80.0}}}};
      d["data"] = {{"preset", "gaussian"}, {"width", 6.0}};
      d["norm_times"] = {{"kind", "geometric"}, {"t0", 1.5}, {"t1", 16.0}, {"count", 12}};
      d["flow_times"] = {{"kind", "uniform"}, {"t0", 1e-6}, {"t1", 16.0}, {"count", 17}};
      d["slope_tolerance"] = 0.08;
      d["nash_refinement"] = false;
      d["seed"] = 42;
      r.push_back({{"heat-bounds-2d",
                    "heat semigroup battery on the 48^2 grid, including the t^{-1/2} norm decay",
                    {"operators", "heat_profile", "rates"}},
                   d, &scenario_heat_bounds});
    }
    r.push_back({{"contour-semigroup",
                  "contour quadrature reconstructs the analytic semigroup from resolvents",
                  {"operators", "contour"}},
                 json{{"seed", 42}},
                 &scenario_contour_semigroup});
    r.push_back({{"gcc-audit",
                  "Hamiltonian flow quality and the geometric control condition presets",
                  {"gcc"}},
                 json{{"flow_horizon", 8.0},
                      {"flow_dt", 0.02},
                      {"gcc_horizon", 10.0},
                      {"gcc_dt", 0.01},
                      {"hole_radius", 2.0},
                      {"hole_flat", 0.5},
                      {"positions_per_axis", 16},
                      {"directions", 64},
                      {"trap_alpha", 0.05}},
                 &scenario_gcc_audit});
    {
      json d;
      d["grid"] = {{"dim", 1}, {"n", 2048}, {"length", 80.0}, {"boundary", "periodic"}};
      d["fields"] = {
          {"g", {{"preset", "constant"}, {"value", 1.0}}},
          {"a",
           {{"preset", "bump_complement"}, {"outside", 1.0}, {"radius", 2.0}, {"flat", 0.5},
            {"center", {40.0, 0.0, 0.0}}}}};
      d["times"] = {{"kind", "geometric"}, {"t0", 2.0}, {"t1", 16.0}, {"count", 24}};
      d["window"] = {{"t_lo", 2.0}, {"t_hi", 16.0}};
      d["survey"] = {{"grid", {{"dim", 1}, {"n", 1024}, {"length", 80.0},
                               {"boundary", "periodic"}}}};
      d["seed"] = 42;
      r.push_back({{"gcc-wave",
                    "damped wave with compactly vanishing damping: energy decay and resolvent",
                    {"operators", "damped_wave", "resolvent_lab", "rates"}},
                   d, &scenario_gcc_wave});
    }
    {
      json d;
      d["grid"] = {{"dim", 1}, {"n", 512}, {"length", 40.0}, {"boundary", "periodic"}};
      d["fields"] = {
          {"g", {{"preset", "constant"}, {"value", 1.0}}},
          {"a",
           {{"preset", "bump_complement"}, {"outside", 1.0}, {"radius", 2.0}, {"flat", 0.5},
            {"center", {20.0, 0.0, 0.0}}}},
          {"b", {{"preset", "constant"}, {"value", 1.0}}}};
      d["times"] = {{"kind", "geometric"}, {"t0", 1.0}, {"t1", 50.0}, {"count", 24}};
      d["eps_small"] = 0.05;
      d["eps_large"] = 5.0;
      d["growth_rate"] = 0.2;
      d["seed"] = 42;
      r.push_back({{"indefinite-damping",
                    "sign-indefinite perturbation: benign when small, detected when large",
                    {"operators", "damped_wave", "resolvent_lab"}},
                   d, &scenario_indefinite});
    }
    {
      json d;
      d["grid"] = {{"dim", 2}, {"n", 48}, {"length", 80.0}, {"boundary", "periodic"}};
      d["fields"] = {
          {"g", {{"preset", "constant"}, {"value", 1.0}}},
          {"a",
           {{"preset", "bump_complement"}, {"outside", 1.0}, {"radius", 6.0}, {"flat", 0.4},
            {"center", {40.0, 40.0, 0.0}}}},
          {"b",
           {{"preset", "bump"}, {"amp", 1.0}, {"radius", 7.0}, {"flat", 0.5},
            {"center", {40.0, 40.0, 0.0}}}}};
      d["data"] = {{"preset", "gaussian"}, {"width", 6.0}};
      d["times"] = {{"kind", "geometric"}, {"t0", 2.0}, {"t1", 16.0}, {"count", 24}};
      d["window"] = {{"t_lo", 2.0}, {"t_hi", 16.0}};
      d["seed"] = 42;
      r.push_back({{"d2-log-profile",
                    "2d endpoint: profile certificate with the t^{-1} log t modifier",
                    {"operators", "damped_wave", "heat_profile", "rates"}},
                   d, &scenario_d2_log_profile});
    }
    {
      json d;
      d["d1"] = {{"grid", {{"dim", 1}, {"n", 4096}, {"length", 2000.0},
                           {"boundary", "periodic"}}},
                 {"chi",
                  {{"preset", "bump"}, {"amp", 1.0}, {"radius", 1.5}, {"flat", 0.65},
                   {"center", {1000.0, 0.0, 0.0}}}},
                 {"r_lo", 1e-4},
                 {"r_hi", 1e-1},
                 {"n_radii", 13}};
      d["d2"] = {{"grid", {{"dim", 2}, {"n", 90}, {"length", 150.0},
                           {"boundary", "periodic"}}},
                 {"chi",
                  {{"preset", "bump"}, {"amp", 1.0}, {"radius", 5.0}, {"flat", 0.5},
                   {"center", {75.0, 75.0, 0.0}}}},
                 {"r_lo", 1e-3},
                 {"r_hi", 1e-1},
                 {"n_radii", 10}};
      d["d1_tolerance"] = 0.1;
      r.push_back({{"cutoff-resolvent",
                    "endpoint growth of the cutoff resolvent: |la|^{-1/2} in 1d, log in 2d",
                    {"operators", "resolvent_lab", "rates"}},
                   d, &scenario_cutoff_resolvent});
    }
    return r;
  }();
  return entries;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

json scenario_catalog_json() {
  json j = json::array();
  for (const auto& e : registry())
    j.push_back({{"name", e.info.name},
                 {"paper_ref", e.info.anchor},
                 {"modules", e.info.modules},
                 {"defaults", e.defaults}});
  return j;
}

json default_config(const std::string& scenario) {
  for (const auto& e : registry())
    if (e.info.name == scenario) {
      json d = e.defaults;
      d["scenario"] = scenario;
      return d;
    }
  std::ostringstream os;
  os << "unknown scenario '" << scenario << "'; known:";
  for (const auto& e : registry()) os << " " << e.info.name;
  throw std::invalid_argument(os.str());
}

ScenarioReport run_scenario(const json& config, const std::filesystem::path& out_dir,
                            int parallel) {
  const std::string name = config.at("scenario").get<std::string>();
  for (const auto& e : registry()) {
    if (e.info.name != name) continue;
    json merged = e.defaults;
    merged.merge_patch(config);
    RunWriter writer(out_dir);
    ScenarioReport rep = e.fn(merged, writer, parallel);
    rep.scenario = name;
    json echo = merged;
    if (rep.config_echo.is_object())
      for (auto& [k, v] : rep.config_echo.items()) echo[k] = v;
    rep.config_echo = echo;
    writer.write_summary(rep);
    return rep;
  }
  throw std::invalid_argument(default_config(name).dump());  // throws with catalog
}

}  // namespace dwlab
