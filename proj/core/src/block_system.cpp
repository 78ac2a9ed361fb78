#include "dwlab/block_system.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dwlab {

BlockGenerator::BlockGenerator(std::shared_ptr<const SelfAdjointOperator> a, DampingOperator b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (!a_) throw std::invalid_argument("block generator: null operator");
  const Eigen::Index n = a_->size();
  if (b_.size() != n) throw std::invalid_argument("block generator: size mismatch");
  block_ = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  block_.topRightCorner(n, n).setIdentity();
  block_.bottomLeftCorner(n, n) = -a_->matrix();
  block_.bottomRightCorner(n, n) = -b_.diagonal().asDiagonal().toDenseMatrix();
}

std::shared_ptr<const Eigen::MatrixXd> BlockGenerator::step_matrix(double dt) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = step_cache_.find(dt);
  if (it != step_cache_.end()) return it->second;
  auto e = std::make_shared<Eigen::MatrixXd>((block_ * dt).exp());
  step_cache_.emplace(dt, e);
  return e;
}

BlockGenerator build_block_generator(std::shared_ptr<const SelfAdjointOperator> a,
                                     DampingOperator b) {
  return BlockGenerator(std::move(a), std::move(b));
}

namespace {

void require_ascending_positive(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("propagate: empty time grid");
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw std::invalid_argument("propagate: times must be ascending and > 0");
    prev = t;
  }
}

// One Dormand-Prince 5(4) step; returns the 5th-order state and the embedded
// error estimate.
void rkdp_step(const Eigen::MatrixXd& m, const Eigen::VectorXd& z, double h,
               Eigen::VectorXd& out, double& err_norm, const PropagateOptions& opts) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  const Eigen::VectorXd k1 = m * z;
  const Eigen::VectorXd k2 = m * (z + h * (c2 * k1));
  const Eigen::VectorXd k3 = m * (z + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
  const Eigen::VectorXd k4 = m * (z + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
  const Eigen::VectorXd k5 =
      m * (z + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                    212.0 / 729 * k4));
  const Eigen::VectorXd k6 =
      m * (z + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                    49.0 / 176 * k4 - 5103.0 / 18656 * k5));
  out = z + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                 2187.0 / 6784 * k5 + 11.0 / 84 * k6);
  const Eigen::VectorXd k7 = m * out;
  const Eigen::VectorXd z4 = z + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 +
                                      393.0 / 640 * k4 - 92097.0 / 339200 * k5 +
                                      187.0 / 2100 * k6 + 1.0 / 40 * k7);
  const double scale = opts.rk_abs_tol + opts.rk_rel_tol * std::max(z.norm(), out.norm());
  err_norm = (out - z4).norm() / scale;
  (void)c3;
  (void)c4;
  (void)c5;
}

Trajectory propagate_rk(const BlockGenerator& gen, const CauchyData& data,
                        const std::vector<double>& times, const PropagateOptions& opts) {
  const Eigen::MatrixXd& m = gen.block();
  Trajectory traj;
  traj.method = "rk-check";
  Eigen::VectorXd z(gen.state_size());
  z << data.u0, data.u1;
  double t = 0.0;
  double h = std::min(times.front(), 1.0) / 16.0;
  for (double target : times) {
    while (t < target) {
      h = std::min(h, target - t);
      Eigen::VectorXd znew;
      double err;
      rkdp_step(m, z, h, znew, err, opts);
      if (err <= 1.0) {
        t += h;
        z = std::move(znew);
      }
      const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::min(5.0, std::max(0.2, grow));
    }
    traj.times.push_back(t);
    traj.states.push_back(z);
  }
  return traj;
}

}  // namespace

Trajectory propagate(const BlockGenerator& gen, const CauchyData& data,
                     const std::vector<double>& times, const PropagateOptions& opts) {
  require_ascending_positive(times);
  if (data.u0.size() + data.u1.size() != gen.state_size())
    throw std::invalid_argument("propagate: data size does not match generator");
  if (opts.use_rk_check) return propagate_rk(gen, data, times, opts);

  const double dt = opts.dt > 0.0 ? opts.dt : 0.05 * times.front();
  auto step = gen.step_matrix(dt);

  // Snap each sample to a step multiple, keeping the snapped list strictly
  // increasing.
  std::vector<long> ksteps;
  long prev = 0;
  for (double t : times) {
    long k = std::max<long>(std::lround(t / dt), prev + 1);
    ksteps.push_back(k);
    prev = k;
  }

  Trajectory traj;
  traj.method = "stepped-exponential";
  Eigen::VectorXd z(gen.state_size());
  z << data.u0, data.u1;
  const double z0_norm = std::max(z.norm(), 1e-300);

  long k = 0;
  for (std::size_t j = 0; j < ksteps.size(); ++j) {
    while (k < ksteps[j]) {
      z = *step * z;
      ++k;
      const double t = k * dt;
      const double guard =
          opts.blowup_factor * (1.0 + t) * std::exp(opts.growth_rate * t) * z0_norm;
      if (!(z.norm() <= guard)) {
        std::ostringstream os;
        os << "propagate: state norm " << z.norm() << " exceeded the growth guard " << guard
           << " at t=" << t << " (damping outside the dissipative/perturbative regime)";
        throw std::runtime_error(os.str());
      }
    }
    traj.times.push_back(k * dt);
    traj.states.push_back(z);
  }
  return traj;
}

EnergyPair energy(const Eigen::VectorXd& state, const SelfAdjointOperator& a) {
  EnergyPair e;
  e.energy0 = discrete_norm(state, NormKind::energy0, a.grid(), &a);
  e.energyH = discrete_norm(state, NormKind::energyH, a.grid(), &a);
  return e;
}

DissipationReport check_dissipation(const BlockGenerator& gen, const CauchyData& data,
                                    const std::vector<double>& times, double derivative_tol) {
  if (times.size() < 3)
    throw std::invalid_argument("check_dissipation: need at least 3 uniform samples");
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * dt)
      throw std::invalid_argument("check_dissipation: times must be uniform");

  PropagateOptions opts;
  opts.dt = dt / std::max(1.0, std::ceil(dt / (0.05 * times.front())));
  Trajectory traj = propagate(gen, data, times, opts);

  const auto& a = gen.a();
  const Eigen::Index n = a.size();
  const double meas = a.grid().cell_measure();

  std::vector<double> e_half(traj.states.size());   // E(t) = 1/2 ||z||_{H0}^2
  std::vector<double> bvv(traj.states.size());      // (B v, v)_{L2}
  double norm_prev = -1.0;
  DissipationReport rep;
  double scale = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double norm0 = discrete_norm(traj.states[i], NormKind::energy0, a.grid(), &a);
    e_half[i] = 0.5 * norm0 * norm0;
    const Eigen::VectorXd v = traj.states[i].tail(n);
    bvv[i] = meas * v.dot(gen.b().apply(v));
    scale = std::max(scale, std::max(e_half[i], bvv[i]));
    if (i > 0 && norm_prev > 0.0)
      rep.max_monotonicity_violation =
          std::max(rep.max_monotonicity_violation, (norm0 - norm_prev) / norm_prev);
    norm_prev = norm0;
  }
  for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
    const double dedt = (e_half[i + 1] - e_half[i - 1]) / (2.0 * dt);
    rep.max_derivative_mismatch =
        std::max(rep.max_derivative_mismatch, std::abs(dedt + bvv[i]) / std::max(scale, 1e-300));
  }
  // With B = 0 the energy is conserved; allow roundoff either way.
  rep.monotone = rep.max_monotonicity_violation <= 1e-8;
  rep.derivative_matches = rep.max_derivative_mismatch <= derivative_tol;
  return rep;
}

GrowthBound propagator_growth_bound(const BlockGenerator& gen, int draws,
                                    const std::vector<double>& times, std::uint64_t seed,
                                    const PropagateOptions& opts) {
  GrowthBound bound;
  bound.draws = draws;
  const auto& a = gen.a();
  CounterRng rng(seed, /*stream=*/17);
  for (int d = 0; d < draws; ++d) {
    CauchyData data = make_random_h_data(a, rng);
    const Eigen::VectorXd z0 = (Eigen::VectorXd(2 * a.size()) << data.u0, data.u1).finished();
    const double h_norm = discrete_norm(z0, NormKind::energyH, a.grid(), &a);
    const double h0_norm = discrete_norm(z0, NormKind::energy0, a.grid(), &a);
    Trajectory traj = propagate(gen, data, times, opts);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const double nh = discrete_norm(traj.states[i], NormKind::energyH, a.grid(), &a);
      const double n0 = discrete_norm(traj.states[i], NormKind::energy0, a.grid(), &a);
      bound.h_constant = std::max(bound.h_constant, nh / ((1.0 + traj.times[i]) * h_norm));
      if (h0_norm > 0.0) bound.contraction_sup = std::max(bound.contraction_sup, n0 / h0_norm);
    }
  }
  return bound;
}

CauchyData make_gaussian_data(const Grid& grid, double width, double center_fraction,
                              bool in_u0, bool in_u1) {
  std::array<double, 3> c{0, 0, 0};
  for (int d = 0; d < grid.dim; ++d) c[d] = center_fraction * grid.length();
  Eigen::VectorXd bump(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto x = grid.coord(i);
    double r2 = 0;
    for (int d = 0; d < grid.dim; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
    bump[i] = std::exp(-r2 / (width * width));
  }
  CauchyData data;
  data.u0 = in_u0 ? bump : Eigen::VectorXd::Zero(grid.size());
  data.u1 = in_u1 ? bump : Eigen::VectorXd::Zero(grid.size());
  std::ostringstream os;
  os << "gaussian(width=" << width << ", center=" << center_fraction << "L, u0=" << in_u0
     << ", u1=" << in_u1 << ")";
  data.provenance = os.str();
  return data;
}

CauchyData make_random_h_data(const SelfAdjointOperator& a, CounterRng& rng) {
  const Eigen::Index n = a.size();
  CauchyData data;
  data.u0 = rng.gaussian_vector(n);
  data.u1 = rng.gaussian_vector(n);
  Eigen::VectorXd z(2 * n);
  z << data.u0, data.u1;
  const double h_norm = discrete_norm(z, NormKind::energyH, a.grid(), &a);
  data.u0 /= h_norm;
  data.u1 /= h_norm;
  std::ostringstream os;
  os << "random-H-normalized(" << CounterRng::kGeneratorName << ", seed=" << rng.seed()
     << ", stream=" << rng.stream() << ")";
  data.provenance = os.str();
  return data;
}

CauchyData make_spectral_bump_data(const SelfAdjointOperator& tilde_a,
                                   const DampingOperator& b, double target_eigenvalue) {
  const auto& spec = tilde_a.spectrum();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < spec.eigenvalues.size(); ++i)
    if (std::abs(spec.eigenvalues[i] - target_eigenvalue) <
        std::abs(spec.eigenvalues[best] - target_eigenvalue))
      best = i;
  Eigen::VectorXd f = spec.eigenvectors.col(best);
  f /= discrete_norm(f, NormKind::L2, tilde_a.grid());
  CauchyData data;
  data.u0 = Eigen::VectorXd::Zero(f.size());
  data.u1 = b.apply_sqrt(f);
  std::ostringstream os;
  os << "spectral-bump(target=" << target_eigenvalue
     << ", eigenvalue=" << spec.eigenvalues[best] << ", mode=" << best << ")";
  data.provenance = os.str();
  return data;
}

CauchyData make_single_cell_data(const Grid& grid, int cell_index) {
  CauchyData data;
  data.u0 = Eigen::VectorXd::Zero(grid.size());
  data.u0[cell_index] = 1.0;
  data.u1 = Eigen::VectorXd::Zero(grid.size());
  data.provenance = "single-cell(" + std::to_string(cell_index) + ")";
  return data;
}

}  // namespace dwlab
