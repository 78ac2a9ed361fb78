// First-order form of the damped wave equation: the 2n x 2n block generator
// [[0, I], [-A, -B]], its propagator, energy functionals, and dissipativity
// checks.
#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dwlab/operators.hpp"
#include "dwlab/rng.hpp"

namespace dwlab {

struct CauchyData {
  Eigen::VectorXd u0;
  Eigen::VectorXd u1;
  std::string provenance;  // preset name + parameters + seed
};

class BlockGenerator {
 public:
  BlockGenerator(std::shared_ptr<const SelfAdjointOperator> a, DampingOperator b);

  const SelfAdjointOperator& a() const { return *a_; }
  std::shared_ptr<const SelfAdjointOperator> a_ptr() const { return a_; }
  const DampingOperator& b() const { return b_; }
  const Eigen::MatrixXd& block() const { return block_; }
  Eigen::Index state_size() const { return block_.rows(); }

  // exp(block * dt), computed once per dt and shared (immutable cache).
  std::shared_ptr<const Eigen::MatrixXd> step_matrix(double dt) const;

 private:
  std::shared_ptr<const SelfAdjointOperator> a_;
  DampingOperator b_;
  Eigen::MatrixXd block_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, std::shared_ptr<const Eigen::MatrixXd>> step_cache_;
};

BlockGenerator build_block_generator(std::shared_ptr<const SelfAdjointOperator> a,
                                     DampingOperator b);

struct Trajectory {
  std::vector<double> times;             // snapped to multiples of the step
  std::vector<Eigen::VectorXd> states;   // stacked (u, du/dt)
  std::string method;                    // "stepped-exponential" | "rk-check"
};

struct PropagateOptions {
  double dt = 0.0;  // 0: use 0.05 * first sample time
  // Allowed exponential growth rate of the plain state norm; 0 for the
  // dissipative regime, >0 for sign-indefinite damping experiments.
  double growth_rate = 0.0;
  double blowup_factor = 100.0;  // hard guard multiplier on top of (1+t)e^{rate t}
  bool use_rk_check = false;     // adaptive RK45 instead of the stepped exponential
  double rk_rel_tol = 1e-9;
  double rk_abs_tol = 1e-12;
};

// Samples of e^{t block} applied to the Cauchy data. The primary method
// computes exp(block*dt) once by scaling-and-squaring and advances by
// repeated multiplication; sample times are snapped to step multiples.
Trajectory propagate(const BlockGenerator& gen, const CauchyData& data,
                     const std::vector<double>& times, const PropagateOptions& opts = {});

struct EnergyPair {
  double energy0 = 0.0;  // (||sqrt(A)u||^2 + ||v||^2)^{1/2}
  double energyH = 0.0;  // adds ||u||^2
};

EnergyPair energy(const Eigen::VectorXd& state, const SelfAdjointOperator& a);

struct DissipationReport {
  // max over samples of relative increase of the energy0 norm (should be ~0)
  double max_monotonicity_violation = 0.0;
  // max over interior samples of |dE/dt + (B v, v)| / scale
  double max_derivative_mismatch = 0.0;
  bool monotone = false;
  bool derivative_matches = false;
};

DissipationReport check_dissipation(const BlockGenerator& gen, const CauchyData& data,
                                    const std::vector<double>& times,
                                    double derivative_tol = 1e-4);

struct GrowthBound {
  double h_constant = 0.0;        // sup ||U(t)f||_H / ((1+t) ||f||_H)
  double contraction_sup = 0.0;   // sup ||U(t)f||_H0 / ||f||_H0
  int draws = 0;
};

GrowthBound propagator_growth_bound(const BlockGenerator& gen, int draws,
                                    const std::vector<double>& times, std::uint64_t seed,
                                    const PropagateOptions& opts = {});

// Cauchy data presets.
CauchyData make_gaussian_data(const Grid& grid, double width, double center_fraction = 0.5,
                              bool in_u0 = true, bool in_u1 = false);
CauchyData make_random_h_data(const SelfAdjointOperator& a, CounterRng& rng);
// u0 = 0, u1 = B^{1/2} f with f the L2-normalized eigenvector of tilde_a whose
// eigenvalue is nearest the target.
CauchyData make_spectral_bump_data(const SelfAdjointOperator& tilde_a,
                                   const DampingOperator& b, double target_eigenvalue);
CauchyData make_single_cell_data(const Grid& grid, int cell_index);

}  // namespace dwlab
