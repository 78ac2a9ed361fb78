// Heat-type comparison solution and heat-semigroup estimates: the asymptotic
// profile B^{-1/2} e^{-t tilde_A} (B^{1/2} u0 + B^{-1/2} u1), operator-norm
// series L1->L2 / L1->L1 / L2->Linf, conservation/positivity/Nash checks, and
// the high-frequency spectral cutoff decay certificate.
#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "dwlab/block_system.hpp"
#include "dwlab/operators.hpp"
#include "dwlab/rates.hpp"
#include "dwlab/rng.hpp"

namespace dwlab {

enum class ProfileVariant { strict_positive, gcc_surrogate };

struct HeatProfile {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;  // v(t_k), grid-sized
  ProfileVariant variant = ProfileVariant::strict_positive;
};

// v(t) = B^{-1/2} e^{-t tilde_A} B^{1/2} u0 + B^{-1/2} e^{-t tilde_A} B^{-1/2} u1,
// both data terms entering with "+". `b` must be strictly positive (pass the
// surrogate c = a + b in the gcc variant).
HeatProfile profile_v(const SelfAdjointOperator& tilde_a, const DampingOperator& b,
                      const CauchyData& data, const std::vector<double>& times,
                      ProfileVariant variant = ProfileVariant::strict_positive);

struct ProfileDifference {
  TimeSeries difference;  // ||u(t) - v(t)||_{L2}
  TimeSeries normalized;  // divided by ||u0|| + ||sqrt(A) u0|| + ||u1||
};

ProfileDifference profile_difference(const Trajectory& traj, const HeatProfile& profile,
                                     const SelfAdjointOperator& a, const CauchyData& data);

enum class SemigroupNormKind { L1_to_L2, L1_to_L1, L2_to_Linf };

// Exact discrete operator norm of e^{-t op} between the cell-weighted spaces.
// For the L1 -> L1 norm an optional positive weight w measures mass as
// sum w_i |u_i| h^d; the conjugated heat semigroup is a contraction exactly
// in the modified-mass weight w = c^{1/2}, while the plain L1 norm is only
// uniformly bounded.
double semigroup_operator_norm(const SelfAdjointOperator& op, double t,
                               SemigroupNormKind kind,
                               const Eigen::VectorXd* l1_weight = nullptr);

struct OperatorNormSeries {
  TimeSeries series;
  SemigroupNormKind kind = SemigroupNormKind::L1_to_L2;
};

OperatorNormSeries semigroup_norm_series(const SelfAdjointOperator& op,
                                         const std::vector<double>& times,
                                         SemigroupNormKind kind,
                                         const Eigen::VectorXd* l1_weight = nullptr);

struct NashReport {
  double total_heat_drift = 0.0;     // relative drift of sum c^{1/2} u h^d
  double min_entry = 0.0;            // positivity floor over the trajectory
  bool quotient_monotone = false;    // H(t) nonincreasing
  double max_quotient_increase = 0.0;
  double nash_constant = 0.0;        // measured C_N over the draws
  int nash_draws = 0;
  bool positivity_ok = false;
  bool conservation_ok = false;
};

// Heat-flow battery for u(t) = e^{-t p_tilde} u0 with modified mass weight
// c^{1/2}: (i) conservation of the modified total heat, (ii) positivity for
// nonnegative u0, (iii) monotonicity of the Nash quotient
// H(t) = ||u||_{L2}^2 / ||c^{1/2}u||_{L1}^2, (iv) the discrete Nash
// inequality constant measured over random kernel-free draws (constants sit
// in the kernel on the torus, so the whole-space inequality is tested on the
// complement).
NashReport nash_and_conservation_checks(const SelfAdjointOperator& p_tilde,
                                        const DampingOperator& c, const Eigen::VectorXd& u0,
                                        const std::vector<double>& times, CounterRng& rng,
                                        int nash_draws = 16);

struct CutoffDecayResult {
  BoundCertificate certificate;  // sup over window of t^2 * ||Phi U(t) f||_H / ||f||_H
  TimeSeries series;             // ||Phi U(t) f||_H / ||f||_H
  double idempotence_residual = 0.0;  // ||Phi^2 - Phi|| / ||Phi||, max-norm
  double adjoint_residual = 0.0;      // ||Phi^T - B^{1/2} phi B^{-1/2}|| / ||Phi||
  bool cutoff_vacuous = false;        // eps below the lowest positive eigenvalue
};

// Decay of the high-frequency part Phi = B^{-1/2} phi(tilde_A) B^{1/2} with
// the step cutoff phi = 1{x >= eps}, applied componentwise to the propagated
// state.
CutoffDecayResult highfreq_cutoff_decay(const BlockGenerator& gen,
                                        const SelfAdjointOperator& tilde_a,
                                        const CauchyData& data, double eps,
                                        const std::vector<double>& times,
                                        double window_lo = 0.0, double window_hi = 0.0);

}  // namespace dwlab
