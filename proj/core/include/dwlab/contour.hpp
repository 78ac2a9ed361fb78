// Contour quadrature for resolvent integrals: the t-dependent arc around the
// origin, the short rays to +-delta + i*height, and the 45-degree diagonal
// rays, with composite Gauss-Legendre nodes graded toward the origin.
// Reconstructs analytic semigroups from resolvents and evaluates the
// low-frequency profile integral and the optimality residue.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "dwlab/block_system.hpp"
#include "dwlab/operators.hpp"

namespace dwlab {

struct ContourNode {
  std::complex<double> lambda;
  std::complex<double> weight;  // includes d(lambda)/ds and the GL weight
  int segment = 0;
  double s = 0.0;  // segment parameter
};

struct ContourSegment {
  std::string name;
  std::complex<double> start;
  std::complex<double> end;
};

struct Contour {
  std::vector<ContourNode> nodes;
  std::vector<ContourSegment> segments;
  double t_scale = 0.0;  // t used to size the arc (radius 1/t)
  double delta = 0.0;
  double height = 0.0;   // junction height a
  double truncation_radius = 0.0;
  int panels_per_segment = 0;
  bool with_diagonal_rays = true;

  // Max end-to-start gap between consecutive segments (0 by construction).
  double continuity_residual() const;
};

// Arc of radius 1/t through -i/t, rays to +-delta + i*height, and (optionally)
// diagonal rays truncated where e^{-t Im(lambda)} < 1e-14. Throws if r_max
// cannot accommodate the truncation target.
Contour build_contour(double t, double delta, double height, double r_max,
                            int panels_per_segment, bool with_diagonal_rays = true);

// (2 pi)^{-1} integral of (i lambda + op)^{-1} e^{i lambda t} over the full
// contour; equals e^{-t op} for symmetric PSD op. Errors if doubling the
// panel count moves the result by more than drift_tol (quadrature
// non-convergence).
Eigen::MatrixXd semigroup_via_contour(const SelfAdjointOperator& op, double t,
                                      const Contour& contour, bool convergence_check = true,
                                      double drift_tol = 1e-6);

// (2 pi)^{-1} integral over the around-origin contour of
// (1 - Phi) e^{i la t} [R(i la)((i la + B)u0 + u1)] with
// Phi = B^{-1/2} 1{tilde_A >= eps} B^{1/2}; the low-frequency part of the
// propagated state up to an exponentially small remainder.
Eigen::VectorXd low_frequency_profile_integral(const SelfAdjointOperator& a,
                                               const DampingOperator& b,
                                               const SelfAdjointOperator& tilde_a,
                                               const CauchyData& data, double t,
                                               const Contour& contour, double eps);

// (2 pi)^{-1} closed-loop integral of lambda^2 e^{i lambda t} (i lambda +
// a)^{-2}; by the residue at i*a this equals 2a e^{-at} - a^2 t e^{-at}.
std::complex<double> residue_check_optimality(double a, double t, int panels_per_segment);

}  // namespace dwlab
