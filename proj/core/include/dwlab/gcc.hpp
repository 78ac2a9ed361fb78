// Hamiltonian flow of p(x, xi) = g(x) |xi|^2, time-averaged damping along
// trajectories, and certification of the geometric control condition over a
// deterministic sample of the unit energy shell.
#pragma once

#include <array>
#include <vector>

#include "dwlab/fields.hpp"

namespace dwlab {

struct HamiltonianSystem {
  CoefficientField metric;   // isotropic scalar g(x); p = g(x) |xi|^2
  CoefficientField damping;  // a(x), averaged along the flow
  int dim = 2;
};

struct PhasePoint {
  std::array<double, 3> x{0, 0, 0};
  std::array<double, 3> xi{0, 0, 0};
};

// Rescales xi onto the unit energy shell p(x, xi) = 1.
PhasePoint on_unit_shell(const HamiltonianSystem& sys, const std::array<double, 3>& x,
                         const std::array<double, 3>& direction);

double hamiltonian(const HamiltonianSystem& sys, const PhasePoint& p);

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  double max_p_drift = 0.0;  // max relative drift of p along the trajectory
  bool left_box = false;     // exited the configured bounding box (warning only)
};

// Classical RK4 with fixed step; the preset fields have analytic gradients so
// the flow accuracy is limited only by the integrator order.
FlowTrajectory hamiltonian_flow(const HamiltonianSystem& sys, const PhasePoint& start,
                                double horizon, double dt, double box_radius = 0.0);

// (1/T) integral of a(x(t)) dt along the flow, composite Simpson.
double damping_average(const HamiltonianSystem& sys, const PhasePoint& start, double horizon,
                       double dt);

struct GccSampleSpec {
  std::array<double, 3> box_lo{0, 0, 0};
  std::array<double, 3> box_hi{0, 0, 0};
  int positions_per_axis = 16;
  int directions = 64;  // d=1 uses the two signs
};

struct GccSampleRow {
  PhasePoint point;
  double average = 0.0;
};

struct GccReport {
  double horizon = 0.0;
  int samples = 0;
  double min_average = 0.0;
  PhasePoint arg_min;
  double alpha_estimate = 0.0;  // min_average minus a 10% safety margin
  double requested_alpha = 0.0;
  bool pass = false;
  bool min_on_boundary = false;  // minimum attained on the sample-box boundary
  std::string resolution_note;
  std::vector<GccSampleRow> sample_dump;  // filled when requested
};

// Deterministic lattice-of-positions x angular-grid-of-directions sampling of
// the unit shell; the verdict is min_average >= alpha. When alpha <= 0 the
// report's alpha_estimate (min_average minus 10%) is used as the requested
// level.
GccReport check_gcc(const HamiltonianSystem& sys, const GccSampleSpec& spec, double horizon,
                    double alpha, double dt, bool keep_samples = false);

}  // namespace dwlab
