#include <doctest.h>

#include <cmath>

#include "dwlab/gcc.hpp"

using namespace dwlab;

namespace {

HamiltonianSystem flat_system(CoefficientField damping) {
  return HamiltonianSystem{CoefficientField::constant(1.0), std::move(damping), 2};
}

}  // namespace

TEST_SUITE("gcc") {
  TEST_CASE("flat metric: straight rays at speed 2 on the unit shell") {
    HamiltonianSystem sys = flat_system(CoefficientField::constant(1.0));
    const PhasePoint p0 = on_unit_shell(sys, {0.3, -0.4, 0}, {2.0, 1.0, 0});
    CHECK(hamiltonian(sys, p0) == doctest::Approx(1.0).epsilon(1e-14));
    const double horizon = 7.0;
    const FlowTrajectory traj = hamiltonian_flow(sys, p0, horizon, 0.01);
    const auto& last = traj.points.back();
    const double dist = std::hypot(last.x[0] - p0.x[0], last.x[1] - p0.x[1]);
    CHECK(dist == doctest::Approx(2.0 * horizon).epsilon(1e-10));
    CHECK(traj.max_p_drift <= 1e-12);  // xi is constant, the flow is exact
    // xi unchanged
    CHECK(last.xi[0] == doctest::Approx(p0.xi[0]).epsilon(1e-12));
  }

  TEST_CASE("p conservation is 4th order on a curved metric") {
    HamiltonianSystem sys{CoefficientField::gaussian_bump(1.0, 0.5, 1.5, {0.4, -0.3, 0}),
                          CoefficientField::constant(1.0), 2};
    const PhasePoint p0 = on_unit_shell(sys, {-2.0, 0.1, 0}, {1.0, 0.35, 0});
    const FlowTrajectory coarse = hamiltonian_flow(sys, p0, 8.0, 0.02);
    const FlowTrajectory fine = hamiltonian_flow(sys, p0, 8.0, 0.01);
    CHECK(coarse.max_p_drift <= 1e-8);
    CHECK(coarse.max_p_drift / fine.max_p_drift > 8.0);  // ~16 for 4th order
  }

  TEST_CASE("radially symmetric metric conserves the angular momentum analog") {
    HamiltonianSystem sys{CoefficientField::gaussian_bump(1.0, 0.4, 1.2, {0, 0, 0}),
                          CoefficientField::constant(1.0), 2};
    const PhasePoint p0 = on_unit_shell(sys, {1.3, 0.0, 0}, {0.2, 1.0, 0});
    const FlowTrajectory traj = hamiltonian_flow(sys, p0, 8.0, 0.01);
    const double ell0 = p0.x[0] * p0.xi[1] - p0.x[1] * p0.xi[0];
    for (const auto& p : traj.points) {
      const double ell = p.x[0] * p.xi[1] - p.x[1] * p.xi[0];
      CHECK(std::abs(ell - ell0) <= 1e-7 * std::abs(ell0));
    }
  }

  TEST_CASE("damping averages: constant field, short-horizon limit, bump crossing") {
    HamiltonianSystem sys = flat_system(CoefficientField::constant(1.0));
    const PhasePoint p0 = on_unit_shell(sys, {0, 0, 0}, {1, 0, 0});
    CHECK(damping_average(sys, p0, 5.0, 0.01) == doctest::Approx(1.0).epsilon(1e-12));

    HamiltonianSystem varying = flat_system(
        CoefficientField::gaussian_bump(0.5, 0.5, 1.0, {0.2, 0.1, 0}));
    const PhasePoint q0 = on_unit_shell(varying, {0.2, 0.1, 0}, {1, 1, 0});
    const double a_at_start = varying.damping.value({0.2, 0.1, 0}, 2);
    CHECK(damping_average(varying, q0, 1e-3, 1e-5) ==
          doctest::Approx(a_at_start).epsilon(1e-4));

    // Straight ray through a plateau bump: the crossing time has a closed form.
    const double radius = 2.0, flat = 0.5, horizon = 10.0;
    HamiltonianSystem hole = flat_system(
        CoefficientField::bump_complement(1.0, radius, flat, {0, 0, 0}));
    const PhasePoint r0 = on_unit_shell(hole, {-8.0, 0.0, 0}, {1, 0, 0});
    const double chord = 2.0 * radius * (flat + (1.0 - flat) * 8.0 / 15.0);
    const double expected = 1.0 - (chord / 2.0) / horizon;
    CHECK(damping_average(hole, r0, horizon, 0.002) ==
          doctest::Approx(expected).epsilon(1e-5));
  }

  TEST_CASE("check_gcc: uniform damping passes and the verdict is monotone in alpha") {
    HamiltonianSystem sys = flat_system(CoefficientField::constant(1.0));
    GccSampleSpec spec;
    spec.box_lo = {-1, -1, 0};
    spec.box_hi = {1, 1, 0};
    spec.positions_per_axis = 4;
    spec.directions = 8;
    const GccReport at_high = check_gcc(sys, spec, 5.0, 0.99, 0.02);
    CHECK(at_high.pass);
    CHECK(at_high.min_average == doctest::Approx(1.0).epsilon(1e-10));
    const GccReport at_low = check_gcc(sys, spec, 5.0, 0.2, 0.02);
    CHECK(at_low.pass);  // pass at alpha implies pass at smaller alpha
    CHECK(at_low.samples == 4 * 4 * 8);
  }

  TEST_CASE("sigmoid ring metric traps a circular geodesic") {
    // g(r) = 1 + beta * sigmoid((r - rc)/w) with beta = 16/11, rc = 1 + w ln 3,
    // w = 0.1: then g'(1) = 2 g(1) (circular geodesic at r = 1) and the orbit
    // sits below the sigmoid inflection, so the radial potential r^2/g has a
    // local max there (stable trapping annulus).
    const double beta = 16.0 / 11.0, w = 0.1, rc = 1.0 + w * std::log(3.0);
    CoefficientField g = CoefficientField::sigmoid_ring(1.0, beta, rc, w, {0, 0, 0});
    HamiltonianSystem sys{g, CoefficientField::constant(0.0), 2};
    const double g1 = g.value({1.0, 0.0, 0.0}, 2);
    const double gp = g.gradient({1.0, 0.0, 0.0}, 2)[0];
    CHECK(gp == doctest::Approx(2.0 * g1 / 1.0).epsilon(1e-9));

    const PhasePoint p0 = on_unit_shell(sys, {1.0, 0.0, 0}, {0.0, 1.0, 0});
    const FlowTrajectory traj = hamiltonian_flow(sys, p0, 30.0, 0.005);
    double rmin = 1e9, rmax = 0;
    for (const auto& p : traj.points) {
      const double r = std::hypot(p.x[0], p.x[1]);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    CHECK(rmin > 0.9);
    CHECK(rmax < 1.1);
  }

  TEST_CASE("time reversal with xi -> -xi reproduces the damping average") {
    HamiltonianSystem sys{CoefficientField::gaussian_bump(1.0, 0.3, 2.0, {0, 0, 0}),
                          CoefficientField::gaussian_bump(0.3, 0.7, 1.5, {0, 0, 0}), 2};
    const PhasePoint fwd = on_unit_shell(sys, {0.7, -0.2, 0}, {1.0, 0.4, 0});
    PhasePoint bwd = fwd;
    // Run forward to time T, then launch backward from the endpoint.
    const double horizon = 6.0, dt = 0.005;
    const FlowTrajectory traj = hamiltonian_flow(sys, fwd, horizon, dt);
    bwd.x = traj.points.back().x;
    for (int i = 0; i < 2; ++i) bwd.xi[i] = -traj.points.back().xi[i];
    const double a_fwd = damping_average(sys, fwd, horizon, dt);
    const double a_bwd = damping_average(sys, bwd, horizon, dt);
    CHECK(a_fwd == doctest::Approx(a_bwd).epsilon(1e-7));
  }
}
