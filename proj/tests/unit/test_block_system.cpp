#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dwlab/block_system.hpp"
#include "dwlab/rates.hpp"
#include "dwlab/rng.hpp"

using namespace dwlab;

namespace {

std::shared_ptr<SelfAdjointOperator> scalar_op(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return std::make_shared<SelfAdjointOperator>(m, Grid::periodic(1, 1, 1.0));
}

DampingOperator scalar_damping(double b) {
  return DampingOperator(Eigen::VectorXd::Constant(1, b), b);
}

std::shared_ptr<SelfAdjointOperator> periodic_laplacian(int n, double length) {
  return std::make_shared<SelfAdjointOperator>(
      build_divergence_form(Grid::periodic(1, n, length), CoefficientField::constant(1.0)));
}

}  // namespace

TEST_SUITE("block_system") {
  TEST_CASE("scalar generators: underdamped and critically damped eigenvalues") {
    BlockGenerator g1(scalar_op(1.0), scalar_damping(1.0));
    Eigen::MatrixXd expected(2, 2);
    expected << 0, 1, -1, -1;
    CHECK((g1.block() - expected).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(g1.block()).eigenvalues();
    for (int i = 0; i < 2; ++i) {
      CHECK(ev[i].real() == doctest::Approx(-0.5).epsilon(1e-12));
      CHECK(std::abs(ev[i].imag()) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    }

    BlockGenerator g2(scalar_op(1.0), scalar_damping(2.0));
    const Eigen::VectorXcd ev2 = Eigen::EigenSolver<Eigen::MatrixXd>(g2.block()).eigenvalues();
    for (int i = 0; i < 2; ++i) CHECK(ev2[i].real() == doctest::Approx(-1.0).epsilon(1e-7));
  }

  TEST_CASE("random damped systems have spectra in the closed left half-plane") {
    CounterRng rng(3, 0);
    const int n = 20;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
    Eigen::MatrixXd spd = g.transpose() * g / n;
    spd.diagonal().array() += 0.1;
    auto a = std::make_shared<SelfAdjointOperator>(
        Eigen::MatrixXd(0.5 * (spd + spd.transpose())), Grid::periodic(1, n, double(n)));
    Eigen::VectorXd bd(n);
    for (int i = 0; i < n; ++i) bd[i] = 1.0 + rng.next_uniform();
    BlockGenerator gen(a, DampingOperator(bd, 1.0));
    const Eigen::VectorXcd ev =
        Eigen::EigenSolver<Eigen::MatrixXd>(gen.block()).eigenvalues();
    for (int i = 0; i < ev.size(); ++i) CHECK(ev[i].real() <= 1e-10);
  }

  TEST_CASE("strict damping and a positive operator push the spectrum off the axis") {
    const Grid grid = Grid::dirichlet(1, 24, 25.0);
    auto a = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    BlockGenerator gen(a, DampingOperator::identity(24));
    const Eigen::VectorXcd ev =
        Eigen::EigenSolver<Eigen::MatrixXd>(gen.block()).eigenvalues();
    for (int i = 0; i < ev.size(); ++i) CHECK(ev[i].real() < -1e-6);
  }

  TEST_CASE("dissipativity identity holds to roundoff on random states") {
    auto a = periodic_laplacian(32, 32.0);
    DampingOperator b = DampingOperator::from_field(Grid::periodic(1, 32, 32.0),
                                                    CoefficientField::sine(1.0, 0.5, 32.0));
    BlockGenerator gen(a, b);
    CounterRng rng(17, 1);
    const double meas = a->grid().cell_measure();
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd u = rng.gaussian_vector(32);
      const Eigen::VectorXd v = rng.gaussian_vector(32);
      Eigen::VectorXd z(64);
      z << u, v;
      const Eigen::VectorXd az = gen.block() * z;
      // <Az, z>_{H0} = (sqrtA Az_u, sqrtA z_u) + (Az_v, z_v), all cell-weighted
      const double inner =
          meas * (az.head(32).dot(a->matrix() * u) + az.tail(32).dot(v));
      const double bvv = meas * v.dot(b.apply(v));
      CHECK(inner == doctest::Approx(-bvv).epsilon(1e-10));
    }
  }

  TEST_CASE("critically damped scalar: u(t) = (1+t) e^{-t}") {
    BlockGenerator gen(scalar_op(1.0), scalar_damping(2.0));
    CauchyData data;
    data.u0 = Eigen::VectorXd::Constant(1, 1.0);
    data.u1 = Eigen::VectorXd::Zero(1);
    Trajectory traj = propagate(gen, data, {1.0, 2.0, 5.0});
    REQUIRE(traj.times.size() == 3);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      CHECK(traj.states[i][0] == doctest::Approx((1.0 + t) * std::exp(-t)).epsilon(1e-8));
    }
    CHECK(traj.states[0][0] == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-8));
  }

  TEST_CASE("underdamped scalar: u(t) = (2/sqrt3) e^{-t/2} sin(sqrt3 t / 2)") {
    BlockGenerator gen(scalar_op(1.0), scalar_damping(1.0));
    CauchyData data;
    data.u0 = Eigen::VectorXd::Zero(1);
    data.u1 = Eigen::VectorXd::Constant(1, 1.0);
    Trajectory traj = propagate(gen, data, {1.0, 3.0});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      const double exact =
          2.0 / std::sqrt(3.0) * std::exp(-t / 2.0) * std::sin(std::sqrt(3.0) * t / 2.0);
      CHECK(traj.states[i][0] == doctest::Approx(exact).epsilon(1e-8));
    }
  }

  TEST_CASE("constant damping: modal amplitudes follow the two scalar roots") {
    const int n = 256;
    auto a = periodic_laplacian(n, 64.0);
    BlockGenerator gen(a, DampingOperator::identity(n));
    const auto& spec = a->spectrum();
    // A mode away from the double root at alpha = 1/4.
    int k = -1;
    for (int i = 1; i < n; ++i)
      if (std::abs(spec.eigenvalues[i] - 0.25) > 0.05 && spec.eigenvalues[i] > 0.05) {
        k = i;
        break;
      }
    REQUIRE(k > 0);
    const double alpha = spec.eigenvalues[k];
    CauchyData data;
    data.u0 = spec.eigenvectors.col(k);
    data.u1 = Eigen::VectorXd::Zero(n);
    Trajectory traj = propagate(gen, data, {2.0, 8.0});
    using C = std::complex<double>;
    const C disc = std::sqrt(C(1.0 - 4.0 * alpha, 0.0));
    const C mu_p = (-1.0 + disc) / 2.0, mu_m = (-1.0 - disc) / 2.0;
    const C cp = -mu_m / (mu_p - mu_m), cm = mu_p / (mu_p - mu_m);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      const C exact = cp * std::exp(mu_p * t) + cm * std::exp(mu_m * t);
      const double amp = spec.eigenvectors.col(k).dot(traj.states[i].head(n));
      CHECK(amp == doctest::Approx(exact.real()).epsilon(1e-6));
    }
  }

  TEST_CASE("stepped exponential agrees with adaptive RK on [0, 50]") {
    const int n = 64;
    auto a = periodic_laplacian(n, 32.0);
    DampingOperator b = DampingOperator::from_field(Grid::periodic(1, n, 32.0),
                                                    CoefficientField::sine(1.0, 0.5, 32.0));
    BlockGenerator gen(a, b);
    CounterRng rng(23, 5);
    CauchyData data = make_random_h_data(*a, rng);
    const std::vector<double> times = {1.0, 5.0, 20.0, 50.0};
    Trajectory stepped = propagate(gen, data, times);
    PropagateOptions rk;
    rk.use_rk_check = true;
    Trajectory checked = propagate(gen, data, times, rk);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double ref =
          discrete_norm(checked.states[i], NormKind::energy0, a->grid(), a.get());
      const double diff = discrete_norm(
          Eigen::VectorXd(stepped.states[i] - checked.states[i]), NormKind::energy0,
          a->grid(), a.get());
      CHECK(diff <= 1e-6 * std::max(ref, 1.0));
    }
  }

  TEST_CASE("propagator is a contraction in the energy seminorm") {
    const int n = 48;
    auto a = periodic_laplacian(n, 24.0);
    BlockGenerator gen(a, DampingOperator::identity(n));
    CounterRng rng(29, 6);
    CauchyData data = make_random_h_data(*a, rng);
    Trajectory traj = propagate(gen, data, uniform_times(0.5, 30.0, 60));
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& state : traj.states) {
      const double n0 = discrete_norm(state, NormKind::energy0, a->grid(), a.get());
      CHECK(n0 <= prev * (1.0 + 1e-8));
      prev = n0;
    }
  }

  TEST_CASE("energy functional edge cases") {
    auto a = periodic_laplacian(16, 8.0);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(32);
    const EnergyPair e0 = energy(zero, *a);
    CHECK(e0.energy0 == 0.0);
    CHECK(e0.energyH == 0.0);

    Eigen::VectorXd kernel(32);
    kernel << Eigen::VectorXd::Ones(16), Eigen::VectorXd::Zero(16);
    const EnergyPair ek = energy(kernel, *a);
    CHECK(ek.energy0 <= 1e-10);
    CHECK(ek.energyH ==
          doctest::Approx(discrete_norm(Eigen::VectorXd::Ones(16), NormKind::L2, a->grid()))
              .epsilon(1e-12));

    CounterRng rng(31, 7);
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd z = rng.gaussian_vector(32);
      const EnergyPair e = energy(z, *a);
      CHECK(e.energyH >= e.energy0);
    }
  }

  TEST_CASE("dissipation check: conservative, damped, and the scalar derivative") {
    const int n = 24;
    auto a = periodic_laplacian(n, 12.0);
    CauchyData data = make_gaussian_data(a->grid(), 2.0);

    DampingOperator none(Eigen::VectorXd::Zero(n), 0.0);
    BlockGenerator conservative(a, none);
    const DissipationReport r0 =
        check_dissipation(conservative, data, uniform_times(0.1, 10.0, 100));
    CHECK(r0.max_monotonicity_violation <= 1e-8);

    // Central differences need to resolve the fastest mode (~2/h here).
    BlockGenerator damped(a, DampingOperator::identity(n));
    const DissipationReport r1 =
        check_dissipation(damped, data, uniform_times(0.002, 2.0, 1000), 1e-3);
    CHECK(r1.monotone);
    CHECK(r1.derivative_matches);

    BlockGenerator scalar(scalar_op(1.0), scalar_damping(2.0));
    CauchyData sdata;
    sdata.u0 = Eigen::VectorXd::Constant(1, 1.0);
    sdata.u1 = Eigen::VectorXd::Zero(1);
    const DissipationReport r2 =
        check_dissipation(scalar, sdata, uniform_times(5e-4, 3.0, 6000), 1e-6);
    CHECK(r2.derivative_matches);
  }

  TEST_CASE("growth bound: contraction constant and stationary kernel data") {
    const int n = 32;
    auto a = periodic_laplacian(n, 16.0);
    BlockGenerator gen(a, DampingOperator::identity(n));
    const GrowthBound bound =
        propagator_growth_bound(gen, 8, geometric_times(1.0, 100.0, 12), 42);
    CHECK(bound.contraction_sup <= 1.0 + 1e-8);
    CHECK(std::isfinite(bound.h_constant));

    CauchyData kernel;
    kernel.u0 = Eigen::VectorXd::Ones(n);
    kernel.u1 = Eigen::VectorXd::Zero(n);
    Trajectory traj = propagate(gen, kernel, {1.0, 10.0, 100.0});
    const double h0 = discrete_norm(
        (Eigen::VectorXd(2 * n) << kernel.u0, kernel.u1).finished(), NormKind::energyH,
        a->grid(), a.get());
    for (const auto& state : traj.states)
      CHECK(discrete_norm(state, NormKind::energyH, a->grid(), a.get()) ==
            doctest::Approx(h0).epsilon(1e-9));
  }

  TEST_CASE("quadratic pencil roots match the generator spectrum on decoupled cases") {
    // Scalar: mu^2 + b mu + a = 0.
    BlockGenerator g(scalar_op(2.0), scalar_damping(3.0));
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(g.block()).eigenvalues();
    const double disc = std::sqrt(9.0 - 8.0);
    std::vector<double> expected = {(-3.0 - disc) / 2.0, (-3.0 + disc) / 2.0};
    std::vector<double> got = {ev[0].real(), ev[1].real()};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(expected[0]).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(expected[1]).epsilon(1e-10));

    // Decoupled 2x2: two independent scalar pencils.
    Eigen::MatrixXd a2 = Eigen::Vector2d(1.0, 4.0).asDiagonal();
    auto a_op = std::make_shared<SelfAdjointOperator>(a2, Grid::periodic(1, 2, 2.0));
    DampingOperator b2(Eigen::Vector2d(3.0, 5.0), 3.0);
    BlockGenerator g2(a_op, b2);
    Eigen::VectorXcd ev2 = Eigen::EigenSolver<Eigen::MatrixXd>(g2.block()).eigenvalues();
    std::vector<double> roots;
    for (auto [aa, bb] : std::vector<std::pair<double, double>>{{1.0, 3.0}, {4.0, 5.0}}) {
      const double d = std::sqrt(bb * bb - 4 * aa);
      roots.push_back((-bb - d) / 2);
      roots.push_back((-bb + d) / 2);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> got2(4);
    for (int i = 0; i < 4; ++i) got2[i] = ev2[i].real();
    std::sort(got2.begin(), got2.end());
    for (int i = 0; i < 4; ++i) CHECK(got2[i] == doctest::Approx(roots[i]).epsilon(1e-9));
  }

  TEST_CASE("propagation guards reject bad inputs and blow-ups") {
    BlockGenerator gen(scalar_op(1.0), scalar_damping(1.0));
    CauchyData data;
    data.u0 = Eigen::VectorXd::Ones(1);
    data.u1 = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(propagate(gen, data, {2.0, 1.0}), std::invalid_argument);

    // Strongly negative damping blows up and trips the guard.
    BlockGenerator bad(scalar_op(1.0),
                       DampingOperator::indefinite(Eigen::VectorXd::Constant(1, -2.0)));
    CHECK_THROWS_AS(propagate(bad, data, {50.0}), std::runtime_error);
  }
}
