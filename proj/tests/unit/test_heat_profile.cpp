#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dwlab/heat_profile.hpp"
#include "dwlab/rates.hpp"

using namespace dwlab;

namespace {

std::shared_ptr<SelfAdjointOperator> scalar_op(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return std::make_shared<SelfAdjointOperator>(m, Grid::periodic(1, 1, 1.0));
}

std::shared_ptr<SelfAdjointOperator> periodic_laplacian(int n, double length) {
  return std::make_shared<SelfAdjointOperator>(
      build_divergence_form(Grid::periodic(1, n, length), CoefficientField::constant(1.0)));
}

}  // namespace

TEST_SUITE("heat_profile") {
  TEST_CASE("scalar profiles: both data terms enter with +") {
    auto a = scalar_op(1.0);
    DampingOperator b(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);

    CauchyData d0;
    d0.u0 = Eigen::VectorXd::Constant(1, 1.0);
    d0.u1 = Eigen::VectorXd::Zero(1);
    HeatProfile p0 = profile_v(tilde, b, d0, {1.0});
    CHECK(p0.states[0][0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    CauchyData d1;
    d1.u0 = Eigen::VectorXd::Zero(1);
    d1.u1 = Eigen::VectorXd::Constant(1, 1.0);
    HeatProfile p1 = profile_v(tilde, b, d1, {1.0});
    CHECK(p1.states[0][0] == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-12));
  }

  TEST_CASE("identity damping: v(t) = e^{-tA}(u0 + u1)") {
    auto a = periodic_laplacian(16, 8.0);
    DampingOperator b = DampingOperator::identity(16);
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);
    CauchyData data = make_gaussian_data(a->grid(), 1.0, 0.5, true, true);
    HeatProfile profile = profile_v(tilde, b, data, {2.0});
    const Eigen::MatrixXd heat =
        apply_spectral_function(*a, [](double x) { return std::exp(-2.0 * x); });
    const Eigen::VectorXd expected = heat * (data.u0 + data.u1);
    CHECK((profile.states[0] - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("profile matches direct dense reassembly to 1e-10") {
    const Grid grid = Grid::periodic(1, 48, 48.0);
    auto a = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator b =
        DampingOperator::from_field(grid, CoefficientField::sine(1.0, 0.5, 48.0));
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);
    CauchyData data = make_gaussian_data(grid, 3.0, 0.4, true, true);
    const double t = 3.0;
    HeatProfile profile = profile_v(tilde, b, data, {t});

    const Eigen::MatrixXd heat =
        apply_spectral_function(tilde, [t](double x) { return std::exp(-t * x); });
    const Eigen::VectorXd bs = b.diagonal().cwiseSqrt();
    const Eigen::VectorXd direct =
        bs.cwiseInverse().asDiagonal() *
        (heat * (bs.cwiseProduct(data.u0) + bs.cwiseInverse().cwiseProduct(data.u1)));
    CHECK((profile.states[0] - direct).cwiseAbs().maxCoeff() <= 1e-10);
  }

  TEST_CASE("profile difference: zero data, scalar closed form") {
    auto a = scalar_op(1.0);
    DampingOperator b(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);
    BlockGenerator gen(a, b);

    CauchyData zero;
    zero.u0 = Eigen::VectorXd::Zero(1);
    zero.u1 = Eigen::VectorXd::Zero(1);
    Trajectory tz = propagate(gen, zero, {1.0, 2.0});
    HeatProfile pz = profile_v(tilde, b, zero, tz.times);
    ProfileDifference dz = profile_difference(tz, pz, *a, zero);
    for (double v : dz.difference.values) CHECK(v == 0.0);

    CauchyData one;
    one.u0 = Eigen::VectorXd::Constant(1, 1.0);
    one.u1 = Eigen::VectorXd::Zero(1);
    Trajectory t1 = propagate(gen, one, {1.0});
    HeatProfile p1 = profile_v(tilde, b, one, t1.times);
    ProfileDifference d1 = profile_difference(t1, p1, *a, one);
    // |(1+t)e^{-t} - e^{-t/2}| at t=1.
    CHECK(d1.difference.values[0] ==
          doctest::Approx(std::abs(2.0 * std::exp(-1.0) - std::exp(-0.5))).epsilon(1e-8));
  }

  TEST_CASE("with u1 = 0 and identity damping the profile solves the heat equation") {
    auto a = periodic_laplacian(32, 32.0);
    DampingOperator b = DampingOperator::identity(32);
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);
    CauchyData data = make_gaussian_data(a->grid(), 3.0);
    const double t = 2.0, dt = 1e-4;
    HeatProfile p = profile_v(tilde, b, data, {t - dt, t, t + dt});
    const Eigen::VectorXd dvdt = (p.states[2] - p.states[0]) / (2.0 * dt);
    const Eigen::VectorXd residual = dvdt + a->matrix() * p.states[1];
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-6);
  }

  TEST_CASE("semigroup norms: identity limit and the 1d decay exponent") {
    auto a = periodic_laplacian(256, 100.0);
    CHECK(semigroup_operator_norm(*a, 1e-9, SemigroupNormKind::L1_to_L1) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(semigroup_operator_norm(*a, 0.0, SemigroupNormKind::L1_to_L2),
                    std::invalid_argument);

    OperatorNormSeries series =
        semigroup_norm_series(*a, geometric_times(1.0, 20.0, 12), SemigroupNormKind::L1_to_L2);
    const RateFit fit = fit_loglog(series.series, 1.0, 20.0);
    CHECK(std::abs(fit.slope + 0.25) <= 0.05);

    // L2 -> Linf agrees with L1 -> L2 for the symmetric semigroup.
    const double t = 4.0;
    CHECK(semigroup_operator_norm(*a, t, SemigroupNormKind::L2_to_Linf) ==
          doctest::Approx(semigroup_operator_norm(*a, t, SemigroupNormKind::L1_to_L2))
              .epsilon(1e-12));
  }

  TEST_CASE("conservation, positivity, Nash quotient") {
    const Grid grid = Grid::periodic(1, 128, 64.0);
    auto p = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator c =
        DampingOperator::from_field(grid, CoefficientField::sine(1.0, 0.4, 64.0));
    const SelfAdjointOperator tilde = build_tilde_a(*p, c);
    CounterRng rng(13, 3);

    SUBCASE("gaussian data conserve the modified heat and keep H monotone") {
      CauchyData g = make_gaussian_data(grid, 3.0);
      NashReport rep = nash_and_conservation_checks(tilde, c, g.u0,
                                                    uniform_times(0.0, 100.0, 26), rng);
      CHECK(rep.total_heat_drift <= 1e-8);
      CHECK(rep.quotient_monotone);
      CHECK(rep.nash_constant > 0.0);
    }
    SUBCASE("delta data stay positive") {
      CauchyData d = make_single_cell_data(grid, 64);
      NashReport rep = nash_and_conservation_checks(tilde, c, d.u0,
                                                    uniform_times(0.0, 50.0, 26), rng, 0);
      CHECK(rep.min_entry >= -1e-10);
      CHECK(rep.positivity_ok);
    }
    SUBCASE("stationary kernel data keep the quotient exactly constant") {
      // u0 = c^{-1/2} * kernel-of-tilde direction = stationary state.
      const Eigen::VectorXd u0 =
          c.diagonal().cwiseSqrt().cwiseInverse();
      NashReport rep = nash_and_conservation_checks(tilde, c, Eigen::VectorXd(u0.cwiseAbs()),
                                                    uniform_times(0.0, 20.0, 11), rng, 0);
      CHECK(rep.max_quotient_increase <= 1e-10);
      CHECK(rep.total_heat_drift <= 1e-10);
    }
  }

  TEST_CASE("high-frequency cutoff: vacuous and void limits, decay certificate") {
    const Grid grid = Grid::periodic(1, 64, 32.0);
    auto a = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator b =
        DampingOperator::from_field(grid, CoefficientField::sine(1.0, 0.3, 32.0));
    auto tilde = std::make_shared<SelfAdjointOperator>(build_tilde_a(*a, b));
    const auto& ev = tilde->spectrum().eigenvalues;

    SUBCASE("eps below the spectrum gives the identity") {
      // On a strictly positive operator, a threshold under the lowest
      // eigenvalue keeps every mode: Q 1 Q^T = I up to orthogonality error.
      const Grid dgrid = Grid::dirichlet(1, 32, 33.0);
      auto ad = std::make_shared<SelfAdjointOperator>(
          build_divergence_form(dgrid, CoefficientField::constant(1.0)));
      DampingOperator bd =
          DampingOperator::from_field(dgrid, CoefficientField::sine(1.0, 0.3, 66.0));
      const SelfAdjointOperator tilded = build_tilde_a(*ad, bd);
      const double eps = 0.5 * tilded.spectrum().eigenvalues[0];
      const Eigen::MatrixXd phi = apply_spectral_function(
          tilded, [eps](double x) { return x >= eps ? 1.0 : 0.0; });
      const Eigen::VectorXd bs = bd.diagonal().cwiseSqrt();
      const Eigen::MatrixXd cut = bs.cwiseInverse().asDiagonal() * phi * bs.asDiagonal();
      CHECK((cut - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((phi * phi - phi).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("eps above the spectrum gives the zero operator") {
      const double eps = ev[ev.size() - 1] * 2.0;
      const Eigen::MatrixXd phi = apply_spectral_function(
          *tilde, [eps](double x) { return x >= eps ? 1.0 : 0.0; });
      CHECK(phi.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("certificate is finite and the projector identities hold") {
      BlockGenerator gen(a, b);
      CauchyData data = make_gaussian_data(grid, 2.0);
      CutoffDecayResult res = highfreq_cutoff_decay(gen, *tilde, data, 0.1,
                                                    geometric_times(2.0, 60.0, 16));
      CHECK(res.idempotence_residual <= 1e-10);
      CHECK(res.adjoint_residual <= 1e-10);
      CHECK(std::isfinite(res.certificate.sup_value));
      CHECK_FALSE(res.cutoff_vacuous);
    }
  }
}
