#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dwlab/resolvent.hpp"
#include "dwlab/rng.hpp"

using namespace dwlab;

namespace {

std::shared_ptr<SelfAdjointOperator> scalar_op(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return std::make_shared<SelfAdjointOperator>(m, Grid::periodic(1, 1, 1.0));
}

std::shared_ptr<SelfAdjointOperator> random_spd(int n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
  Eigen::MatrixXd m = g.transpose() * g / n;
  m.diagonal().array() += 0.2;
  m = 0.5 * (m + m.transpose()).eval();
  return std::make_shared<SelfAdjointOperator>(m, Grid::periodic(1, n, double(n)));
}

DampingOperator random_damping(int n, std::uint64_t seed, double c, double hi) {
  CounterRng rng(seed, 1);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = c + (hi - c) * rng.next_uniform();
  return DampingOperator(d, c);
}

}  // namespace

TEST_SUITE("resolvent") {
  TEST_CASE("scalar resolvent values") {
    auto a = scalar_op(4.0);
    DampingOperator b(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    const Eigen::MatrixXcd r = quadratic_resolvent(*a, b, Complex(0, 1));
    // 1/(i^2 + 2i + 4) = 1/(3 + 2i) = (3 - 2i)/13
    CHECK(r(0, 0).real() == doctest::Approx(3.0 / 13.0).epsilon(1e-14));
    CHECK(r(0, 0).imag() == doctest::Approx(-2.0 / 13.0).epsilon(1e-14));
    CHECK(std::abs(r(0, 0)) == doctest::Approx(1.0 / std::sqrt(13.0)).epsilon(1e-14));

    auto a1 = scalar_op(1.0);
    DampingOperator b1(Eigen::VectorXd::Constant(1, 1.0), 1.0);
    for (double lam : {0.5, 1.0, 3.0}) {
      const Eigen::MatrixXcd rr = quadratic_resolvent(*a1, b1, Complex(lam, 0));
      CHECK(rr(0, 0).real() == doctest::Approx(1.0 / (lam * lam + lam + 1)).epsilon(1e-14));
      CHECK(rr(0, 0).real() > 0.0);
    }
  }

  TEST_CASE("full solve residual meets the 1e-10 contract") {
    auto a = random_spd(30, 31);
    DampingOperator b = random_damping(30, 32, 0.5, 5.0);
    CHECK(resolvent_residual(*a, b, Complex(0.3, 0.9)) <= 1e-10);
    CHECK(resolvent_residual(*a, b, Complex(0.0, 2.0)) <= 1e-10);
    const Grid grid = Grid::dirichlet(1, 64, 65.0);
    auto p = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::sine(1.0, 0.3, 65.0)));
    DampingOperator damp =
        DampingOperator::from_field(grid, CoefficientField::sine(1.0, 0.5, 65.0));
    CHECK(resolvent_residual(*p, damp, Complex(0.05, 0.4)) <= 1e-10);
  }

  TEST_CASE("adjoint symmetry R(la)* = R(conj la) on a random instance") {
    auto a = random_spd(30, 101);
    DampingOperator b = random_damping(30, 102, 0.5, 5.0);
    const Complex lam(0.4, 1.3);
    const Eigen::MatrixXcd r = quadratic_resolvent(*a, b, lam);
    const Eigen::MatrixXcd rc = quadratic_resolvent(*a, b, std::conj(lam));
    CHECK((r.adjoint() - rc).cwiseAbs().maxCoeff() <= 1e-12 * r.cwiseAbs().maxCoeff());
  }

  TEST_CASE("singular pencils are reported with lambda") {
    // Undamped pencil P + lambda^2 is exactly singular at lambda = i sqrt(ev).
    auto a = scalar_op(4.0);
    DampingOperator none(Eigen::VectorXd::Zero(1), 0.0);
    CHECK_THROWS_WITH_AS(quadratic_resolvent(*a, none, Complex(0, 2.0)),
                         doctest::Contains("singular"), std::runtime_error);
  }

  TEST_CASE("block resolvent: scalar formulas and random identity residual") {
    auto a1 = scalar_op(1.0);
    DampingOperator b1(Eigen::VectorXd::Constant(1, 1.0), 1.0);
    const BlockResolventResult blk = block_resolvent(*a1, b1, Complex(1.0, 0.0));
    // (1/3) [[2, 1], [-1, 1]]
    CHECK(blk.block(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(blk.block(0, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(blk.block(1, 0).real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(blk.block(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(blk.identity_residual <= 1e-13);

    auto a4 = scalar_op(4.0);
    DampingOperator b2(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    const BlockResolventResult blk2 = block_resolvent(*a4, b2, Complex(0, 1));
    Eigen::MatrixXcd m(2, 2);
    m << Complex(0, 1), Complex(-1, 0), Complex(4, 0), Complex(2, 1);
    const Eigen::MatrixXcd direct = m.inverse();
    CHECK((blk2.block - direct).cwiseAbs().maxCoeff() <= 1e-12);

    auto a20 = random_spd(20, 7);
    DampingOperator b20 = random_damping(20, 8, 0.5, 3.0);
    CHECK(block_resolvent(*a20, b20, Complex(0.3, 0.7)).identity_residual <= 1e-9);
  }

  TEST_CASE("heat splitting identity: scalars, tiny lambda, random instance") {
    auto a = scalar_op(1.0);
    DampingOperator b(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    const SplittingResidual s1 = verify_heat_splitting(*a, b, Complex(0, 1));
    CHECK(s1.splitting <= 1e-12);
    CHECK(s1.conjugation <= 1e-12);

    const SplittingResidual s2 = verify_heat_splitting(*a, b, Complex(1e-3, 0));
    CHECK(s2.splitting <= 1e-9);  // identity is exact, not asymptotic

    auto a30 = random_spd(30, 11);
    DampingOperator b30 = random_damping(30, 12, 0.5, 4.0);
    const SplittingResidual s3 = verify_heat_splitting(*a30, b30, Complex(0.2, 0.9));
    CHECK(s3.splitting <= 1e-9);
    CHECK(s3.conjugation <= 1e-9);
    CHECK(s3.commutation <= 1e-9);
  }

  TEST_CASE("imaginary-part and real-part proof constants on scalar instances") {
    auto a = scalar_op(4.0);
    DampingOperator b(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    LambdaGrid one;
    one.points = {Complex(0, 1)};
    one.region = LambdaRegion::imag_strip;
    const BoundSurvey s31 = survey_lemma_bounds(*a, b, one, ResolventBound::imag_part_constant);
    CHECK(s31.rows[0].measured == doctest::Approx(1.0 / std::sqrt(13.0)).epsilon(1e-12));
    CHECK(s31.rows[0].bound == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s31.pass);

    LambdaGrid two;
    two.points = {Complex(2.0, 0.0)};
    two.region = LambdaRegion::real_sector;
    const BoundSurvey s32 = survey_lemma_bounds(*a, b, two, ResolventBound::real_part_constant);
    CHECK(s32.rows[0].measured == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(s32.rows[0].bound == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s32.pass);
  }

  TEST_CASE("survey rejects out-of-region samples") {
    auto a = scalar_op(1.0);
    DampingOperator b(Eigen::VectorXd::Constant(1, 1.0), 1.0);
    LambdaGrid bad;
    bad.points = {Complex(0.1, 0.2)};  // Re < |Im|: outside the claimed sector
    bad.region = LambdaRegion::real_sector;
    CHECK_THROWS_AS(survey_lemma_bounds(*a, b, bad, ResolventBound::real_part_constant),
                    std::invalid_argument);
  }

  TEST_CASE("proof constants hold on a variable-damping operator over the strip") {
    const Grid grid = Grid::periodic(1, 64, 64.0);
    auto p = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator b =
        DampingOperator::from_field(grid, CoefficientField::sine(1.0, 0.5, 64.0));
    const LambdaGrid strip = LambdaGrid::imag_strip(-0.2, 0.4, 0.1, 10.0, 5, 5);
    const BoundSurvey survey = survey_lemma_bounds(*p, b, strip, ResolventBound::imag_part_constant);
    CHECK(survey.min_margin >= 1.0);
  }

  TEST_CASE("cutoff survey: zero weight, path cross-validation, full-resolvent contrast") {
    const Grid grid = Grid::periodic(1, 256, 200.0);
    auto p = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));
    DampingOperator c = DampingOperator::from_field(grid, CoefficientField::constant(1.0));

    SUBCASE("zero weight gives zero norms") {
      const CutoffSurvey s = cutoff_resolvent_survey(*p, c, Eigen::VectorXd::Zero(256),
                                                     {1e-2, 1e-1});
      for (const auto& row : s.rows) CHECK(row.measured == 0.0);
    }
    SUBCASE("constant-coefficient fast path equals the dense SPD path") {
      const Eigen::VectorXd chi =
          CoefficientField::bump(1.0, 10.0, 0.5, {100.0, 0, 0}).sample(grid);
      const CutoffSurvey fast = cutoff_resolvent_survey(*p, c, chi, {1e-2});
      // Perturb c below the constant-detection threshold shift: build an
      // explicitly non-constant copy with the same values except one entry
      // nudged by an amount large enough to force the dense path.
      Eigen::VectorXd cd = c.diagonal();
      cd[0] *= 1.0 + 1e-9;
      DampingOperator c2(cd, c.lower_bound());
      const CutoffSurvey dense = cutoff_resolvent_survey(*p, c2, chi, {1e-2});
      CHECK(fast.rows[0].measured ==
            doctest::Approx(dense.rows[0].measured).epsilon(1e-5));
    }
    SUBCASE("uncut resolvent blows up like 1/lambda") {
      std::vector<double> radii;
      for (int i = 0; i < 9; ++i) radii.push_back(1e-3 * std::pow(100.0, i / 8.0));
      const CutoffSurvey full =
          cutoff_resolvent_survey(*p, c, Eigen::VectorXd::Ones(256), radii);
      CHECK(std::abs(full.fitted_exponent + 1.0) <= 0.05);
    }
  }

  TEST_CASE("gcc survey: strictly positive damping passes, undamped fails on-axis") {
    const Grid grid = Grid::periodic(1, 128, 40.0);
    auto p = std::make_shared<SelfAdjointOperator>(
        build_divergence_form(grid, CoefficientField::constant(1.0)));

    DampingOperator ones(Eigen::VectorXd::Ones(128), 1.0);
    std::vector<Complex> near = {Complex(1e-2, 0), Complex(0, 1e-2), Complex(1e-3, 1e-3)};
    const GccResolventSurvey ok = gcc_resolvent_survey(*p, ones, near, {0.5, 1.0, 2.0});
    CHECK(ok.all_exist);
    CHECK(ok.near_origin_sup <= 10.0);  // |la| ||R|| ~ 1/c = 1 for small lambda

    // With zero damping the pencil is singular at tau^2 = eigenvalue.
    DampingOperator none(Eigen::VectorXd::Zero(128), 0.0);
    const double ev1 = p->spectrum().eigenvalues[5];
    const GccResolventSurvey bad =
        gcc_resolvent_survey(*p, none, {}, {std::sqrt(ev1)});
    CHECK_FALSE(bad.all_exist);
    CHECK_FALSE(bad.failure_note.empty());
  }

  TEST_CASE("operator norm: power iteration matches exact SVD") {
    CounterRng rng(55, 9);
    Eigen::MatrixXcd m(600, 600);
    for (int i = 0; i < 600; ++i)
      for (int j = 0; j < 600; ++j)
        m(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian()) / 24.5;
    const double via_power = operator_norm_l2(m);  // n > 512: power path
    const double exact = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
    CHECK(via_power == doctest::Approx(exact).epsilon(1e-4));
  }

  TEST_CASE("cauchy circle average reproduces the resolvent at the center") {
    auto a = random_spd(16, 77);
    DampingOperator b = random_damping(16, 78, 0.5, 3.0);
    CHECK(cauchy_integral_check(*a, b, Complex(1.0, 1.0), 0.4, 64) <= 1e-10);
  }
}
