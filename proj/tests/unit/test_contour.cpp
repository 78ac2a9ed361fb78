#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dwlab/contour.hpp"
#include "dwlab/resolvent.hpp"

using namespace dwlab;

namespace {

std::shared_ptr<SelfAdjointOperator> diag_op(std::initializer_list<double> values) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d[i++] = v;
  return std::make_shared<SelfAdjointOperator>(
      Eigen::MatrixXd(d.asDiagonal()),
      Grid::periodic(1, static_cast<int>(values.size()), double(values.size())));
}

}  // namespace

TEST_SUITE("contour") {
  TEST_CASE("geometry: arc radius 1/t, exact continuity, truncation bookkeeping") {
    const Contour c = build_contour(10.0, 0.1, 0.1, 1e4, 8);
    CHECK(c.continuity_residual() == 0.0);
    REQUIRE(c.segments.size() == 5);
    CHECK(c.segments[2].name == "arc");
    // Arc nodes sit on the circle of radius 1/t = 0.1.
    for (const auto& node : c.nodes)
      if (node.segment == 2) CHECK(std::abs(node.lambda) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(c.truncation_radius > 1.0);
    CHECK_THROWS_AS(build_contour(10.0, 0.1, 0.1, 0.5, 8), std::invalid_argument);
    CHECK_THROWS_AS(build_contour(0.5, 0.1, 0.1, 1e4, 8), std::invalid_argument);
  }

  TEST_CASE("node doubling moves a smooth test integral below 1e-10") {
    auto one = diag_op({1.0});
    const double t = 5.0;
    const Contour c16 = build_contour(t, 0.3, 0.3, 1e4, 16);
    const Contour c32 = build_contour(t, 0.3, 0.3, 1e4, 32);
    const double v16 = semigroup_via_contour(*one, t, c16, false)(0, 0);
    const double v32 = semigroup_via_contour(*one, t, c32, false)(0, 0);
    CHECK(std::abs(v32 - v16) / std::abs(v32) <= 1e-10);
  }

  TEST_CASE("scalar semigroup values through the contour") {
    auto one = diag_op({1.0});
    const double t = 5.0;
    const Contour c = build_contour(t, 0.3, 0.3, 1e4, 12);
    const Eigen::MatrixXd via = semigroup_via_contour(*one, t, c);
    CHECK(via(0, 0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-8));

    auto zero = diag_op({0.0});
    const Eigen::MatrixXd passthrough = semigroup_via_contour(*zero, t, c);
    CHECK(passthrough(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("matrix semigroup matches the spectral exponential") {
    auto op = diag_op({0.01, 1.0, 4.0});
    const double t = 20.0;
    const Contour c = build_contour(t, 0.2, 0.2, 1e4, 12);
    const Eigen::MatrixXd via = semigroup_via_contour(*op, t, c);
    const Eigen::MatrixXd direct =
        apply_spectral_function(*op, [t](double x) { return std::exp(-t * x); });
    CHECK((via - direct).cwiseAbs().maxCoeff() <=
          1e-7 * direct.cwiseAbs().maxCoeff());
  }

  TEST_CASE("deformation invariance under parameter perturbation") {
    auto op = diag_op({0.0, 0.5, 3.0, 9.0});
    const double t = 8.0;
    const Contour c1 = build_contour(t, 0.2, 0.2, 1e4, 12);
    const Contour c2 = build_contour(t, 0.26, 0.14, 1e4, 12);
    const Eigen::MatrixXd v1 = semigroup_via_contour(*op, t, c1, false);
    const Eigen::MatrixXd v2 = semigroup_via_contour(*op, t, c2, false);
    CHECK((v1 - v2).cwiseAbs().maxCoeff() <= 1e-8);
  }

  TEST_CASE("profile integral: zero data and the critically damped scalar") {
    Eigen::MatrixXd a1(1, 1);
    a1 << 1.0;
    auto a = std::make_shared<SelfAdjointOperator>(a1, Grid::periodic(1, 1, 1.0));
    DampingOperator b(Eigen::VectorXd::Constant(1, 2.0), 2.0);
    const SelfAdjointOperator tilde = build_tilde_a(*a, b);
    // Wide contour: the omitted horizontal tails scale like e^{-at}/t, so
    // delta = 3, a = 0.9 (below the pole at i) brings them under 1e-6 at t=12.
    const double t = 12.0;
    const Contour around = build_contour(t, 3.0, 0.9, 1e4, 14, false);

    CauchyData zero;
    zero.u0 = Eigen::VectorXd::Zero(1);
    zero.u1 = Eigen::VectorXd::Zero(1);
    CHECK(low_frequency_profile_integral(*a, b, tilde, zero, t, around, 5.0)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // u'' + 2u' + u = 0, u(0)=0, u'(0)=1 -> u(t) = t e^{-t}; with eps above
    // the spectrum the projector is the identity.
    CauchyData data;
    data.u0 = Eigen::VectorXd::Zero(1);
    data.u1 = Eigen::VectorXd::Constant(1, 1.0);
    const Eigen::VectorXd val =
        low_frequency_profile_integral(*a, b, tilde, data, t, around, 5.0);
    CHECK(std::abs(val[0] - t * std::exp(-t)) <= 1e-6);
  }

  TEST_CASE("residue: envelope value, scale invariance, large-damping decay") {
    for (double a : {0.1, 0.01}) {
      const double t = 1.0 / a;
      const std::complex<double> v = residue_check_optimality(a, t, 16);
      CHECK(t * v.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
      CHECK(std::abs(t * v.imag()) <= 1e-9);
    }
    // 2a e^{-at} - a^2 t e^{-at} at fixed t, large a: exponentially small.
    const std::complex<double> small = residue_check_optimality(3.0, 5.0, 16);
    CHECK(std::abs(small) <= 1e-4);
  }
}
