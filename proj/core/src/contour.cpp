#include "dwlab/contour.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwlab {

namespace {

using Complex = std::complex<double>;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLNode[kGL / 2] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGLWeight[kGL / 2] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Panel breakpoints on [0,1]; |grade| > 1 is the TOTAL largest/smallest panel
// ratio, graded toward s=0 (toward s=1 when grade < 0). Keeping the total
// ratio fixed means doubling the panel count refines every region, so the
// node-doubling convergence check is meaningful.
std::vector<double> panel_breaks(int panels, double grade) {
  std::vector<double> b(panels + 1);
  const bool mirror = grade < 0;
  grade = std::abs(grade);
  if (grade <= 1.0 || panels == 1) {
    for (int i = 0; i <= panels; ++i) b[i] = double(i) / panels;
    return b;
  }
  double total = 0;
  std::vector<double> sizes(panels);
  for (int i = 0; i < panels; ++i)
    total += (sizes[i] = std::pow(grade, double(i) / (panels - 1)));
  b[0] = 0;
  for (int i = 0; i < panels; ++i) b[i + 1] = b[i] + sizes[i] / total;
  b[panels] = 1.0;
  if (mirror)
    for (int i = 0; i <= panels; ++i) b[i] = 1.0 - b[panels - i];
  return b;
}

// Appends composite GL nodes for lambda(s), s in [0,1], to the contour. The
// intended endpoints are stored explicitly; trig parametrizations only match
// them to roundoff.
template <typename Gamma, typename GammaPrime>
void add_segment(Contour& contour, const std::string& name, Complex start, Complex end,
                 const Gamma& gamma, const GammaPrime& gamma_prime, int panels,
                 double grade) {
  const int seg_id = static_cast<int>(contour.segments.size());
  contour.segments.push_back({name, start, end});
  const auto breaks = panel_breaks(panels, grade);
  for (int p = 0; p < panels; ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (int q = 0; q < kGL; ++q) {
      const int j = q / 2;
      const double sign = (q % 2 == 0) ? 1.0 : -1.0;
      const double s = mid + sign * half * kGLNode[j];
      ContourNode node;
      node.segment = seg_id;
      node.s = s;
      node.lambda = gamma(s);
      node.weight = gamma_prime(s) * (half * kGLWeight[j]);
      contour.nodes.push_back(node);
    }
  }
}

void add_line(Contour& contour, const std::string& name, Complex z0, Complex z1, int panels,
              double grade) {
  add_segment(
      contour, name, z0, z1, [=](double s) { return z0 + s * (z1 - z0); },
      [=](double) { return z1 - z0; }, panels, grade);
}

}  // namespace

double Contour::continuity_residual() const {
  double gap = 0.0;
  for (std::size_t i = 1; i < segments.size(); ++i)
    gap = std::max(gap, std::abs(segments[i].start - segments[i - 1].end));
  return gap;
}

Contour build_contour(double t, double delta, double height, double r_max,
                            int panels_per_segment, bool with_diagonal_rays) {
  if (!(t > 1.0))
    throw std::invalid_argument("contour: t must exceed 1 (the arc radius is 1/t)");
  if (!(delta > 0.0) || !(height > 0.0))
    throw std::invalid_argument("contour: delta and height must be positive");
  const double rho = 1.0 / t;
  if (rho >= std::hypot(delta, height))
    throw std::invalid_argument("contour: arc radius 1/t must stay inside the junctions");

  Contour contour;
  contour.t_scale = t;
  contour.delta = delta;
  contour.height = height;
  contour.panels_per_segment = panels_per_segment;
  contour.with_diagonal_rays = with_diagonal_rays;

  // Diagonal rays run from the junctions along (+-1 + i); truncate where the
  // e^{i lambda t} factor is below 1e-14.
  const double s_tail = std::max(14.0 * std::numbers::ln10 / t - height, 0.5 / t);
  const Complex junction_p(delta, height);
  const Complex junction_m(-delta, height);
  contour.truncation_radius = std::abs(junction_p + s_tail * Complex(1.0, 1.0));
  if (with_diagonal_rays && contour.truncation_radius > r_max)
    throw std::invalid_argument(
        "contour: r_max too small for the 1e-12 tail target (need radius " +
        std::to_string(contour.truncation_radius) + ")");

  const double grade = 512.0;  // total panel-size ratio toward the origin
  if (with_diagonal_rays) {
    // Incoming diagonal ray, traversed toward the junction.
    add_segment(
        contour, "diag-minus", junction_m + s_tail * Complex(-1.0, 1.0), junction_m,
        [=](double s) { return junction_m + (1.0 - s) * s_tail * Complex(-1.0, 1.0); },
        [=](double) { return -s_tail * Complex(-1.0, 1.0); }, panels_per_segment, -512.0);
  }
  // Short ray down to the arc, graded toward the arc end.
  add_line(contour, "ray-minus", junction_m, Complex(-rho, 0.0), panels_per_segment, -grade);
  // Arc of radius 1/t through -i/t, theta from -pi to 0 relative to the
  // positive real axis: from -1/t to +1/t passing below the origin.
  add_segment(
      contour, "arc", Complex(-rho, 0.0), Complex(rho, 0.0),
      [=](double s) {
        const double th = -std::numbers::pi * (1.0 - s);
        return rho * Complex(std::cos(th), std::sin(th));
      },
      [=](double s) {
        const double th = -std::numbers::pi * (1.0 - s);
        return rho * std::numbers::pi * Complex(-std::sin(th), std::cos(th));
      },
      panels_per_segment, 1.0);
  // Ray back up to the +junction; panel_breaks grades toward s=0, the arc end.
  add_line(contour, "ray-plus", Complex(rho, 0.0), junction_p, panels_per_segment, grade);
  if (with_diagonal_rays) {
    add_segment(
        contour, "diag-plus", junction_p, junction_p + s_tail * Complex(1.0, 1.0),
        [=](double s) { return junction_p + s * s_tail * Complex(1.0, 1.0); },
        [=](double) { return s_tail * Complex(1.0, 1.0); }, panels_per_segment, 512.0);
  }
  return contour;
}

Eigen::MatrixXd semigroup_via_contour(const SelfAdjointOperator& op, double t,
                                      const Contour& contour, bool convergence_check,
                                      double drift_tol) {
  const Eigen::Index n = op.size();
  auto quadrature = [&](const Contour& c) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& node : c.nodes) {
      Eigen::MatrixXcd shifted = op.matrix().cast<Complex>();
      shifted.diagonal().array() += Complex(0, 1) * node.lambda;
      const Eigen::MatrixXcd inv =
          Eigen::PartialPivLU<Eigen::MatrixXcd>(shifted).solve(
              Eigen::MatrixXcd::Identity(n, n));
      acc += (node.weight * std::exp(Complex(0, 1) * node.lambda * t)) * inv;
    }
    return Eigen::MatrixXcd(acc / (2.0 * std::numbers::pi));
  };

  Eigen::MatrixXcd result = quadrature(contour);
  if (convergence_check) {
    Contour doubled = build_contour(contour.t_scale, contour.delta, contour.height,
                                          contour.truncation_radius + 1.0,
                                          2 * contour.panels_per_segment,
                                          contour.with_diagonal_rays);
    const Eigen::MatrixXcd refined = quadrature(doubled);
    const double scale = std::max(refined.cwiseAbs().maxCoeff(), 1e-300);
    const double drift = (refined - result).cwiseAbs().maxCoeff() / scale;
    if (drift > drift_tol)
      throw std::runtime_error("contour semigroup: node-doubling drift " +
                               std::to_string(drift) + " exceeds tolerance");
    result = refined;
  }
  return result.real();
}

Eigen::VectorXd low_frequency_profile_integral(const SelfAdjointOperator& a,
                                               const DampingOperator& b,
                                               const SelfAdjointOperator& tilde_a,
                                               const CauchyData& data, double t,
                                               const Contour& contour, double eps) {
  const Eigen::Index n = a.size();
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);
  for (const auto& node : contour.nodes) {
    const Complex il = Complex(0, 1) * node.lambda;
    // Pencil (i la)^2 + B (i la) + A applied to the combined data vector.
    Eigen::MatrixXcd pencil = a.matrix().cast<Complex>();
    pencil.diagonal() += (il * il + il * b.diagonal().array().cast<Complex>()).matrix();
    Eigen::VectorXcd rhs = il * data.u0.cast<Complex>();
    rhs += b.apply(data.u0).cast<Complex>();
    rhs += data.u1.cast<Complex>();
    const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(pencil).solve(rhs);
    acc += (node.weight * std::exp(il * t)) * x;
  }
  acc /= 2.0 * std::numbers::pi;

  // Low-frequency projector (1 - Phi) applied once; it commutes with nothing
  // along the contour, but is lambda-independent.
  const Eigen::MatrixXd phi =
      apply_spectral_function(tilde_a, [eps](double x) { return x >= eps ? 1.0 : 0.0; });
  const Eigen::VectorXd b_sqrt = b.diagonal().cwiseSqrt();
  Eigen::VectorXd real_part = acc.real();
  const Eigen::VectorXd high =
      b_sqrt.cwiseInverse().cwiseProduct(phi * b_sqrt.cwiseProduct(real_part));
  return real_part - high;
}

std::complex<double> residue_check_optimality(double a, double t, int panels_per_segment) {
  if (!(a > 0.0) || !(t > 1.0))
    throw std::invalid_argument("residue check: need a > 0 and t > 1");
  // Close the around-origin contour with a top segment above the pole at i*a.
  const double height = 2.0 * a;
  const double delta = 2.0 * a;
  const double rho = 1.0 / t;
  if (rho >= height)
    throw std::invalid_argument("residue check: arc radius 1/t must stay below the top");

  Contour loop;
  loop.t_scale = t;
  loop.delta = delta;
  loop.height = height;
  loop.panels_per_segment = panels_per_segment;
  const Complex jp(delta, height);
  const Complex jm(-delta, height);
  add_line(loop, "ray-minus", jm, Complex(-rho, 0.0), panels_per_segment, -512.0);
  add_segment(
      loop, "arc", Complex(-rho, 0.0), Complex(rho, 0.0),
      [=](double s) {
        const double th = -std::numbers::pi * (1.0 - s);
        return rho * Complex(std::cos(th), std::sin(th));
      },
      [=](double s) {
        const double th = -std::numbers::pi * (1.0 - s);
        return rho * std::numbers::pi * Complex(-std::sin(th), std::cos(th));
      },
      panels_per_segment, 1.0);
  add_line(loop, "ray-plus", Complex(rho, 0.0), jp, panels_per_segment, 512.0);
  add_line(loop, "top", jp, jm, panels_per_segment, 1.0);

  Complex acc = 0.0;
  for (const auto& node : loop.nodes) {
    const Complex il = Complex(0, 1) * node.lambda;
    const Complex denom = il + a;
    acc += node.weight * node.lambda * node.lambda * std::exp(il * t) / (denom * denom);
  }
  return acc / (2.0 * std::numbers::pi);
}

}  // namespace dwlab
