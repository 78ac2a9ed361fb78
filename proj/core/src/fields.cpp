#include "dwlab/fields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dwlab {

namespace {

double radial_distance(const std::array<double, 3>& x, const std::array<double, 3>& c,
                       int dim) {
  double r2 = 0;
  for (int d = 0; d < dim; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
  return std::sqrt(r2);
}

}  // namespace

double plateau_bump(double u, double flat_fraction) {
  u = std::abs(u);
  if (u <= flat_fraction) return 1.0;
  if (u >= 1.0) return 0.0;
  const double s = (u - flat_fraction) / (1.0 - flat_fraction);
  const double q = 1.0 - s * s;
  return q * q;
}

double plateau_bump_derivative(double u, double flat_fraction) {
  const double sign = u < 0 ? -1.0 : 1.0;
  u = std::abs(u);
  if (u <= flat_fraction || u >= 1.0) return 0.0;
  const double s = (u - flat_fraction) / (1.0 - flat_fraction);
  return sign * -4.0 * s * (1.0 - s * s) / (1.0 - flat_fraction);
}

double CoefficientField::value(const std::array<double, 3>& x, int dim) const {
  switch (kind_) {
    case FieldKind::constant:
      return base_;
    case FieldKind::sine: {
      double p = 1.0;
      for (int d = 0; d < dim; ++d)
        p *= std::sin(2.0 * std::numbers::pi * (x[d] - center_[d]) / period_);
      return base_ + amp_ * p;
    }
    case FieldKind::gaussian_bump: {
      const double r = radial_distance(x, center_, dim);
      return base_ + amp_ * std::exp(-r * r / (width_ * width_));
    }
    case FieldKind::bump: {
      const double r = radial_distance(x, center_, dim);
      return amp_ * plateau_bump(r / radius_, flat_fraction_);
    }
    case FieldKind::bump_complement: {
      const double r = radial_distance(x, center_, dim);
      return base_ * (1.0 - plateau_bump(r / radius_, flat_fraction_));
    }
    case FieldKind::sigmoid_ring: {
      const double r = radial_distance(x, center_, dim);
      return base_ + amp_ / (1.0 + std::exp(-(r - radius_) / width_));
    }
  }
  return base_;
}

std::array<double, 3> CoefficientField::gradient(const std::array<double, 3>& x,
                                                 int dim) const {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  switch (kind_) {
    case FieldKind::constant:
      break;
    case FieldKind::sine: {
      const double w = 2.0 * std::numbers::pi / period_;
      for (int d = 0; d < dim; ++d) {
        double p = amp_ * w * std::cos(w * (x[d] - center_[d]));
        for (int e = 0; e < dim; ++e)
          if (e != d) p *= std::sin(w * (x[e] - center_[e]));
        g[d] = p;
      }
      break;
    }
    case FieldKind::gaussian_bump: {
      const double r = radial_distance(x, center_, dim);
      const double f = amp_ * std::exp(-r * r / (width_ * width_));
      for (int d = 0; d < dim; ++d)
        g[d] = f * (-2.0 * (x[d] - center_[d]) / (width_ * width_));
      break;
    }
    case FieldKind::bump:
    case FieldKind::bump_complement: {
      const double r = radial_distance(x, center_, dim);
      if (r == 0.0) break;
      const double db = plateau_bump_derivative(r / radius_, flat_fraction_) / radius_;
      const double scale = kind_ == FieldKind::bump ? amp_ : -base_;
      for (int d = 0; d < dim; ++d) g[d] = scale * db * (x[d] - center_[d]) / r;
      break;
    }
    case FieldKind::sigmoid_ring: {
      const double r = radial_distance(x, center_, dim);
      if (r == 0.0) break;
      const double e = std::exp(-(r - radius_) / width_);
      const double ds = amp_ * e / (width_ * (1.0 + e) * (1.0 + e));
      for (int d = 0; d < dim; ++d) g[d] = ds * (x[d] - center_[d]) / r;
      break;
    }
  }
  return g;
}

Eigen::VectorXd CoefficientField::sample(const Grid& grid) const {
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = value(grid.coord(i), grid.dim);
  return v;
}

double CoefficientField::analytic_lower_bound() const {
  switch (kind_) {
    case FieldKind::constant:
      return base_;
    case FieldKind::sine:
      return base_ - std::abs(amp_);
    case FieldKind::gaussian_bump:
      return amp_ >= 0 ? base_ : base_ + amp_;
    case FieldKind::bump:
      return std::min(0.0, amp_);
    case FieldKind::bump_complement:
      return 0.0;
    case FieldKind::sigmoid_ring:
      return amp_ >= 0 ? base_ : base_ + amp_;
  }
  return 0.0;
}

std::string CoefficientField::describe() const {
  std::ostringstream os;
  os << name_ << "(base=" << base_ << ", amp=" << amp_ << ", period=" << period_
     << ", radius=" << radius_ << ", width=" << width_ << ", flat=" << flat_fraction_
     << ", center=" << center_[0] << "," << center_[1] << "," << center_[2] << ")";
  return os.str();
}

CoefficientField CoefficientField::constant(double v) {
  CoefficientField f;
  f.kind_ = FieldKind::constant;
  f.name_ = "constant";
  f.base_ = v;
  return f;
}

CoefficientField CoefficientField::sine(double base, double amp, double period,
                                        const std::array<double, 3>& center) {
  if (!(period > 0)) throw std::invalid_argument("sine field: period must be positive");
  CoefficientField f;
  f.kind_ = FieldKind::sine;
  f.name_ = "sine";
  f.base_ = base;
  f.amp_ = amp;
  f.period_ = period;
  f.center_ = center;
  return f;
}

CoefficientField CoefficientField::gaussian_bump(double base, double amp, double width,
                                                 const std::array<double, 3>& center) {
  if (!(width > 0)) throw std::invalid_argument("gaussian field: width must be positive");
  CoefficientField f;
  f.kind_ = FieldKind::gaussian_bump;
  f.name_ = "gaussian_bump";
  f.base_ = base;
  f.amp_ = amp;
  f.width_ = width;
  f.center_ = center;
  return f;
}

CoefficientField CoefficientField::bump(double amp, double radius, double flat_fraction,
                                        const std::array<double, 3>& center) {
  if (!(radius > 0) || flat_fraction < 0 || flat_fraction >= 1)
    throw std::invalid_argument("bump field: need radius > 0 and flat_fraction in [0,1)");
  CoefficientField f;
  f.kind_ = FieldKind::bump;
  f.name_ = "bump";
  f.amp_ = amp;
  f.radius_ = radius;
  f.flat_fraction_ = flat_fraction;
  f.center_ = center;
  return f;
}

CoefficientField CoefficientField::bump_complement(double outside, double radius,
                                                   double flat_fraction,
                                                   const std::array<double, 3>& center) {
  if (!(radius > 0) || flat_fraction < 0 || flat_fraction >= 1)
    throw std::invalid_argument(
        "bump_complement field: need radius > 0 and flat_fraction in [0,1)");
  CoefficientField f;
  f.kind_ = FieldKind::bump_complement;
  f.name_ = "bump_complement";
  f.base_ = outside;
  f.radius_ = radius;
  f.flat_fraction_ = flat_fraction;
  f.center_ = center;
  return f;
}

CoefficientField CoefficientField::sigmoid_ring(double base, double amp, double radius,
                                                double width,
                                                const std::array<double, 3>& center) {
  if (!(width > 0) || !(radius > 0))
    throw std::invalid_argument("sigmoid_ring field: need radius, width > 0");
  CoefficientField f;
  f.kind_ = FieldKind::sigmoid_ring;
  f.name_ = "sigmoid_ring";
  f.base_ = base;
  f.amp_ = amp;
  f.radius_ = radius;
  f.width_ = width;
  f.center_ = center;
  return f;
}

}  // namespace dwlab
