// Closed-form coefficient fields (metric g, damping a, auxiliary bump b) with
// analytic gradients. Fields are named presets plus parameters; experiments
// reference them by name so runs are self-describing.
#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "dwlab/grid.hpp"

namespace dwlab {

enum class FieldKind {
  constant,         // v
  sine,             // base + amp * prod_d sin(2 pi (x_d - center_d) / period)
  gaussian_bump,    // base + amp * exp(-|x-center|^2 / width^2)
  bump,             // amp * plateau_bump(|x-center| / radius)
  bump_complement,  // outside * (1 - plateau_bump(|x-center| / radius))
  sigmoid_ring      // base + amp / (1 + exp(-(|x-center| - radius) / width))
};

// plateau_bump(u) is 1 for u <= flat_fraction, decays as (1-s^2)^2 on the
// shoulder (s the rescaled shoulder coordinate), and is 0 for u >= 1. C^1,
// compactly supported, and its line integrals have closed forms.
double plateau_bump(double u, double flat_fraction);
double plateau_bump_derivative(double u, double flat_fraction);

class CoefficientField {
 public:
  double value(const std::array<double, 3>& x, int dim) const;
  std::array<double, 3> gradient(const std::array<double, 3>& x, int dim) const;

  Eigen::VectorXd sample(const Grid& grid) const;
  // Greatest lower bound over the preset's range (exact for these closed
  // forms), used as the damping floor c.
  double analytic_lower_bound() const;

  const std::string& name() const { return name_; }
  FieldKind kind() const { return kind_; }
  std::string describe() const;

  static CoefficientField constant(double v);
  static CoefficientField sine(double base, double amp, double period,
                               const std::array<double, 3>& center = {0, 0, 0});
  static CoefficientField gaussian_bump(double base, double amp, double width,
                                        const std::array<double, 3>& center);
  static CoefficientField bump(double amp, double radius, double flat_fraction,
                               const std::array<double, 3>& center);
  static CoefficientField bump_complement(double outside, double radius, double flat_fraction,
                                          const std::array<double, 3>& center);
  static CoefficientField sigmoid_ring(double base, double amp, double radius, double width,
                                       const std::array<double, 3>& center);

 private:
  FieldKind kind_ = FieldKind::constant;
  std::string name_;
  double base_ = 1.0;
  double amp_ = 0.0;
  double period_ = 1.0;
  double radius_ = 1.0;
  double width_ = 1.0;
  double flat_fraction_ = 0.0;
  std::array<double, 3> center_{0.0, 0.0, 0.0};
};

}  // namespace dwlab
