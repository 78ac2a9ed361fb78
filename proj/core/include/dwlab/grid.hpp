// Uniform tensor grids on periodic tori and Dirichlet boxes.
#pragma once

#include <array>
#include <string>

namespace dwlab {

enum class Boundary { periodic, dirichlet };

// Uniform grid in dimension 1..3 with points_per_axis cells per axis.
// Periodic: nodes x_i = i*h on [0, L), L = n*h. Dirichlet: interior nodes
// x_i = (i+1)*h on (0, L), L = (n+1)*h. Total unknowns are capped so dense
// eigendecomposition stays feasible.
struct Grid {
  int dim = 1;
  int points_per_axis = 0;
  double spacing = 0.0;
  Boundary boundary = Boundary::periodic;

  static Grid periodic(int dim, int points_per_axis, double length);
  static Grid dirichlet(int dim, int points_per_axis, double length);

  int size() const;
  double length() const;
  double cell_measure() const;  // h^dim

  // Flattened row-major index <-> per-axis indices <-> coordinates.
  int flat_index(const std::array<int, 3>& multi) const;
  std::array<int, 3> multi_index(int flat) const;
  std::array<double, 3> coord(int flat) const;

  std::string describe() const;
};

inline constexpr int kMaxUnknowns = 8192;

}  // namespace dwlab
