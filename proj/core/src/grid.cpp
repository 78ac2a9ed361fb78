#include "dwlab/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dwlab {

namespace {

Grid make(int dim, int n, double length, Boundary b) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2, or 3");
  if (n < 1) throw std::invalid_argument("grid: need at least 1 point per axis");
  double total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  if (total > kMaxUnknowns)
    throw std::invalid_argument("grid: total unknowns exceed dense-eigensolver cap (" +
                                std::to_string(kMaxUnknowns) + ")");
  Grid g;
  g.dim = dim;
  g.points_per_axis = n;
  g.boundary = b;
  g.spacing = b == Boundary::periodic ? length / n : length / (n + 1);
  if (!(g.spacing > 0.0)) throw std::invalid_argument("grid: nonpositive spacing");
  return g;
}

}  // namespace

Grid Grid::periodic(int dim, int n, double length) {
  return make(dim, n, length, Boundary::periodic);
}

Grid Grid::dirichlet(int dim, int n, double length) {
  return make(dim, n, length, Boundary::dirichlet);
}

int Grid::size() const {
  int s = 1;
  for (int d = 0; d < dim; ++d) s *= points_per_axis;
  return s;
}

double Grid::length() const {
  return boundary == Boundary::periodic ? spacing * points_per_axis
                                        : spacing * (points_per_axis + 1);
}

double Grid::cell_measure() const { return std::pow(spacing, dim); }

int Grid::flat_index(const std::array<int, 3>& multi) const {
  int f = 0;
  for (int d = 0; d < dim; ++d) f = f * points_per_axis + multi[d];
  return f;
}

std::array<int, 3> Grid::multi_index(int flat) const {
  std::array<int, 3> m{0, 0, 0};
  for (int d = dim - 1; d >= 0; --d) {
    m[d] = flat % points_per_axis;
    flat /= points_per_axis;
  }
  return m;
}

std::array<double, 3> Grid::coord(int flat) const {
  auto m = multi_index(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double offset = boundary == Boundary::periodic ? 0.0 : 1.0;
  for (int d = 0; d < dim; ++d) x[d] = (m[d] + offset) * spacing;
  return x;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dim << "d " << (boundary == Boundary::periodic ? "periodic" : "dirichlet") << " n="
     << points_per_axis << " h=" << spacing << " L=" << length();
  return os.str();
}

}  // namespace dwlab
