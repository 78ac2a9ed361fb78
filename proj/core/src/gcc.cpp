#include "dwlab/gcc.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dwlab {

namespace {

struct State {
  std::array<double, 3> x;
  std::array<double, 3> xi;
};

// dx/dt = dp/dxi = 2 g xi,  dxi/dt = -dp/dx = -grad g |xi|^2.
State rhs(const HamiltonianSystem& sys, const State& s, int dim) {
  State d{{0, 0, 0}, {0, 0, 0}};
  const double g = sys.metric.value(s.x, dim);
  const auto grad = sys.metric.gradient(s.x, dim);
  double xi2 = 0;
  for (int i = 0; i < dim; ++i) xi2 += s.xi[i] * s.xi[i];
  for (int i = 0; i < dim; ++i) {
    d.x[i] = 2.0 * g * s.xi[i];
    d.xi[i] = -grad[i] * xi2;
  }
  return d;
}

State axpy(const State& s, double h, const State& d, int dim) {
  State out = s;
  for (int i = 0; i < dim; ++i) {
    out.x[i] += h * d.x[i];
    out.xi[i] += h * d.xi[i];
  }
  return out;
}

State rk4_step(const HamiltonianSystem& sys, const State& s, double h, int dim) {
  const State k1 = rhs(sys, s, dim);
  const State k2 = rhs(sys, axpy(s, 0.5 * h, k1, dim), dim);
  const State k3 = rhs(sys, axpy(s, 0.5 * h, k2, dim), dim);
  const State k4 = rhs(sys, axpy(s, h, k3, dim), dim);
  State out = s;
  for (int i = 0; i < dim; ++i) {
    out.x[i] += h / 6.0 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
    out.xi[i] += h / 6.0 * (k1.xi[i] + 2 * k2.xi[i] + 2 * k3.xi[i] + k4.xi[i]);
  }
  return out;
}

}  // namespace

PhasePoint on_unit_shell(const HamiltonianSystem& sys, const std::array<double, 3>& x,
                         const std::array<double, 3>& direction) {
  double norm2 = 0;
  for (int i = 0; i < sys.dim; ++i) norm2 += direction[i] * direction[i];
  if (norm2 <= 0) throw std::invalid_argument("unit shell: zero direction");
  const double g = sys.metric.value(x, sys.dim);
  if (!(g > 0)) throw std::invalid_argument("unit shell: metric not positive at x");
  PhasePoint p;
  p.x = x;
  const double scale = 1.0 / std::sqrt(g * norm2);
  for (int i = 0; i < sys.dim; ++i) p.xi[i] = direction[i] * scale;
  return p;
}

double hamiltonian(const HamiltonianSystem& sys, const PhasePoint& p) {
  double xi2 = 0;
  for (int i = 0; i < sys.dim; ++i) xi2 += p.xi[i] * p.xi[i];
  return sys.metric.value(p.x, sys.dim) * xi2;
}

FlowTrajectory hamiltonian_flow(const HamiltonianSystem& sys, const PhasePoint& start,
                                double horizon, double dt, double box_radius) {
  if (!(dt > 0) || !(horizon > 0))
    throw std::invalid_argument("hamiltonian flow: need dt > 0 and horizon > 0");
  const int steps = static_cast<int>(std::llround(horizon / dt));
  const double h = horizon / steps;

  FlowTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.points.reserve(steps + 1);
  State s{start.x, start.xi};
  const double p0 = hamiltonian(sys, start);
  traj.times.push_back(0.0);
  traj.points.push_back(start);
  for (int k = 1; k <= steps; ++k) {
    s = rk4_step(sys, s, h, sys.dim);
    PhasePoint p;
    p.x = s.x;
    p.xi = s.xi;
    traj.times.push_back(k * h);
    traj.points.push_back(p);
    traj.max_p_drift =
        std::max(traj.max_p_drift, std::abs(hamiltonian(sys, p) - p0) / std::abs(p0));
    if (box_radius > 0) {
      double r2 = 0;
      for (int i = 0; i < sys.dim; ++i) r2 += s.x[i] * s.x[i];
      if (r2 > box_radius * box_radius) traj.left_box = true;
    }
  }
  return traj;
}

double damping_average(const HamiltonianSystem& sys, const PhasePoint& start, double horizon,
                       double dt) {
  FlowTrajectory traj = hamiltonian_flow(sys, start, horizon, dt);
  // Composite Simpson over the uniform samples (even interval count enforced
  // by doubling the last interval weight when odd).
  const std::size_t m = traj.points.size();
  if (m < 3) throw std::invalid_argument("damping average: horizon too short for the step");
  std::vector<double> a(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = sys.damping.value(traj.points[i].x, sys.dim);
  const double h = traj.times[1] - traj.times[0];
  const std::size_t intervals = m - 1;
  double integral = 0.0;
  std::size_t last_even = intervals % 2 == 0 ? intervals : intervals - 1;
  for (std::size_t i = 0; i + 2 <= last_even; i += 2)
    integral += h / 3.0 * (a[i] + 4.0 * a[i + 1] + a[i + 2]);
  if (intervals % 2 != 0)  // trapezoid on the leftover interval
    integral += 0.5 * h * (a[intervals - 1] + a[intervals]);
  return integral / horizon;
}

GccReport check_gcc(const HamiltonianSystem& sys, const GccSampleSpec& spec, double horizon,
                    double alpha, double dt, bool keep_samples) {
  GccReport report;
  report.horizon = horizon;
  report.min_average = std::numeric_limits<double>::infinity();

  const int npos = spec.positions_per_axis;
  const int ndir = sys.dim == 1 ? 2 : spec.directions;
  int pos_total = 1;
  for (int d = 0; d < sys.dim; ++d) pos_total *= npos;

  for (int pi = 0; pi < pos_total; ++pi) {
    std::array<double, 3> x{0, 0, 0};
    std::array<int, 3> mi{0, 0, 0};
    int rest = pi;
    bool on_boundary = false;
    for (int d = sys.dim - 1; d >= 0; --d) {
      mi[d] = rest % npos;
      rest /= npos;
      x[d] = spec.box_lo[d] +
             (spec.box_hi[d] - spec.box_lo[d]) * (npos == 1 ? 0.5 : double(mi[d]) / (npos - 1));
      on_boundary = on_boundary || mi[d] == 0 || mi[d] == npos - 1;
    }
    for (int di = 0; di < ndir; ++di) {
      std::array<double, 3> dir{0, 0, 0};
      if (sys.dim == 1) {
        dir[0] = di == 0 ? 1.0 : -1.0;
      } else if (sys.dim == 2) {
        const double th = 2.0 * std::numbers::pi * di / ndir;
        dir[0] = std::cos(th);
        dir[1] = std::sin(th);
      } else {
        // Fibonacci sphere directions for d=3.
        const double z = 1.0 - 2.0 * (di + 0.5) / ndir;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = std::numbers::pi * (1.0 + std::sqrt(5.0)) * di;
        dir = {r * std::cos(th), r * std::sin(th), z};
      }
      const PhasePoint p0 = on_unit_shell(sys, x, dir);
      const double avg = damping_average(sys, p0, horizon, dt);
      ++report.samples;
      if (keep_samples) report.sample_dump.push_back({p0, avg});
      if (avg < report.min_average) {
        report.min_average = avg;
        report.arg_min = p0;
        report.min_on_boundary = on_boundary;
      }
    }
  }

  report.alpha_estimate = report.min_average * 0.9;
  report.requested_alpha = alpha > 0 ? alpha : report.alpha_estimate;
  report.pass = report.min_average >= report.requested_alpha;
  std::ostringstream os;
  os << "sampled " << report.samples << " shell points (" << npos << "^" << sys.dim
     << " positions x " << ndir << " directions); the verdict holds at this resolution only";
  report.resolution_note = os.str();
  return report;
}

}  // namespace dwlab
