#include "dwlab/operators.hpp"

#include <lapacke.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dwlab {

namespace {

constexpr double kSymmetryTol = 1e-12;   // relative to max |entry|
constexpr double kKernelRelTol = 1e-10;  // eigenvalues below this*scale count as kernel

void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << who << ": matrix asymmetry " << asym << " exceeds tolerance " << kSymmetryTol * scale;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

SelfAdjointOperator::SelfAdjointOperator(Eigen::MatrixXd matrix, Grid grid)
    : matrix_(std::move(matrix)),
      grid_(std::move(grid)),
      guard_(std::make_shared<std::mutex>()) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("self-adjoint operator: matrix must be square");
  if (matrix_.rows() != grid_.size())
    throw std::invalid_argument("self-adjoint operator: matrix size does not match grid");
  require_symmetric(matrix_, "self-adjoint operator");
}

const SpectralDecomposition& SelfAdjointOperator::spectrum() const {
  // Double-checked: shared_ptr load is atomic enough for the immutable cache.
  auto cached = std::atomic_load(&cache_);
  if (!cached) {
    std::lock_guard<std::mutex> lock(*guard_);
    cached = std::atomic_load(&cache_);
    if (!cached) {
      auto spec = std::make_shared<SpectralDecomposition>();
      const auto n = static_cast<lapack_int>(matrix_.rows());
      spec->eigenvectors = matrix_;
      spec->eigenvalues.resize(n);
      lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                       spec->eigenvectors.data(), n,
                                       spec->eigenvalues.data());
      if (info != 0)
        throw std::runtime_error("spectral decomposition failed (dsyevd info=" +
                                 std::to_string(info) + ")");
      cached = spec;
      std::atomic_store(&cache_, std::shared_ptr<const SpectralDecomposition>(spec));
    }
  }
  return *cached;
}

bool SelfAdjointOperator::spectrum_cached() const {
  return static_cast<bool>(std::atomic_load(&cache_));
}

double SelfAdjointOperator::smallest_positive_eigenvalue() const {
  const auto& ev = spectrum().eigenvalues;
  const double scale = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > kKernelRelTol * scale) return ev[i];
  throw std::runtime_error("operator has no positive eigenvalue above the kernel threshold");
}

double SelfAdjointOperator::gap_time() const { return 0.1 / smallest_positive_eigenvalue(); }

DampingOperator::DampingOperator(Eigen::VectorXd diagonal, double lower_bound)
    : diag_(std::move(diagonal)), lower_bound_(lower_bound) {
  if (lower_bound_ < 0) throw std::invalid_argument("damping: lower bound must be >= 0");
  if (!diag_.allFinite()) throw std::invalid_argument("damping: non-finite diagonal entry");
  if (diag_.size() == 0) throw std::invalid_argument("damping: empty diagonal");
  const double lo = diag_.minCoeff();
  if (lo < 0) throw std::invalid_argument("damping: negative diagonal entry");
  if (lower_bound_ > 0 && lo < lower_bound_ * (1.0 - 1e-12))
    throw std::invalid_argument("damping: diagonal entry below the declared lower bound");
}

DampingOperator DampingOperator::from_field(const Grid& grid, const CoefficientField& a) {
  Eigen::VectorXd diag = a.sample(grid);
  // The analytic bound of the preset is a certified floor for every sample.
  double c = std::max(0.0, a.analytic_lower_bound());
  return DampingOperator(std::move(diag), c);
}

DampingOperator DampingOperator::identity(Eigen::Index n) {
  return DampingOperator(Eigen::VectorXd::Ones(n), 1.0);
}

DampingOperator::DampingOperator(Eigen::VectorXd diagonal, IndefiniteTag)
    : diag_(std::move(diagonal)), lower_bound_(0.0), sign_indefinite_(true) {
  if (!diag_.allFinite()) throw std::invalid_argument("damping: non-finite diagonal entry");
}

DampingOperator DampingOperator::indefinite(Eigen::VectorXd diagonal) {
  return DampingOperator(std::move(diagonal), IndefiniteTag{});
}

Eigen::VectorXd DampingOperator::apply(const Eigen::VectorXd& v) const {
  return diag_.cwiseProduct(v);
}

Eigen::VectorXd DampingOperator::apply_sqrt(const Eigen::VectorXd& v) const {
  return diag_.cwiseSqrt().cwiseProduct(v);
}

Eigen::VectorXd DampingOperator::apply_inv(const Eigen::VectorXd& v) const {
  if (diag_.minCoeff() <= 0.0)
    throw std::domain_error("damping: inverse requires strictly positive diagonal");
  return v.cwiseQuotient(diag_);
}

Eigen::VectorXd DampingOperator::apply_inv_sqrt(const Eigen::VectorXd& v) const {
  if (diag_.minCoeff() <= 0.0)
    throw std::domain_error("damping: inverse sqrt requires strictly positive diagonal");
  return v.cwiseQuotient(diag_.cwiseSqrt());
}

SelfAdjointOperator build_divergence_form(const Grid& grid, const CoefficientField& g) {
  const int n = grid.points_per_axis;
  if (n < 2)
    throw std::invalid_argument("divergence form: need at least 2 points per axis");
  const int total = grid.size();
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);

  // One symmetric link per cell face; the face coefficient enters both rows,
  // which makes the assembled matrix exactly symmetric.
  auto face_coeff = [&](const std::array<double, 3>& xf) {
    const double v = g.value(xf, grid.dim);
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "divergence form: non-elliptic coefficient g=" << v << " at face ("
         << xf[0] << ", " << xf[1] << ", " << xf[2] << ")";
      throw std::invalid_argument(os.str());
    }
    return v;
  };

  for (int i = 0; i < total; ++i) {
    const auto mi = grid.multi_index(i);
    const auto xi = grid.coord(i);
    for (int axis = 0; axis < grid.dim; ++axis) {
      // Face between this node and its +axis neighbour.
      std::array<double, 3> xf = xi;
      xf[axis] += 0.5 * grid.spacing;
      const bool last = mi[axis] == n - 1;
      if (grid.boundary == Boundary::periodic || !last) {
        const double w = face_coeff(xf) * inv_h2;
        auto mj = mi;
        mj[axis] = last ? 0 : mi[axis] + 1;
        const int j = grid.flat_index(mj);
        m(i, i) += w;
        m(j, j) += w;
        m(i, j) -= w;
        m(j, i) -= w;
      } else {
        // Dirichlet: link to the zero boundary value contributes only to the
        // diagonal.
        m(i, i) += face_coeff(xf) * inv_h2;
      }
      if (grid.boundary == Boundary::dirichlet && mi[axis] == 0) {
        std::array<double, 3> x0 = xi;
        x0[axis] -= 0.5 * grid.spacing;
        m(i, i) += face_coeff(x0) * inv_h2;
      }
    }
  }
  return SelfAdjointOperator(std::move(m), grid);
}

SpectralDecomposition spectral_decompose(const SelfAdjointOperator& op) {
  return op.spectrum();
}

Eigen::MatrixXd apply_spectral_function(const SelfAdjointOperator& op,
                                        const std::function<double(double)>& f) {
  const auto& spec = op.spectrum();
  const Eigen::Index n = op.size();
  Eigen::VectorXd fe(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fe[i] = f(spec.eigenvalues[i]);
    if (!std::isfinite(fe[i])) {
      std::ostringstream os;
      os << "spectral function: non-finite value f(" << spec.eigenvalues[i] << ") = " << fe[i]
         << " at eigenvalue index " << i;
      throw std::domain_error(os.str());
    }
  }
  return spec.eigenvectors * fe.asDiagonal() * spec.eigenvectors.transpose();
}

SelfAdjointOperator build_tilde_a(const SelfAdjointOperator& a, const DampingOperator& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("tilde A: operator and damping sizes differ");
  if (!b.strictly_positive())
    throw std::domain_error(
        "tilde A: damping floor is zero; the conjugated operator needs strictly positive "
        "damping (use the strictly positive surrogate c = a + b instead)");
  const Eigen::VectorXd w = b.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd m = w.asDiagonal() * a.matrix() * w.asDiagonal();
  m = 0.5 * (m + m.transpose()).eval();
  return SelfAdjointOperator(std::move(m), a.grid());
}

double discrete_norm(const Eigen::VectorXd& v, NormKind which, const Grid& grid,
                     const SelfAdjointOperator* a) {
  const double meas = grid.cell_measure();
  const Eigen::Index n = grid.size();

  auto h1_sq = [&](const Eigen::VectorXd& u) {
    if (a == nullptr) throw std::invalid_argument("discrete norm: H1 norm needs the operator");
    // ||sqrt(A) u||_{L2}^2 = h^d u^T A u, clamped against PSD roundoff.
    return std::max(0.0, meas * u.dot(a->matrix() * u));
  };

  switch (which) {
    case NormKind::L1:
      if (v.size() != n) throw std::invalid_argument("discrete norm: size mismatch");
      return v.cwiseAbs().sum() * meas;
    case NormKind::L2:
      if (v.size() != n) throw std::invalid_argument("discrete norm: size mismatch");
      return std::sqrt(v.squaredNorm() * meas);
    case NormKind::Linf:
      if (v.size() != n) throw std::invalid_argument("discrete norm: size mismatch");
      return v.cwiseAbs().maxCoeff();
    case NormKind::H1:
      if (v.size() != n) throw std::invalid_argument("discrete norm: size mismatch");
      return std::sqrt(h1_sq(v));
    case NormKind::energy0:
    case NormKind::energyH: {
      if (v.size() != 2 * n) throw std::invalid_argument("discrete norm: state must be 2n");
      const Eigen::VectorXd u = v.head(n);
      const Eigen::VectorXd w = v.tail(n);
      double sq = h1_sq(u) + w.squaredNorm() * meas;
      if (which == NormKind::energyH) sq += u.squaredNorm() * meas;
      return std::sqrt(sq);
    }
  }
  throw std::logic_error("discrete norm: unknown kind");
}

}  // namespace dwlab
