// Finite-dimensional realizations of the abstract operators: divergence-form
// elliptic matrices, diagonal damping, spectral calculus f(A), the conjugated
// operator B^{-1/2} A B^{-1/2}, and the discrete norms of all function spaces
// used by the experiments.
#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "dwlab/fields.hpp"
#include "dwlab/grid.hpp"

namespace dwlab {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors; // orthonormal columns
};

// Dense real symmetric operator with grid metadata and a lazily computed,
// cached spectral decomposition. Immutable after construction; the cache is
// filled once behind a single-writer guard and read lock-free afterwards.
class SelfAdjointOperator {
 public:
  SelfAdjointOperator(Eigen::MatrixXd matrix, Grid grid);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Grid& grid() const { return grid_; }
  Eigen::Index size() const { return matrix_.rows(); }

  // Cached eigendecomposition (ascending eigenvalues, orthonormal columns).
  const SpectralDecomposition& spectrum() const;
  bool spectrum_cached() const;

  // Smallest eigenvalue above the numerical-kernel threshold.
  double smallest_positive_eigenvalue() const;
  // Horizon 0.1 / lambda_1 beyond which the discrete spectral gap forces
  // exponential decay and power-law fits are invalid.
  double gap_time() const;

 private:
  Eigen::MatrixXd matrix_;
  Grid grid_;
  mutable std::shared_ptr<std::mutex> guard_;
  mutable std::shared_ptr<const SpectralDecomposition> cache_;
};

// Positive diagonal multiplication operator (the damping).
class DampingOperator {
 public:
  DampingOperator(Eigen::VectorXd diagonal, double lower_bound);
  static DampingOperator from_field(const Grid& grid, const CoefficientField& a);
  static DampingOperator identity(Eigen::Index n);
  // Escape hatch for the sign-indefinite perturbation a - eps*b: skips the
  // nonnegativity check and sets the floor to zero.
  static DampingOperator indefinite(Eigen::VectorXd diagonal);

  const Eigen::VectorXd& diagonal() const { return diag_; }
  double lower_bound() const { return lower_bound_; }
  bool strictly_positive() const { return lower_bound_ > 0.0; }
  bool sign_indefinite() const { return sign_indefinite_; }
  Eigen::Index size() const { return diag_.size(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_sqrt(const Eigen::VectorXd& v) const;
  // Requires every diagonal entry strictly positive.
  Eigen::VectorXd apply_inv(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_inv_sqrt(const Eigen::VectorXd& v) const;

 private:
  struct IndefiniteTag {};
  DampingOperator(Eigen::VectorXd diagonal, IndefiniteTag);

  Eigen::VectorXd diag_;
  double lower_bound_ = 0.0;
  bool sign_indefinite_ = false;
};

// Symmetric flux-form stencil for -sum_i d_i g(x) d_i on the grid, with the
// coefficient sampled at cell faces so the matrix is exactly symmetric.
// Rejects non-elliptic coefficients with the violating sample's location.
SelfAdjointOperator build_divergence_form(const Grid& grid, const CoefficientField& g);

// Eigendecomposition of a symmetric operator (also cached on the operator).
// Errors if the matrix violates the symmetry tolerance.
SpectralDecomposition spectral_decompose(const SelfAdjointOperator& op);

// Q f(Lambda) Q^T. Errors if f is non-finite on an eigenvalue, naming it.
Eigen::MatrixXd apply_spectral_function(const SelfAdjointOperator& op,
                                        const std::function<double(double)>& f);

// B^{-1/2} A B^{-1/2}, symmetrized after assembly to kill roundoff asymmetry.
// Requires strictly positive damping.
SelfAdjointOperator build_tilde_a(const SelfAdjointOperator& a, const DampingOperator& b);

enum class NormKind { L1, L2, Linf, H1, energy0, energyH };

// Cell-measure-weighted discrete norms. L^p norms need a grid-sized vector;
// energy norms take the stacked state (u, v) of length 2n; H1 and energy
// norms need the operator A.
double discrete_norm(const Eigen::VectorXd& v, NormKind which, const Grid& grid,
                     const SelfAdjointOperator* a = nullptr);

}  // namespace dwlab
