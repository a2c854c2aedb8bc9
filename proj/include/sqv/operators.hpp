#pragma once

#include <Eigen/Dense>

#include "sqv/errors.hpp"

namespace sqv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric positive-definite quadratic form with a cached
/// eigen-decomposition. All kernels derived from it (semigroup, inverse,
/// equilibrium two-point function) are evaluated in the eigenbasis, so
/// they stay mutually consistent to rounding.
///
/// Immutable after construction; safe to share across threads.
class Operator {
public:
  /// Validates symmetry and positivity, then decomposes.
  /// Throws NotSymmetric / NotPositiveDefinite.
  static Operator build(const Matrix& matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  /// Eigenvalues sorted ascending, all strictly positive.
  const Vector& eigenvalues() const { return eigenvalues_; }
  /// Orthogonal matrix whose columns are the eigenvectors.
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double min_eigenvalue() const { return eigenvalues_(0); }

  /// exp(-t A) for t >= 0. Identity at t = 0. Throws NegativeTime.
  Matrix heat_kernel(double t) const;

  /// A^{-1} via the eigenbasis.
  Matrix covariance() const;

  /// Equilibrium two-point kernel exp(-|t-s| A) A^{-1}.
  /// Symmetric in (t, s) by construction.
  Matrix noise_propagator(double t, double s) const;

private:
  Operator(Matrix m, Vector evals, Matrix evecs)
      : matrix_(std::move(m)), eigenvalues_(std::move(evals)), eigenvectors_(std::move(evecs)) {}

  Matrix matrix_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

}  // namespace sqv
