#include "sqv/operators.hpp"

#include <cmath>
#include <string>

namespace sqv {

namespace {
constexpr double kSymmetryTol = 1e-12;
constexpr double kPositivityTol = 1e-12;
}  // namespace

Operator Operator::build(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    fail(ErrorCode::NotSymmetric, "operator matrix must be square and non-empty");
  if (!matrix.allFinite())
    fail(ErrorCode::NotSymmetric, "operator matrix has non-finite entries");

  const double scale = matrix.cwiseAbs().maxCoeff();
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * std::max(scale, 1.0))
    fail(ErrorCode::NotSymmetric,
         "operator matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");

  Matrix sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::NotPositiveDefinite, "eigen-decomposition failed");

  Vector evals = solver.eigenvalues();  // ascending
  const double lambda_max = evals(evals.size() - 1);
  if (evals(0) <= kPositivityTol * std::max(lambda_max, 0.0))
    fail(ErrorCode::NotPositiveDefinite,
         "smallest eigenvalue " + std::to_string(evals(0)) +
             " is a zero mode or negative; the dynamic and the inverse are ill-defined");

  return Operator(std::move(sym), std::move(evals), solver.eigenvectors());
}

Matrix Operator::heat_kernel(double t) const {
  if (t < 0.0) fail(ErrorCode::NegativeTime, "heat kernel is a forward-only semigroup, got t < 0");
  if (t == 0.0) return Matrix::Identity(dim(), dim());
  Vector damp = (-t * eigenvalues_.array()).exp();
  return eigenvectors_ * damp.asDiagonal() * eigenvectors_.transpose();
}

Matrix Operator::covariance() const {
  Vector inv = eigenvalues_.array().inverse();
  return eigenvectors_ * inv.asDiagonal() * eigenvectors_.transpose();
}

Matrix Operator::noise_propagator(double t, double s) const {
  const double gap = std::abs(t - s);
  Vector w = (-gap * eigenvalues_.array()).exp() / eigenvalues_.array();
  return eigenvectors_ * w.asDiagonal() * eigenvectors_.transpose();
}

}  // namespace sqv
