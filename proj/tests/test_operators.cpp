#include <doctest.h>

#include <random>

#include "sqv/operators.hpp"
#include "support/reference.hpp"

using namespace sqv;

namespace {

Matrix mat1(double a) {
  Matrix m(1, 1);
  m << a;
  return m;
}

Matrix laplacian2() {
  Matrix m(2, 2);
  m << 2, -1, -1, 2;
  return m;
}

}  // namespace

TEST_CASE("spd build: scalar and identity") {
  Operator op = Operator::build(mat1(2.0));
  CHECK(op.dim() == 1);
  CHECK(op.eigenvalues()(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(op.eigenvectors()(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));

  Operator id = Operator::build(Matrix::Identity(2, 2));
  CHECK(id.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spd build: 2x2 with hand eigensolve") {
  Operator op = Operator::build(laplacian2());
  CHECK(op.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(op.eigenvalues()(1) == doctest::Approx(3.0).epsilon(1e-13));
  // eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2 up to sign
  double s = 1.0 / std::sqrt(2.0);
  Vector v0 = op.eigenvectors().col(0);
  Vector v1 = op.eigenvectors().col(1);
  CHECK(std::abs(std::abs(v0(0)) - s) < 1e-13);
  CHECK(v0(0) * v0(1) > 0);  // same sign components
  CHECK(v1(0) * v1(1) < 0);

  // reconstruction
  Matrix rec = op.eigenvectors() * op.eigenvalues().asDiagonal() * op.eigenvectors().transpose();
  CHECK((rec - laplacian2()).cwiseAbs().maxCoeff() < 1e-10 * 2.0);
}

TEST_CASE("spd build rejections") {
  Matrix asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(Operator::build(asym), Error);

  Matrix indef(2, 2);
  indef << 1, 2, 2, 1;  // eigenvalues -1, 3
  CHECK_THROWS_AS(Operator::build(indef), Error);

  Matrix zero_mode(2, 2);
  zero_mode << 1, -1, -1, 1;  // eigenvalues 0, 2
  try {
    Operator::build(zero_mode);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("heat kernel basics") {
  Operator op = Operator::build((Matrix(2, 2) << 1, 0, 0, 2).finished());
  CHECK((op.heat_kernel(0.0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  Operator scalar = Operator::build(mat1(1.7));
  CHECK(scalar.heat_kernel(0.9)(0, 0) == doctest::Approx(std::exp(-0.9 * 1.7)).epsilon(1e-14));

  Matrix h = op.heat_kernel(std::log(2.0));
  CHECK(h(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(h(1, 1) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(h(0, 1) == doctest::Approx(0.0).epsilon(1e-13));

  CHECK_THROWS_AS(op.heat_kernel(-0.1), Error);
}

TEST_CASE("heat kernel semigroup property") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + trial % 3;
    Operator op = Operator::build(testing::random_spd(n, rng));
    double s = uni(rng), t = uni(rng);
    Matrix lhs = op.heat_kernel(s + t);
    Matrix rhs = op.heat_kernel(s) * op.heat_kernel(t);
    double scale = std::max(lhs.cwiseAbs().maxCoeff(), 1e-30);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() / scale < 1e-10);
  }
}

TEST_CASE("covariance: closed values and inverse identity") {
  CHECK(Operator::build(mat1(2.0)).covariance()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK((Operator::build(Matrix::Identity(2, 2)).covariance() - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  Operator op = Operator::build(laplacian2());
  Matrix c = op.covariance();
  CHECK(c(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(c(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Operator r = Operator::build(testing::random_spd(3, rng));
    Matrix prod = r.matrix() * r.covariance();
    CHECK((prod - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("covariance agrees with the heat-kernel time integral") {
  std::mt19937 rng(13);
  Operator op = Operator::build(testing::random_spd(2, rng));
  double horizon = 40.0 / op.min_eigenvalue();
  Matrix quad = testing::simpson_matrix([&](double t) { return op.heat_kernel(t); }, horizon, 4000);
  Matrix c = op.covariance();
  CHECK((quad - c).norm() / c.norm() < 1e-8);
}

TEST_CASE("noise propagator") {
  Operator op = Operator::build(laplacian2());
  Matrix equal_time = op.noise_propagator(1.3, 1.3);
  CHECK((equal_time - op.covariance()).cwiseAbs().maxCoeff() < 1e-14);

  // symmetric in (t, s) exactly
  CHECK((op.noise_propagator(0.4, 2.0) - op.noise_propagator(2.0, 0.4)).cwiseAbs().maxCoeff() ==
        0.0);

  CHECK(Operator::build(mat1(1.0)).noise_propagator(1.0, 0.0)(0, 0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  Operator diag = Operator::build((Matrix(2, 2) << 1, 0, 0, 2).finished());
  Matrix w = diag.noise_propagator(0.0, std::log(2.0));
  CHECK(w(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(w(1, 1) == doctest::Approx(0.125).epsilon(1e-13));

  // product route: exp(-|dt| A) * A^{-1} assembled from separate pieces
  Matrix product = diag.heat_kernel(std::log(2.0)) * diag.covariance();
  CHECK((w - product).cwiseAbs().maxCoeff() < 1e-12);
}
