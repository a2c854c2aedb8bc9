#include <doctest.h>

#include <cmath>

#include "sqv/feynman.hpp"
#include "sqv/langevin.hpp"

using namespace sqv;

namespace {

Matrix laplacian2() {
  Matrix m(2, 2);
  m << 2, -1, -1, 2;
  return m;
}

Theory quartic0d(double g) {
  return Theory{Operator::build(Matrix::Identity(1, 1)), {VertexKernel::local(4, g)}, {0, 0}};
}

}  // namespace

TEST_CASE("drift values") {
  Theory free_theory{Operator::build(laplacian2()), {}, {0, 1}};
  Vector phi(2);
  phi << 0.3, -0.4;
  Vector d = drift(free_theory, phi);
  Vector expect = -(laplacian2() * phi);
  CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-15);

  Theory quartic = quartic0d(0.7);
  Vector one(1);
  one << 1.0;
  CHECK(drift(quartic, one)(0) == doctest::Approx(-1.0 - 0.7).epsilon(1e-15));

  std::vector<double> tensor(8, 0.0);
  tensor[0] = 0.3;  // V(0,0,0)
  Theory dense{Operator::build(laplacian2()), {VertexKernel::dense(3, 2, tensor)}, {0}};
  CHECK(drift(dense, Vector::Zero(2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense drift equals the numerical gradient of the interaction") {
  std::vector<double> tensor(8);
  auto at = [&](int a, int b, int c) -> double& { return tensor[4 * a + 2 * b + c]; };
  at(0, 0, 0) = 0.2;
  at(0, 0, 1) = at(0, 1, 0) = at(1, 0, 0) = 0.1;
  at(0, 1, 1) = at(1, 1, 0) = at(1, 0, 1) = -0.05;
  at(1, 1, 1) = 0.15;
  Theory t{Operator::build(laplacian2()), {VertexKernel::dense(3, 2, tensor)}, {0}};
  const auto& kernel = t.kernels[0];

  auto potential = [&](const Vector& phi) {
    double v = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          v += kernel.value({a, b, c}, 2) * phi(a) * phi(b) * phi(c);
    return v / 3.0;  // 1/(q+1) normalization
  };

  Vector phi(2);
  phi << 0.37, -0.61;
  Vector d = drift(t, phi);
  const double h = 1e-6;
  for (int x = 0; x < 2; ++x) {
    Vector up = phi, dn = phi;
    up(x) += h;
    dn(x) -= h;
    double grad_v = (potential(up) - potential(dn)) / (2 * h);
    double expected = -(laplacian2() * phi)(x) - grad_v;
    CHECK(d(x) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("simulation is deterministic in the seed") {
  Theory t = quartic0d(0.3);
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.seed = 99;
  LangevinSimulator a(t, cfg), b(t, cfg);
  for (int i = 0; i < 200; ++i) {
    a.step();
    b.step();
    CHECK(a.state()(0) == b.state()(0));
  }

  SimConfig other = cfg;
  other.seed = 100;
  LangevinSimulator c(t, other);
  c.step();
  a.step();
  CHECK(a.state()(0) != c.state()(0));
}

TEST_CASE("noise stream looks standard normal") {
  NoiseStream noise(1234);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double z = noise.normal(i, 0);
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sumsq / n - 1.0) < 0.02);
}

TEST_CASE("divergence is detected") {
  Theory t = quartic0d(-2.0);  // inverted quartic blows up
  SimConfig cfg;
  cfg.step = 0.5;
  cfg.seed = 5;
  Vector init(1);
  init << 3.0;
  cfg.initial = init;
  LangevinSimulator sim(t, cfg);
  bool diverged = false;
  try {
    for (int i = 0; i < 10000; ++i) sim.step();
  } catch (const Error& e) {
    diverged = e.code() == ErrorCode::Diverged;
  }
  CHECK(diverged);
}

TEST_CASE("free theory equilibrates to the covariance") {
  Theory t{Operator::build(laplacian2()), {}, {0, 1}};
  Matrix c = t.op.covariance();
  SimConfig cfg;
  cfg.step = 5e-3;
  cfg.burn_in = 20000;
  cfg.samples = 60000;
  cfg.thin = 4;
  cfg.seed = 2024;
  auto est = equilibrium_moments(t, cfg, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(std::abs(est[0].value - c(0, 0)) < 3.0 * est[0].std_error);
  CHECK(std::abs(est[1].value - c(0, 1)) < 3.0 * est[1].std_error);
  CHECK(std::abs(est[2].value - c(1, 1)) < 3.0 * est[2].std_error);
  for (const auto& e : est) {
    CHECK(e.std_error > 0.0);
    CHECK(e.n_effective <= cfg.samples);
    CHECK(e.n_effective > 10.0);
  }
}

TEST_CASE("statistical error shrinks with the square-root law") {
  Theory t = quartic0d(0.2);
  SimConfig small;
  small.step = 5e-3;
  small.burn_in = 5000;
  small.samples = 20000;
  small.thin = 4;
  small.seed = 31;
  SimConfig big = small;
  big.samples = 80000;
  double se_small = equilibrium_moments(t, small, {{0, 0}})[0].std_error;
  double se_big = equilibrium_moments(t, big, {{0, 0}})[0].std_error;
  double ratio = se_small / se_big;  // expect about 2
  CHECK(ratio > 1.0);
  CHECK(ratio < 4.0);
}

TEST_CASE("odd moments vanish in an even theory") {
  Theory t = quartic0d(0.4);
  SimConfig cfg;
  cfg.step = 5e-3;
  cfg.burn_in = 5000;
  cfg.samples = 40000;
  cfg.seed = 77;
  auto est = equilibrium_moments(t, cfg, {{0}, {0, 0, 0}});
  CHECK(std::abs(est[0].value) < 3.0 * est[0].std_error);
  CHECK(std::abs(est[1].value) < 3.0 * est[1].std_error);
}

TEST_CASE("step halving with matched total time agrees") {
  Theory t = quartic0d(0.3);
  SimConfig coarse;
  coarse.step = 8e-3;
  coarse.burn_in = 8000;
  coarse.samples = 30000;
  coarse.thin = 4;
  coarse.seed = 11;
  SimConfig fine = coarse;
  fine.step = 4e-3;
  fine.burn_in *= 2;
  fine.thin *= 2;
  fine.seed = 12;
  auto a = equilibrium_moments(t, coarse, {{0, 0}})[0];
  auto b = equilibrium_moments(t, fine, {{0, 0}})[0];
  double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  CHECK(std::abs(a.value - b.value) < 3.0 * combined + 5.0 * coarse.step);
}

TEST_CASE("equilibrium moments match the quadrature oracle") {
  Theory t = quartic0d(0.2);
  double oracle = quadrature_moment_oracle(t, {0, 0});
  SimConfig cfg;
  cfg.step = 2e-3;
  cfg.burn_in = 50000;
  cfg.samples = 100000;
  cfg.thin = 25;
  cfg.seed = 4242;
  auto est = equilibrium_moments(t, cfg, {{0, 0}})[0];
  CHECK(std::abs(est.value - oracle) < 3.0 * est.std_error + 5.0 * cfg.step);
}

TEST_CASE("two-site quartic cross moment matches the oracle") {
  Theory t{Operator::build(laplacian2()), {VertexKernel::local(4, 0.1)}, {0, 1}};
  double oracle = quadrature_moment_oracle(t, {0, 1});
  SimConfig cfg;
  cfg.step = 2e-3;
  cfg.burn_in = 50000;
  cfg.samples = 100000;
  cfg.thin = 20;
  cfg.seed = 555;
  auto est = equilibrium_moments(t, cfg, {{0, 1}})[0];
  CHECK(std::abs(est.value - oracle) < 3.0 * est.std_error + 5.0 * cfg.step);
}

TEST_CASE("pooled chains are reproducible and tighter") {
  Theory t = quartic0d(0.2);
  SimConfig cfg;
  cfg.step = 5e-3;
  cfg.burn_in = 4000;
  cfg.samples = 20000;
  cfg.thin = 2;
  cfg.seed = 900;
  auto once = equilibrium_moments_pooled(t, cfg, {{0, 0}}, 4, 2);
  auto again = equilibrium_moments_pooled(t, cfg, {{0, 0}}, 4, 1);
  CHECK(once[0].value == again[0].value);  // bit-identical regardless of jobs
  auto single = equilibrium_moments(t, cfg, {{0, 0}});
  CHECK(once[0].std_error < single[0].std_error);
}
