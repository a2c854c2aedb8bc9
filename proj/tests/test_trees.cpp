#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "sqv/trees.hpp"
#include "support/reference.hpp"

using namespace sqv;

TEST_CASE("recursive tree counts are (p-1)!") {
  std::int64_t factorial = 1;
  for (int p = 1; p <= 7; ++p) {
    if (p >= 2) factorial *= p - 1;
    auto trees = enumerate_recursive_trees(p);
    CHECK(static_cast<std::int64_t>(trees.size()) == factorial);
    // no duplicates: parent arrays are distinct by construction of the sweep
    std::set<std::vector<int>> uniq;
    for (const auto& t : trees) uniq.insert(t.parent);
    CHECK(uniq.size() == trees.size());
  }
}

TEST_CASE("plane tree counts are Catalan") {
  std::vector<std::int64_t> expect{1, 1, 2, 5, 14, 42, 132, 429, 1430};
  for (int e = 0; e <= 8; ++e) {
    CHECK(catalan(e) == expect[e]);
    CHECK(static_cast<std::int64_t>(enumerate_plane_trees(e).size()) == expect[e]);
  }
}

TEST_CASE("q-ary tree counts are Fuss-Catalan") {
  for (int q = 2; q <= 4; ++q) {
    CHECK(fuss_catalan(q, 2) == q);
    for (int k = 0; k <= 4; ++k) {
      auto trees = enumerate_qary_trees(q, k);
      CHECK(static_cast<std::int64_t>(trees.size()) == fuss_catalan(q, k));
      for (const auto& t : trees) {
        int internal = 0;
        for (const auto& ch : t.children) {
          CHECK((ch.empty() || static_cast<int>(ch.size()) == q));
          if (static_cast<int>(ch.size()) == q) ++internal;
        }
        CHECK(internal == k);
      }
    }
  }
  // ternary sequence quoted in the writeup
  CHECK(fuss_catalan(3, 0) == 1);
  CHECK(fuss_catalan(3, 1) == 1);
  CHECK(fuss_catalan(3, 2) == 3);
  CHECK(fuss_catalan(3, 3) == 12);
  // binary case from the general small-k formula q(3q-1)/2
  CHECK(fuss_catalan(2, 3) == 5);
}

TEST_CASE("alpha multiplicities for the small shape gallery") {
  CHECK(alpha_multiplicity({-1}) == 1);
  CHECK(alpha_multiplicity({-1, 0}) == 1);
  CHECK(alpha_multiplicity({-1, 0, 1}) == 1);
  CHECK(alpha_multiplicity({-1, 0, 0}) == 1);
  CHECK(alpha_multiplicity({-1, 0, 1, 2}) == 1);
  CHECK(alpha_multiplicity({-1, 0, 1, 1}) == 1);
  CHECK(alpha_multiplicity({-1, 0, 1, 0}) == 3);
  CHECK(alpha_multiplicity({-1, 0, 0, 0}) == 1);
}

TEST_CASE("alpha multiplicities partition the recursive trees") {
  std::int64_t factorial = 1;
  for (int p = 1; p <= 7; ++p) {
    if (p >= 2) factorial *= p - 1;
    std::int64_t total = 0;
    for (const auto& cls : unlabeled_rooted_trees(p)) total += cls.alpha;
    CHECK(total == factorial);
  }
}

TEST_CASE("plane embedding counts") {
  CHECK(plane_embedding_count({-1, 0, 0}) == 1);     // two identical leaf children
  CHECK(plane_embedding_count({-1, 0, 1, 0}) == 2);  // leaf child vs chain child
  CHECK(plane_embedding_count({-1, 0, 0, 0}) == 1);
}

TEST_CASE("alpha identity against plane trees and simplex volumes") {
  // chain of three: 1/3! = 1 * (1/6) / 1
  CHECK(consistency_alpha_identity({-1, 0, 1}));
  // branch pair: 1/3! vs N=1, volume 1/3, (d-1)! = 2
  CHECK(consistency_alpha_identity({-1, 0, 0}));
  for (int p = 1; p <= 5; ++p)
    for (const auto& cls : unlabeled_rooted_trees(p)) CHECK(consistency_alpha_identity(cls.parent));
}

TEST_CASE("tree series: constant right-hand side") {
  TaylorFunction constant{{1.0}};
  for (auto method : {TreeSeriesMethod::RecursiveTrees, TreeSeriesMethod::UnlabeledTrees,
                      TreeSeriesMethod::PlaneTrees}) {
    CHECK(ode_tree_series(constant, 0.7, 1, method) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(ode_tree_series(constant, 0.7, 6, method) == doctest::Approx(0.7).epsilon(1e-15));
  }
}

TEST_CASE("tree series: exponential flow") {
  TaylorFunction f{{1.0, 1.0}};  // 1 + phi, solution e^t - 1
  double partial = 0.0, factorial = 1.0;
  for (int k = 1; k <= 10; ++k) {
    factorial *= k;
    partial += 1.0 / factorial;
  }
  for (auto method : {TreeSeriesMethod::RecursiveTrees, TreeSeriesMethod::UnlabeledTrees,
                      TreeSeriesMethod::PlaneTrees})
    CHECK(ode_tree_series(f, 1.0, 10, method) == doctest::Approx(partial).epsilon(1e-13));
}

TEST_CASE("tree series: tangent coefficients") {
  TaylorFunction f{{1.0, 0.0, 1.0}};  // 1 + phi^2, solution tan(t)
  CHECK(ode_tree_series_order(f, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ode_tree_series_order(f, 1.0, 2) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(ode_tree_series_order(f, 1.0, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(ode_tree_series_order(f, 1.0, 5) == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("tree series: three evaluators agree on a random corpus") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> time(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    int degree = 1 + static_cast<int>(rng() % 4);
    TaylorFunction f;
    for (int q = 0; q <= degree; ++q) f.coeffs.push_back(coeff(rng));
    double t = time(rng);
    int order = 1 + static_cast<int>(rng() % 8);
    double a = ode_tree_series(f, t, order, TreeSeriesMethod::RecursiveTrees);
    double b = ode_tree_series(f, t, order, TreeSeriesMethod::UnlabeledTrees);
    double c = ode_tree_series(f, t, order, TreeSeriesMethod::PlaneTrees);
    double scale = std::max({1.0, std::abs(a)});
    CHECK(std::abs(a - b) < 1e-12 * scale);
    CHECK(std::abs(a - c) < 1e-12 * scale);
  }
}

TEST_CASE("tree series vs adaptive integrator: truncation-order bound") {
  // remainder constant checked over this fixed corpus with margin
  const double kBound = 60.0;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> time(0.05, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    int degree = 1 + static_cast<int>(rng() % 4);
    TaylorFunction f;
    for (int q = 0; q <= degree; ++q) f.coeffs.push_back(coeff(rng));
    double t = time(rng);
    int order = 2 + static_cast<int>(rng() % 7);
    double series = ode_tree_series(f, t, order, TreeSeriesMethod::RecursiveTrees);
    double reference = testing::ode_reference(f, t);
    CHECK(std::abs(series - reference) <= kBound * std::pow(t, order + 1));
  }

  TaylorFunction expf{{1.0, 1.0}};
  CHECK(testing::ode_reference(expf, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}
