#include <doctest.h>

#include <random>

#include "sqv/time_integrals.hpp"

using namespace sqv;

TEST_CASE("gap products") {
  CHECK(integrate_linear_extension({{2.0}}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate_linear_extension({{3.0}, {3.0}}) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  // two edges of rate 1 crossing one gap
  CHECK(integrate_linear_extension({{1.0, 1.0}}) == doctest::Approx(0.5).epsilon(1e-15));

  GapProduct gp = gap_product({{1.0, 2.0}, {0.5}});
  CHECK(gp.gap_rates == std::vector<double>{3.0, 0.5});
  CHECK(gp.value == doctest::Approx(1.0 / 1.5).epsilon(1e-15));

  CHECK_THROWS_AS(integrate_linear_extension({{1.0}, {}}), Error);
  CHECK_THROWS_AS(integrate_linear_extension({{1.0, -2.0}}), Error);
  try {
    integrate_linear_extension({{1.0}, {}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGap);
  }
}

TEST_CASE("linear extension enumeration and counts") {
  // chain 0 <- 1 <- 2
  TreePoset chain{{-1, 0, 1}};
  CHECK(linear_extensions(chain).size() == 1);
  CHECK(count_linear_extensions(chain) == 1);

  // one root with two incomparable children
  TreePoset vee{{-1, 0, 0}};
  CHECK(linear_extensions(vee).size() == 2);
  CHECK(count_linear_extensions(vee) == 2);

  // two separate items under the top
  TreePoset pair{{-1, -1}};
  CHECK(linear_extensions(pair).size() == 2);

  // item 0 on top, chain 0 <- 1 <- 2 plus the extra child 0 <- 3
  TreePoset t{{-1, 0, 1, 0}};
  CHECK(count_linear_extensions(t) == 3);
  CHECK(linear_extensions(t).size() == 3);

  TreePoset big{{-1, 0, 1, 2, 3, 4, 5, 6, 7}};
  CHECK_THROWS_AS(linear_extensions(big), Error);
}

TEST_CASE("linear extension count matches enumeration on random forests") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int p = 1 + static_cast<int>(rng() % 6);
    TreePoset poset;
    poset.parent.resize(p);
    for (int i = 0; i < p; ++i) {
      // parents only among earlier items keeps it acyclic
      int choices = i + 1;  // -1 or 0..i-1
      int pick = static_cast<int>(rng() % choices);
      poset.parent[i] = pick == 0 ? -1 : pick - 1;
    }
    CHECK(count_linear_extensions(poset) ==
          static_cast<std::int64_t>(linear_extensions(poset).size()));
  }
}

TEST_CASE("simplex volume table") {
  auto coeff = [](const std::vector<int>& parent) {
    return simplex_volume_coefficient(TreePoset{parent});
  };
  CHECK(coeff({-1}) == Rational(1));
  CHECK(coeff({-1, 0}) == Rational(1, 2));
  CHECK(coeff({-1, 0, 1}) == Rational(1, 6));
  CHECK(coeff({-1, 0, 0}) == Rational(1, 3));
  CHECK(coeff({-1, 0, 1, 2}) == Rational(1, 24));
  CHECK(coeff({-1, 0, 1, 1}) == Rational(1, 12));
  CHECK(coeff({-1, 0, 1, 0}) == Rational(1, 8));
  CHECK(coeff({-1, 0, 0, 0}) == Rational(1, 4));

  CHECK(simplex_integral_bounded(TreePoset{{-1, 0, 1}}, 2.0) ==
        doctest::Approx(8.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(simplex_integral_bounded(TreePoset{{-1}}, 0.0), Error);
}

namespace {

// tree spans for every item plus a couple of cross spans
std::vector<PosetSpan> decorated_spans(const TreePoset& poset, std::mt19937& rng) {
  std::uniform_real_distribution<double> rate(0.6, 2.0);
  std::vector<PosetSpan> spans;
  for (int i = 0; i < poset.size(); ++i) spans.push_back({poset.parent[i], i, rate(rng)});
  for (int extra = 0; extra < 2; ++extra) {
    int a = static_cast<int>(rng() % (poset.size() + 1)) - 1;
    int b = static_cast<int>(rng() % (poset.size() + 1)) - 1;
    spans.push_back({a, b, rate(rng)});
  }
  return spans;
}

}  // namespace

TEST_CASE("closed-form time factor vs nested quadrature, every shape up to four items") {
  std::mt19937 rng(17);
  std::vector<std::vector<int>> shapes = {
      // one and two items
      {-1},
      {-1, 0},
      {-1, -1},
      // three items
      {-1, 0, 1},
      {-1, 0, 0},
      {-1, 0, -1},
      {-1, -1, -1},
      // four items: the four tree shapes, then the forest splits
      {-1, 0, 1, 2},
      {-1, 0, 1, 1},
      {-1, 0, 1, 0},
      {-1, 0, 0, 0},
      {-1, 0, 1, -1},
      {-1, 0, 0, -1},
      {-1, 0, -1, 2},
      {-1, 0, -1, -1},
      {-1, -1, -1, -1},
  };
  for (const auto& parent : shapes) {
    TreePoset poset{parent};
    auto spans = decorated_spans(poset, rng);
    double closed = time_factor_closed_form(poset, spans);
    double quad = time_factor_quadrature(poset, spans, 0.0, 35.0);
    CHECK(std::abs(closed - quad) / std::abs(closed) < 1e-6);
  }
}

TEST_CASE("time factor is invariant under shifting the top time") {
  std::mt19937 rng(23);
  TreePoset poset{{-1, 0}};
  auto spans = decorated_spans(poset, rng);
  double at0 = time_factor_quadrature(poset, spans, 0.0, 35.0);
  double at2 = time_factor_quadrature(poset, spans, 2.0, 35.0);
  CHECK(std::abs(at0 - at2) / std::abs(at0) < 1e-6);
  CHECK(std::abs(at0 - time_factor_closed_form(poset, spans)) / std::abs(at0) < 1e-6);
}
