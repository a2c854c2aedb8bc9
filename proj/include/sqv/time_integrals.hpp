#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sqv/errors.hpp"
#include "sqv/rational.hpp"

namespace sqv {

/// Rooted partial order on p items (0..p-1). parent[i] == -1 means the item
/// hangs directly under the shared top element; otherwise parent[i] is an
/// item that must come earlier in any compatible total order.
struct TreePoset {
  std::vector<int> parent;

  int size() const { return static_cast<int>(parent.size()); }
};

/// All total orders compatible with the poset (each as a permutation of
/// 0..p-1, earliest first). Refuses p > max_items.
std::vector<std::vector<int>> linear_extensions(const TreePoset& poset, int max_items = 8);

/// Number of linear extensions, exact. For a rooted forest this is
/// p! / prod_i |subtree(i)|.
std::int64_t count_linear_extensions(const TreePoset& poset);

/// One decaying edge in a time diagram: it spans the interval between two
/// slots of the descending time chain (slot 0 is the shared top time,
/// slots 1..p are the ordered interior times) and decays at `rate`.
struct RatedSpan {
  int upper = 0;  ///< slot of the later endpoint
  int lower = 0;  ///< slot of the earlier endpoint, >= upper
  double rate = 0.0;
};

/// Value of the nested exponential integral for one total order, written
/// in gap variables: the k-th gap (between slots k-1 and k) contributes
/// 1 / (sum of rates of the spans crossing it).
struct GapProduct {
  std::vector<double> gap_rates;  ///< total decay rate per gap, all > 0
  double value = 1.0;             ///< product of the reciprocals
};

/// gap_crossings[k] lists the rates crossing gap k+1. Manifestly
/// independent of the top time. Throws EmptyGap if a gap is crossed by
/// nothing (the integral would diverge; valid forest posets never produce
/// this) and NonPositiveRate on rate <= 0.
GapProduct gap_product(const std::vector<std::vector<double>>& gap_crossings);
double integrate_linear_extension(const std::vector<std::vector<double>>& gap_crossings);

/// Gap rates for a given total order of interior items. `order` maps chain
/// position (0-based) to item; spans refer to items by slot already.
std::vector<std::vector<double>> gap_rates_for_order(int items, const std::vector<RatedSpan>& spans);

/// Full closed-form time factor of a decorated poset: sum over linear
/// extensions of the gap products. Span endpoints are given per item
/// (-1 = top); the per-extension slot layout is derived internally.
struct PosetSpan {
  int upper_item = -1;  ///< -1 for the shared top time
  int lower_item = -1;
  double rate = 0.0;
};
double time_factor_closed_form(const TreePoset& poset, const std::vector<PosetSpan>& spans);

/// Independent route for the same quantity: truncated nested numerical
/// integration over [t_top - horizon, t_top]^p of
///   prod_spans exp(-rate * |t_upper - t_lower|)
/// restricted by the poset order (parents later than children). Used by
/// cross-checks; accuracy ~1e-8 relative for the horizons used here.
double time_factor_quadrature(const TreePoset& poset, const std::vector<PosetSpan>& spans,
                              double t_top, double horizon);

/// Nested adaptive integration of an arbitrary integrand over
/// { t_top - horizon <= t_i <= t_top, t_parent >= t_child }. The integrand
/// may have kinks where two times coincide (from |t_i - t_j| factors);
/// each one-dimensional pass splits at the already-fixed times.
double nested_poset_integral(const TreePoset& poset, double t_top, double horizon, double tol,
                             const std::function<double(const std::vector<double>&)>& integrand);

/// Volume of { 0 <= t_i <= t, t_parent >= t_child } for a rooted tree order,
/// as an exact rational multiple of t^p. Equals L(poset)/p! where L counts
/// linear extensions; for a chain this is t^p/p!.
Rational simplex_volume_coefficient(const TreePoset& poset);
double simplex_integral_bounded(const TreePoset& poset, double t);

}  // namespace sqv
