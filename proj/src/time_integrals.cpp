#include "sqv/time_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "sqv/detail/gauss.hpp"

namespace sqv {

namespace {

void check_poset(const TreePoset& poset) {
  const int p = poset.size();
  for (int i = 0; i < p; ++i) {
    int par = poset.parent[i];
    if (par < -1 || par >= p || par == i)
      fail(ErrorCode::BadPermutation, "malformed poset parent entry");
  }
  // reject cycles: follow parents, must reach the top within p hops
  for (int i = 0; i < p; ++i) {
    int v = i;
    for (int hops = 0; v != -1; ++hops) {
      if (hops > p) fail(ErrorCode::BadPermutation, "poset parent links contain a cycle");
      v = poset.parent[v];
    }
  }
}

}  // namespace

std::vector<std::vector<int>> linear_extensions(const TreePoset& poset, int max_items) {
  check_poset(poset);
  const int p = poset.size();
  if (p > max_items)
    fail(ErrorCode::DartCapExceeded,
         "refusing to enumerate linear extensions of " + std::to_string(p) + " items");

  std::vector<std::vector<int>> out;
  std::vector<int> order;
  std::vector<bool> placed(p, false);
  order.reserve(p);

  std::function<void()> rec = [&]() {
    if (static_cast<int>(order.size()) == p) {
      out.push_back(order);
      return;
    }
    for (int i = 0; i < p; ++i) {
      if (placed[i]) continue;
      int par = poset.parent[i];
      if (par != -1 && !placed[par]) continue;
      placed[i] = true;
      order.push_back(i);
      rec();
      order.pop_back();
      placed[i] = false;
    }
  };
  rec();
  return out;
}

std::int64_t count_linear_extensions(const TreePoset& poset) {
  check_poset(poset);
  const int p = poset.size();
  std::vector<std::int64_t> subtree(p, 1);
  // children accumulate into parents; process leaves inward
  std::vector<int> degree(p, 0);
  for (int i = 0; i < p; ++i)
    if (poset.parent[i] != -1) ++degree[poset.parent[i]];
  std::vector<int> stack;
  for (int i = 0; i < p; ++i)
    if (degree[i] == 0) stack.push_back(i);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    int par = poset.parent[v];
    if (par != -1) {
      subtree[par] += subtree[v];
      if (--degree[par] == 0) stack.push_back(par);
    }
  }
  Rational r(1);
  for (int k = 2; k <= p; ++k) r *= Rational(k);
  for (int i = 0; i < p; ++i) r = r / Rational(subtree[i]);
  return r.num();  // denominator is 1 by the hook rule
}

GapProduct gap_product(const std::vector<std::vector<double>>& gap_crossings) {
  GapProduct out;
  out.gap_rates.reserve(gap_crossings.size());
  for (std::size_t k = 0; k < gap_crossings.size(); ++k) {
    double total = 0.0;
    if (gap_crossings[k].empty())
      fail(ErrorCode::EmptyGap, "gap " + std::to_string(k + 1) + " crossed by no edge");
    for (double r : gap_crossings[k]) {
      if (!(r > 0.0)) fail(ErrorCode::NonPositiveRate, "edge rate must be positive");
      total += r;
    }
    out.gap_rates.push_back(total);
    out.value /= total;
  }
  return out;
}

double integrate_linear_extension(const std::vector<std::vector<double>>& gap_crossings) {
  return gap_product(gap_crossings).value;
}

std::vector<std::vector<double>> gap_rates_for_order(int items, const std::vector<RatedSpan>& spans) {
  std::vector<std::vector<double>> gaps(items);
  for (const auto& s : spans) {
    if (s.upper > s.lower || s.lower > items)
      fail(ErrorCode::BadPermutation, "span endpoints out of range");
    for (int k = s.upper + 1; k <= s.lower; ++k) gaps[k - 1].push_back(s.rate);
  }
  return gaps;
}

double time_factor_closed_form(const TreePoset& poset, const std::vector<PosetSpan>& spans) {
  const int p = poset.size();
  if (p == 0) return 1.0;
  double total = 0.0;
  for (const auto& order : linear_extensions(poset)) {
    std::vector<int> slot(p, 0);
    for (int pos = 0; pos < p; ++pos) slot[order[pos]] = pos + 1;
    std::vector<RatedSpan> placed;
    placed.reserve(spans.size());
    for (const auto& s : spans) {
      int a = s.upper_item == -1 ? 0 : slot[s.upper_item];
      int b = s.lower_item == -1 ? 0 : slot[s.lower_item];
      placed.push_back({std::min(a, b), std::max(a, b), s.rate});
    }
    total += integrate_linear_extension(gap_rates_for_order(p, placed));
  }
  return total;
}

namespace {

// Integrate one variable over [lo, hi] with integrand kinks at the supplied
// interior points (from |t_i - t_j| factors of already-fixed times). Each
// smooth segment is handled by adaptive Gauss-Legendre panels.
double integrate_segmented(const std::function<double(double)>& f, double lo, double hi,
                           const std::vector<double>& kinks, double tol) {
  if (hi <= lo) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double k : kinks)
    if (k > lo && k < hi) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += detail::adaptive_gl(f, cuts[i], cuts[i + 1], tol / static_cast<double>(cuts.size()));
  return total;
}

}  // namespace

double nested_poset_integral(const TreePoset& poset, double t_top, double horizon, double tol,
                             const std::function<double(const std::vector<double>&)>& integrand) {
  check_poset(poset);
  const int p = poset.size();
  std::vector<double> times(p, 0.0);
  if (p == 0) return integrand(times);

  // integrate items parents-first so each upper limit is already fixed
  std::vector<int> depth(p, 0);
  for (int i = 0; i < p; ++i) {
    int v = i, d = 0;
    while (poset.parent[v] != -1) { v = poset.parent[v]; ++d; }
    depth[i] = d;
  }
  std::vector<int> order(p);
  for (int i = 0; i < p; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] < depth[b]; });

  const double lo = t_top - horizon;

  std::function<double(int)> level = [&](int k) -> double {
    if (k == p) return integrand(times);
    const int item = order[k];
    const int par = poset.parent[item];
    const double hi = par == -1 ? t_top : times[par];
    std::vector<double> kinks;
    for (int j = 0; j < k; ++j) kinks.push_back(times[order[j]]);
    auto f = [&](double t) {
      times[item] = t;
      return level(k + 1);
    };
    return integrate_segmented(f, lo, hi, kinks, tol);
  };
  return level(0);
}

double time_factor_quadrature(const TreePoset& poset, const std::vector<PosetSpan>& spans,
                              double t_top, double horizon) {
  return nested_poset_integral(poset, t_top, horizon, 1e-10,
                               [&](const std::vector<double>& times) {
                                 double v = 1.0;
                                 for (const auto& s : spans) {
                                   double tu = s.upper_item == -1 ? t_top : times[s.upper_item];
                                   double tl = s.lower_item == -1 ? t_top : times[s.lower_item];
                                   v *= std::exp(-s.rate * std::abs(tu - tl));
                                 }
                                 return v;
                               });
}

Rational simplex_volume_coefficient(const TreePoset& poset) {
  const int p = poset.size();
  Rational c(count_linear_extensions(poset));
  for (int k = 2; k <= p; ++k) c = c / Rational(k);
  return c;
}

double simplex_integral_bounded(const TreePoset& poset, double t) {
  if (!(t > 0.0)) fail(ErrorCode::NegativeTime, "simplex integral needs t > 0");
  return simplex_volume_coefficient(poset).to_double() * std::pow(t, poset.size());
}

}  // namespace sqv
