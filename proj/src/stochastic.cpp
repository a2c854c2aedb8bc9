#include "sqv/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "sqv/parallel.hpp"

namespace sqv {

std::string to_string(AmplitudeMethod m) {
  return m == AmplitudeMethod::ClosedForm ? "closed_form" : "quadrature";
}

double method_tolerance(AmplitudeMethod method) {
  return method == AmplitudeMethod::ClosedForm ? 1e-8 : 1e-5;
}

namespace {

struct EdgeRole {
  bool is_tree = false;
  int upper_item = -1;  ///< poset item of the parent / either end, -1 external
  int lower_item = -1;
};

// Classify every edge of the map against the forest and resolve its
// endpoints to poset items (-1 = an external vertex at the top time).
std::vector<EdgeRole> classify_edges(const CombinatorialMap& map, const SpanningForest& forest,
                                     const std::vector<std::pair<int, int>>& edges,
                                     const TreePoset& poset) {
  VertexInfo info = vertex_info(map);
  std::vector<int> item_of(info.cycles.size(), -1);
  for (std::size_t i = 0; i < info.internal_vertices.size(); ++i)
    item_of[info.internal_vertices[i]] = static_cast<int>(i);

  std::vector<EdgeRole> roles(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [h, hp] = edges[e];
    roles[e].upper_item = item_of[info.vertex_of[h]];
    roles[e].lower_item = item_of[info.vertex_of[hp]];
  }
  for (auto [parent_dart, child_dart] : forest.tree_edges) {
    auto key = std::pair{std::min(parent_dart, child_dart), std::max(parent_dart, child_dart)};
    auto it = std::lower_bound(edges.begin(), edges.end(), key);
    if (it == edges.end() || *it != key) fail(ErrorCode::NotSpanning, "tree edge not in map");
    auto& role = roles[it - edges.begin()];
    role.is_tree = true;
    role.upper_item = item_of[info.vertex_of[parent_dart]];
    role.lower_item = item_of[info.vertex_of[child_dart]];
  }
  (void)poset;
  return roles;
}

double closed_form_amplitude(const CombinatorialMap& map, const SpanningForest& forest,
                             const Theory& theory, const StochasticOptions& opts) {
  SiteContraction contraction(map, theory);
  TreePoset poset = forest_poset(map, forest);
  const auto& edges = contraction.edges();
  std::vector<EdgeRole> roles = classify_edges(map, forest, edges, poset);

  auto extensions = linear_extensions(poset, opts.max_internal);
  const int p = poset.size();
  const int n_edges = contraction.edge_count();
  const Vector& lambda = theory.op.eigenvalues();
  const Matrix& u = theory.op.eigenvectors();
  const int n_modes = theory.op.dim();

  // slot position of each item per extension, precomputed
  std::vector<std::vector<int>> slot_of(extensions.size(), std::vector<int>(p, 0));
  for (std::size_t x = 0; x < extensions.size(); ++x)
    for (int pos = 0; pos < p; ++pos) slot_of[x][extensions[x][pos]] = pos + 1;

  std::vector<int> mode(n_edges, 0);
  double total = 0.0;
  while (true) {
    double spatial = contraction.weighted_sum(
        [&](int e, int a, int b) { return u(a, mode[e]) * u(b, mode[e]); });
    if (spatial != 0.0) {
      double prefactor = 1.0;
      for (int e = 0; e < n_edges; ++e)
        if (!roles[e].is_tree) prefactor /= lambda(mode[e]);

      double time_sum = 0.0;
      std::vector<double> gap_rate(p);
      for (std::size_t x = 0; x < extensions.size(); ++x) {
        std::fill(gap_rate.begin(), gap_rate.end(), 0.0);
        for (int e = 0; e < n_edges; ++e) {
          int a = roles[e].upper_item == -1 ? 0 : slot_of[x][roles[e].upper_item];
          int b = roles[e].lower_item == -1 ? 0 : slot_of[x][roles[e].lower_item];
          if (a > b) std::swap(a, b);
          for (int k = a + 1; k <= b; ++k) gap_rate[k - 1] += lambda(mode[e]);
        }
        double prod = 1.0;
        for (int k = 0; k < p; ++k) {
          if (gap_rate[k] <= 0.0)
            fail(ErrorCode::EmptyGap, "gap crossed by no edge in a forest extension");
          prod /= gap_rate[k];
        }
        time_sum += prod;
      }
      total += spatial * prefactor * time_sum;
    }

    int e = n_edges - 1;
    for (; e >= 0; --e) {
      if (++mode[e] < n_modes) break;
      mode[e] = 0;
    }
    if (e < 0) break;
  }
  return total;
}

double quadrature_amplitude(const CombinatorialMap& map, const SpanningForest& forest,
                            const Theory& theory, const StochasticOptions& opts) {
  SiteContraction contraction(map, theory);
  TreePoset poset = forest_poset(map, forest);
  const auto& edges = contraction.edges();
  std::vector<EdgeRole> roles = classify_edges(map, forest, edges, poset);
  const int n_edges = contraction.edge_count();

  const double horizon = opts.horizon_factor / theory.op.min_eigenvalue();
  std::vector<Matrix> kernels(n_edges);

  auto integrand = [&](const std::vector<double>& times) {
    for (int e = 0; e < n_edges; ++e) {
      double tu = roles[e].upper_item == -1 ? opts.t_top : times[roles[e].upper_item];
      double tl = roles[e].lower_item == -1 ? opts.t_top : times[roles[e].lower_item];
      if (roles[e].is_tree)
        kernels[e] = theory.op.heat_kernel(std::max(tu - tl, 0.0));
      else
        kernels[e] = theory.op.noise_propagator(tu, tl);
    }
    return contraction.weighted_sum([&](int e, int a, int b) { return kernels[e](a, b); });
  };
  return nested_poset_integral(poset, opts.t_top, horizon, opts.quad_tol, integrand);
}

}  // namespace

double stochastic_amplitude(const CombinatorialMap& map, const SpanningForest& forest,
                            const Theory& theory, AmplitudeMethod method,
                            const StochasticOptions& opts) {
  if (method == AmplitudeMethod::ClosedForm) return closed_form_amplitude(map, forest, theory, opts);
  return quadrature_amplitude(map, forest, theory, opts);
}

AmplitudeReport verify_forest_sum(const CombinatorialMap& map, const Theory& theory,
                                  AmplitudeMethod method, const StochasticOptions& opts) {
  AmplitudeReport report;
  report.map_key = canonical_key(map);
  report.order = static_cast<int>(vertex_info(map).internal_vertices.size());
  report.method = method;
  report.feynman_value = feynman_amplitude(map, theory);

  auto forests = enumerate_spanning_forests(map, opts.max_internal);
  std::vector<std::pair<std::string, double>> values;
  values.reserve(forests.size());
  for (const auto& f : forests)
    values.emplace_back(f.id(), stochastic_amplitude(map, f, theory, method, opts));
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double sum = 0.0;
  for (const auto& [id, v] : values) sum += v;
  report.forest_values = std::move(values);
  report.forest_sum = sum;
  report.abs_discrepancy = std::abs(sum - report.feynman_value);
  report.rel_discrepancy = report.abs_discrepancy / std::max(std::abs(report.feynman_value), 1e-300);
  report.pass = report.rel_discrepancy < method_tolerance(method);
  return report;
}

OrderReport verify_order(const Theory& theory, int order, AmplitudeMethod method,
                         const StochasticOptions& opts, const EnumerateOptions& enum_opts,
                         unsigned jobs) {
  OrderReport out;
  out.order = order;

  std::vector<int> arities = theory.kernel_arities();
  auto maps = enumerate_maps(theory.n_external(), arities, order, enum_opts);

  out.reports.resize(maps.size());
  parallel_for(maps.size(), jobs, [&](std::size_t i) {
    out.reports[i] = verify_forest_sum(maps[i].map, theory, method, opts);
  });

  for (const auto& r : out.reports) {
    out.worst_rel_discrepancy = std::max(out.worst_rel_discrepancy, r.rel_discrepancy);
    out.all_pass = out.all_pass && r.pass;
    out.map_sum += r.feynman_value;
  }

  out.moment_value = moment_order_value(perturbative_moment(theory, order, enum_opts), order);
  out.moment_consistent =
      std::abs(out.moment_value - out.map_sum) <=
      1e-12 * std::max({std::abs(out.moment_value), std::abs(out.map_sum), 1.0});
  return out;
}

}  // namespace sqv
