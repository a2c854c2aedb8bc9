#include "sqv/feynman.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sqv/detail/gauss.hpp"

namespace sqv {

double wick_moment(const Matrix& covariance, const std::vector<int>& sites) {
  const int n = static_cast<int>(sites.size());
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;

  // pair the first unpaired insertion with every later one
  std::vector<char> used(n, 0);
  std::function<double()> rec = [&]() -> double {
    int first = -1;
    for (int i = 0; i < n; ++i)
      if (!used[i]) { first = i; break; }
    if (first == -1) return 1.0;
    used[first] = 1;
    double sum = 0.0;
    for (int j = first + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      sum += covariance(sites[first], sites[j]) * rec();
      used[j] = 0;
    }
    used[first] = 0;
    return sum;
  };
  return rec();
}

SiteContraction::SiteContraction(const CombinatorialMap& map, const Theory& theory)
    : n_sites_(theory.n_sites()) {
  validate(map);
  theory.check();
  if (static_cast<int>(map.externals.size()) != theory.n_external())
    fail(ErrorCode::ExternalCountMismatch,
         "map has " + std::to_string(map.externals.size()) + " externals, theory expects " +
             std::to_string(theory.n_external()));

  const int d = map.dart_count();
  dart_fixed_site_.assign(d, -1);
  dart_var_.assign(d, -1);
  edges_ = edge_list(map);

  for (std::size_t nu = 0; nu < map.externals.size(); ++nu)
    dart_fixed_site_[map.externals[nu]] = theory.external_sites[nu];

  VertexInfo info = vertex_info(map);
  for (int v : info.internal_vertices) {
    const auto& cycle = info.cycles[v];
    const VertexKernel* kernel = theory.kernel_for_arity(static_cast<int>(cycle.size()));
    if (!kernel)
      fail(ErrorCode::ArityMismatch,
           "no kernel of arity " + std::to_string(cycle.size()) + " for an internal vertex");
    if (kernel->kind == VertexKernel::Kind::Local) {
      int var = n_vars_++;
      for (int h : cycle) dart_var_[h] = var;
    } else {
      for (int h : cycle) dart_var_[h] = n_vars_++;
    }
    vertices_.push_back({kernel, cycle});
  }
}

double SiteContraction::weighted_sum(const std::function<double(int, int, int)>& edge_weight) const {
  std::vector<int> assign(std::max(n_vars_, 1), 0);
  auto site_of = [&](int dart) {
    return dart_fixed_site_[dart] >= 0 ? dart_fixed_site_[dart] : assign[dart_var_[dart]];
  };

  double total = 0.0;
  std::vector<int> vertex_sites;
  while (true) {
    double term = 1.0;
    for (std::size_t e = 0; e < edges_.size() && term != 0.0; ++e)
      term *= edge_weight(static_cast<int>(e), site_of(edges_[e].first), site_of(edges_[e].second));
    for (const auto& vt : vertices_) {
      if (term == 0.0) break;
      vertex_sites.clear();
      for (int h : vt.darts) vertex_sites.push_back(site_of(h));
      term *= -vt.kernel->value(vertex_sites, n_sites_);
    }
    total += term;

    int d = n_vars_ - 1;
    for (; d >= 0; --d) {
      if (++assign[d] < n_sites_) break;
      assign[d] = 0;
    }
    if (d < 0) break;
  }
  return total;
}

double feynman_amplitude(const CombinatorialMap& map, const Theory& theory) {
  SiteContraction contraction(map, theory);
  Matrix cov = theory.op.covariance();
  return contraction.weighted_sum([&](int, int a, int b) { return cov(a, b); });
}

std::vector<MomentTerm> perturbative_moment(const Theory& theory, int max_order,
                                            const EnumerateOptions& opts) {
  theory.check();
  std::vector<int> arities = theory.kernel_arities();
  Theory unit = theory.with_unit_couplings();
  bool any_dense = false;
  for (const auto& k : theory.kernels)
    if (k.kind == VertexKernel::Kind::Dense) any_dense = true;

  std::vector<MomentTerm> out;
  for (int p = 0; p <= max_order; ++p) {
    if (p > 0 && arities.empty()) break;
    std::vector<EnumeratedMap> maps;
    try {
      maps = enumerate_maps(theory.n_external(), arities, p, opts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegreeParityImpossible) continue;  // no maps at this order
      throw;
    }
    std::map<std::vector<int>, MomentTerm> groups;
    for (const auto& em : maps) {
      auto& term = groups[em.degrees];
      term.order = p;
      term.degrees = em.degrees;
      term.value += feynman_amplitude(em.map, theory);
      term.unit_coupling_value += any_dense ? 0.0 : feynman_amplitude(em.map, unit);
      term.map_count += 1;
    }
    for (auto& [deg, term] : groups) out.push_back(std::move(term));
  }
  return out;
}

double moment_order_value(const std::vector<MomentTerm>& terms, int order) {
  double v = 0.0;
  for (const auto& t : terms)
    if (t.order == order) v += t.value;
  return v;
}

namespace {

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureGrid composite_grid(double lo, double hi, int panels, int order) {
  std::vector<double> gl_nodes, gl_weights;
  detail::gauss_legendre(order, gl_nodes, gl_weights);
  QuadratureGrid g;
  double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * width;
    for (int i = 0; i < order; ++i) {
      g.nodes.push_back(a + 0.5 * width * (gl_nodes[i] + 1.0));
      g.weights.push_back(0.5 * width * gl_weights[i]);
    }
  }
  return g;
}

}  // namespace

double quadrature_moment_oracle(const Theory& theory, const std::vector<int>& sites) {
  theory.check();
  const int n = theory.n_sites();
  if (n > 3) fail(ErrorCode::Unbounded, "moment oracle supports N <= 3");

  int top_arity = 0;
  double top_coupling = 0.0;
  for (const auto& k : theory.kernels) {
    if (k.kind == VertexKernel::Kind::Dense)
      fail(ErrorCode::Unbounded, "moment oracle supports Local kernels only");
    if (k.arity > top_arity) {
      top_arity = k.arity;
      top_coupling = k.coupling;
    }
  }
  if (top_arity > 0 && (top_arity % 2 != 0 || top_coupling <= 0.0))
    fail(ErrorCode::Unbounded, "action is not bounded below; refusing the oracle");

  // integrate in the eigenbasis: phi = U y decouples the Gaussian factor
  const Vector& lambda = theory.op.eigenvalues();
  const Matrix& u = theory.op.eigenvectors();

  auto integrand_value = [&](const Vector& y, bool with_insertions) {
    Vector phi = u * y;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += 0.5 * lambda(k) * y(k) * y(k);
    for (const auto& kern : theory.kernels) {
      double pow_sum = 0.0;
      for (int x = 0; x < n; ++x) pow_sum += std::pow(phi(x), kern.arity);
      s += kern.coupling / kern.arity * pow_sum;
    }
    double w = std::exp(-s);
    if (with_insertions)
      for (int x : sites) w *= phi(x);
    return w;
  };

  auto run = [&](int panels, int order, double extend) {
    std::vector<QuadratureGrid> grids;
    for (int k = 0; k < n; ++k) {
      double l = extend * std::sqrt(90.0 / lambda(k));
      grids.push_back(composite_grid(-l, l, panels, order));
    }
    double num = 0.0, den = 0.0;
    std::vector<std::size_t> idx(n, 0);
    Vector y(n);
    while (true) {
      double w = 1.0;
      for (int k = 0; k < n; ++k) {
        y(k) = grids[k].nodes[idx[k]];
        w *= grids[k].weights[idx[k]];
      }
      den += w * integrand_value(y, false);
      num += w * integrand_value(y, true);
      int d = n - 1;
      for (; d >= 0; --d) {
        if (++idx[d] < grids[d].nodes.size()) break;
        idx[d] = 0;
      }
      if (d < 0) break;
    }
    return num / den;
  };

  // refine until stable, then confirm the window is wide enough
  double prev = run(6, 24, 1.0);
  double cur = prev;
  for (int panels = 12; panels <= 48; panels *= 2) {
    cur = run(panels, 24, 1.0);
    if (std::abs(cur - prev) <= 1e-11 * std::max(1.0, std::abs(cur))) break;
    prev = cur;
  }
  double wide = run(24, 24, 1.25);
  if (std::abs(wide - cur) > 1e-8 * std::max(1.0, std::abs(cur)))
    fail(ErrorCode::Unbounded, "quadrature window unstable; action decays too slowly");
  return cur;
}

}  // namespace sqv
