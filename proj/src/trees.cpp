#include "sqv/trees.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "sqv/errors.hpp"

namespace sqv {

std::vector<int> RecursiveTree::child_counts() const {
  std::vector<int> c(parent.size(), 0);
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] >= 0) ++c[parent[i]];
  return c;
}

std::vector<RecursiveTree> enumerate_recursive_trees(int p) {
  if (p < 1) fail(ErrorCode::BadPermutation, "recursive trees need p >= 1");
  std::vector<RecursiveTree> out;
  std::vector<int> parent(p, -1);
  std::function<void(int)> rec = [&](int v) {
    if (v == p) {
      out.push_back({parent});
      return;
    }
    for (int par = 0; par < v; ++par) {
      parent[v] = par;
      rec(v + 1);
    }
  };
  if (p == 1)
    out.push_back({parent});
  else
    rec(1);
  return out;
}

std::vector<int> PlaneTree::parent_vector() const {
  std::vector<int> parent(children.size(), -1);
  for (std::size_t v = 0; v < children.size(); ++v)
    for (int c : children[v]) parent[c] = static_cast<int>(v);
  return parent;
}

namespace {

// A plane tree with e >= 1 edges splits uniquely into its first root
// subtree and the tree formed by the root with the remaining subtrees;
// recursing on that split enumerates each embedding exactly once.
std::vector<PlaneTree> plane_trees_memo(int edges, std::map<int, std::vector<PlaneTree>>& memo) {
  auto it = memo.find(edges);
  if (it != memo.end()) return it->second;
  std::vector<PlaneTree> result;
  if (edges == 0) {
    result.push_back(PlaneTree{{{}}});
  } else {
    // choose the size of the first (leftmost) subtree of the root
    for (int first = 0; first <= edges - 1; ++first) {
      auto heads = plane_trees_memo(first, memo);
      auto rests = plane_trees_memo(edges - 1 - first, memo);
      for (const auto& rest : rests) {
        for (const auto& head : heads) {
          // rest is a tree whose root models our root with later subtrees
          PlaneTree t = rest;
          // first subtree must come first in the embedding order
          int base = t.size();
          for (int v = 0; v < head.size(); ++v) {
            t.children.emplace_back();
            for (int c : head.children[v]) t.children[base + v].push_back(base + c);
          }
          auto& rc = t.children[0];
          rc.insert(rc.begin(), base);
          result.push_back(std::move(t));
        }
      }
    }
  }
  memo[edges] = result;
  return result;
}

}  // namespace

std::vector<PlaneTree> enumerate_plane_trees(int edges) {
  if (edges < 0) fail(ErrorCode::BadPermutation, "plane trees need edges >= 0");
  std::map<int, std::vector<PlaneTree>> memo;
  return plane_trees_memo(edges, memo);
}

std::int64_t catalan(int n) {
  Rational c(1);
  for (int k = 0; k < n; ++k) c = c * Rational(2 * (2 * k + 1), k + 2);
  return c.num();
}

std::vector<PlaneTree> enumerate_qary_trees(int q, int internal_nodes) {
  if (q < 2) fail(ErrorCode::BadPermutation, "q-ary trees need q >= 2");
  if (internal_nodes < 0) fail(ErrorCode::BadPermutation, "negative node count");
  // branches with k q-child vertices; a branch is a vertex that either is a
  // leaf or carries exactly q ordered sub-branches
  std::map<int, std::vector<PlaneTree>> memo;
  std::function<const std::vector<PlaneTree>&(int)> branches = [&](int k) -> const std::vector<PlaneTree>& {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    std::vector<PlaneTree> result;
    if (k == 0) {
      result.push_back(PlaneTree{{{}}});
    } else {
      // distribute k-1 internal nodes over q ordered sub-branches
      std::vector<int> split(q, 0);
      std::function<void(int, int)> distribute = [&](int slot, int remaining) {
        if (slot == q - 1) {
          split[slot] = remaining;
          std::vector<std::size_t> idx(q, 0);
          std::function<void(int, PlaneTree&)> assemble = [&](int s, PlaneTree& acc) {
            if (s == q) {
              result.push_back(acc);
              return;
            }
            for (const auto& sub : branches(split[s])) {
              PlaneTree saved = acc;
              int base = acc.size();
              for (int v = 0; v < sub.size(); ++v) {
                acc.children.emplace_back();
                for (int c : sub.children[v]) acc.children[base + v].push_back(base + c);
              }
              acc.children[0].push_back(base);
              assemble(s + 1, acc);
              acc = saved;
            }
          };
          PlaneTree root{{{}}};
          assemble(0, root);
          return;
        }
        for (int take = 0; take <= remaining; ++take) {
          split[slot] = take;
          distribute(slot + 1, remaining - take);
        }
      };
      distribute(0, k - 1);
    }
    memo[k] = std::move(result);
    return memo[k];
  };
  return branches(internal_nodes);
}

std::int64_t fuss_catalan(int q, int k) {
  // (qk)! / (k! (qk - k + 1)!)
  Rational r(1);
  for (int j = q * k - k + 2; j <= q * k; ++j) r = r * Rational(j);
  for (int i = 2; i <= k; ++i) r = r / Rational(i);
  return r.num();
}

std::string rooted_tree_canonical(const std::vector<int>& parent) {
  const int p = static_cast<int>(parent.size());
  std::vector<std::vector<int>> children(p);
  int root = -1;
  for (int v = 0; v < p; ++v) {
    if (parent[v] == -1)
      root = v;
    else
      children[parent[v]].push_back(v);
  }
  if (root == -1) fail(ErrorCode::BadPermutation, "rooted tree has no root");
  std::function<std::string(int)> enc = [&](int v) -> std::string {
    std::vector<std::string> subs;
    for (int c : children[v]) subs.push_back(enc(c));
    std::sort(subs.begin(), subs.end());
    std::string s = "(";
    for (auto& x : subs) s += x;
    s += ")";
    return s;
  };
  return enc(root);
}

std::int64_t alpha_multiplicity(const std::vector<int>& parent) {
  const int p = static_cast<int>(parent.size());
  std::string target = rooted_tree_canonical(parent);
  std::int64_t count = 0;
  for (const auto& t : enumerate_recursive_trees(p))
    if (rooted_tree_canonical(t.parent) == target) ++count;
  return count;
}

std::int64_t plane_embedding_count(const std::vector<int>& parent) {
  const int p = static_cast<int>(parent.size());
  std::string target = rooted_tree_canonical(parent);
  std::int64_t count = 0;
  for (const auto& t : enumerate_plane_trees(p - 1))
    if (rooted_tree_canonical(t.parent_vector()) == target) ++count;
  return count;
}

std::vector<UnlabeledTreeClass> unlabeled_rooted_trees(int p) {
  std::map<std::string, UnlabeledTreeClass> classes;
  for (const auto& t : enumerate_recursive_trees(p)) {
    std::string ahu = rooted_tree_canonical(t.parent);
    auto& cls = classes[ahu];
    if (cls.alpha == 0) {
      cls.parent = t.parent;
      cls.ahu = ahu;
    }
    cls.alpha += 1;
  }
  std::vector<UnlabeledTreeClass> out;
  for (auto& [ahu, cls] : classes) out.push_back(std::move(cls));
  return out;
}

TreePoset tree_poset(const std::vector<int>& parent) { return TreePoset{parent}; }

bool consistency_alpha_identity(const std::vector<int>& parent) {
  const int p = static_cast<int>(parent.size());
  Rational p_factorial(1);
  for (int k = 2; k <= p; ++k) p_factorial *= Rational(k);

  Rational lhs = Rational(alpha_multiplicity(parent)) / p_factorial;

  std::vector<int> child_count(p, 0);
  for (int v = 0; v < p; ++v)
    if (parent[v] >= 0) ++child_count[parent[v]];
  Rational denom(1);
  for (int v = 0; v < p; ++v)
    for (int k = 2; k <= child_count[v]; ++k) denom *= Rational(k);

  Rational rhs = Rational(plane_embedding_count(parent)) *
                 simplex_volume_coefficient(tree_poset(parent)) / denom;
  return lhs == rhs;
}

double TaylorFunction::eval(double phi) const {
  double acc = 0.0;
  for (std::size_t q = coeffs.size(); q-- > 0;) acc = acc * phi + coeffs[q];
  return acc;
}

double TaylorFunction::derivative_at_zero(int order) const {
  double f = scaled_coeff(order);
  for (int k = 2; k <= order; ++k) f *= k;
  return f;
}

double TaylorFunction::scaled_coeff(int order) const {
  if (order < 0 || order >= static_cast<int>(coeffs.size())) return 0.0;
  return coeffs[order];
}

double ode_tree_series_order(const TaylorFunction& f, double t, int order) {
  double sum = 0.0;
  for (const auto& tree : enumerate_recursive_trees(order)) {
    double term = 1.0;
    for (int c : tree.child_counts()) {
      term *= f.derivative_at_zero(c);
      if (term == 0.0) break;
    }
    sum += term;
  }
  double weight = std::pow(t, order);
  for (int k = 2; k <= order; ++k) weight /= k;
  return weight * sum;
}

double ode_tree_series(const TaylorFunction& f, double t, int max_order, TreeSeriesMethod method) {
  double total = 0.0;
  switch (method) {
    case TreeSeriesMethod::RecursiveTrees:
      for (int p = 1; p <= max_order; ++p) total += ode_tree_series_order(f, t, p);
      break;
    case TreeSeriesMethod::UnlabeledTrees:
      for (int p = 1; p <= max_order; ++p) {
        double weight = std::pow(t, p);
        for (int k = 2; k <= p; ++k) weight /= k;
        double sum = 0.0;
        for (const auto& cls : unlabeled_rooted_trees(p)) {
          std::vector<int> child_count(p, 0);
          for (int v = 0; v < p; ++v)
            if (cls.parent[v] >= 0) ++child_count[cls.parent[v]];
          double term = static_cast<double>(cls.alpha);
          for (int v = 0; v < p; ++v) term *= f.derivative_at_zero(child_count[v]);
          sum += term;
        }
        total += weight * sum;
      }
      break;
    case TreeSeriesMethod::PlaneTrees:
      for (int p = 1; p <= max_order; ++p) {
        double sum = 0.0;
        for (const auto& tree : enumerate_plane_trees(p - 1)) {
          double term = 1.0;
          for (int v = 0; v < tree.size() && term != 0.0; ++v)
            term *= f.scaled_coeff(static_cast<int>(tree.children[v].size()));
          if (term == 0.0) continue;
          term *= simplex_volume_coefficient(tree_poset(tree.parent_vector())).to_double();
          sum += term;
        }
        total += sum * std::pow(t, p);
      }
      break;
  }
  return total;
}

}  // namespace sqv
