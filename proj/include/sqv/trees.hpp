#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqv/rational.hpp"
#include "sqv/time_integrals.hpp"

namespace sqv {

/// Labeled rooted tree whose labels increase away from the root. Vertices
/// are 0..p-1; parent[0] == -1 stands for the univalent root above vertex 0
/// and parent[i] < i otherwise. There are (p-1)! of them.
struct RecursiveTree {
  std::vector<int> parent;

  int size() const { return static_cast<int>(parent.size()); }
  std::vector<int> child_counts() const;
};

std::vector<RecursiveTree> enumerate_recursive_trees(int p);

/// Ordered rooted tree ("plane tree"): children of every vertex carry an
/// embedding order. Vertex 0 is the root; with E edges there are
/// Catalan(E) of them. The univalent-root trees drawn with an explicit
/// stem correspond to these by deleting the stem.
struct PlaneTree {
  std::vector<std::vector<int>> children;  ///< per vertex, in embedding order

  int size() const { return static_cast<int>(children.size()); }
  int edge_count() const { return size() - 1; }
  std::vector<int> parent_vector() const;
};

std::vector<PlaneTree> enumerate_plane_trees(int edges);
std::int64_t catalan(int n);

/// Plane trees in which every vertex has exactly q children or none;
/// `internal_nodes` counts the q-child vertices. Counted by the
/// Fuss-Catalan numbers (qk)! / (k! (qk-k+1)!).
std::vector<PlaneTree> enumerate_qary_trees(int q, int internal_nodes);
std::int64_t fuss_catalan(int q, int k);

/// Canonical form of the underlying unordered rooted tree (AHU encoding).
std::string rooted_tree_canonical(const std::vector<int>& parent);

/// Number of recursive trees isomorphic to the given rooted tree shape.
std::int64_t alpha_multiplicity(const std::vector<int>& parent);

/// Number of plane trees embedding the given rooted tree shape.
std::int64_t plane_embedding_count(const std::vector<int>& parent);

/// One shape class of rooted unlabeled trees with p vertices.
struct UnlabeledTreeClass {
  std::vector<int> parent;  ///< representative
  std::string ahu;
  std::int64_t alpha = 0;
};
std::vector<UnlabeledTreeClass> unlabeled_rooted_trees(int p);

/// Tree partial order of a rooted tree, as consumed by the time-integral
/// engine (vertex 0 hangs under the shared top element).
TreePoset tree_poset(const std::vector<int>& parent);

/// Exact check of alpha(shape)/p! == N(shape) * simplex_coeff(shape) /
/// prod_v (d_v - 1)! in rational arithmetic.
bool consistency_alpha_identity(const std::vector<int>& parent);

/// Polynomial right-hand side for d(phi)/dt = f(phi), phi(0) = 0, stored
/// by scaled Taylor coefficients f_q = f^(q)(0) / q!.
struct TaylorFunction {
  std::vector<double> coeffs;

  double eval(double phi) const;
  double derivative_at_zero(int order) const;  ///< f^(order)(0)
  double scaled_coeff(int order) const;        ///< f_order
};

enum class TreeSeriesMethod { RecursiveTrees, UnlabeledTrees, PlaneTrees };

/// Truncated series solution of the elementary ODE up to trees with
/// `max_order` vertices. The three methods sum the same series organized
/// by recursive trees, unlabeled rooted trees, and plane trees; they must
/// agree to rounding.
double ode_tree_series(const TaylorFunction& f, double t, int max_order, TreeSeriesMethod method);

/// Per-order contribution (coefficient of the series at that order times
/// t^order), recursive-tree route.
double ode_tree_series_order(const TaylorFunction& f, double t, int order);

}  // namespace sqv
