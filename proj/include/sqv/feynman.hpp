#pragma once

#include <functional>
#include <vector>

#include "sqv/maps.hpp"
#include "sqv/theory.hpp"

namespace sqv {

/// Gaussian moment with the given covariance: sum over pairings of
/// products of covariance entries; zero for an odd number of insertions.
double wick_moment(const Matrix& covariance, const std::vector<int>& sites);

/// Site-index contraction pattern of a map against a theory. Local
/// kernels collapse every half-edge of their vertex onto a single summed
/// site; dense kernels keep one summed site per half-edge. The weighted
/// sum below is shared by the Feynman amplitude (covariance weights) and
/// the stochastic amplitudes (eigenvector or kernel-matrix weights).
class SiteContraction {
public:
  SiteContraction(const CombinatorialMap& map, const Theory& theory);

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Sum over site assignments of
  ///   prod_edges weight(edge_index, x_h, x_h') * prod_vertices -V(sites).
  double weighted_sum(const std::function<double(int, int, int)>& edge_weight) const;

private:
  int n_sites_;
  std::vector<std::pair<int, int>> edges_;      // dart pairs, h < alpha(h)
  std::vector<int> dart_fixed_site_;            // external site, or -1
  std::vector<int> dart_var_;                   // summed variable id, or -1
  int n_vars_ = 0;
  struct VertexTerm {
    const VertexKernel* kernel;
    std::vector<int> darts;  // sigma order
  };
  std::vector<VertexTerm> vertices_;
};

/// Value of one map under the theory: sum over internal site assignments
/// of products of covariances per edge and -V per internal vertex.
double feynman_amplitude(const CombinatorialMap& map, const Theory& theory);

/// One group of maps at fixed order with a fixed multiset of vertex
/// arities (the exponent vector of the couplings).
struct MomentTerm {
  int order = 0;
  std::vector<int> degrees;          ///< sorted arities, one entry per vertex
  double value = 0.0;                ///< sum of amplitudes, couplings included
  double unit_coupling_value = 0.0;  ///< same with Local couplings set to 1
  int map_count = 0;
};

/// Moment contributions order by order, p = 0..max_order, grouped per
/// arity multiset. Allowed vertex degrees are the theory's kernel arities.
std::vector<MomentTerm> perturbative_moment(const Theory& theory, int max_order,
                                            const EnumerateOptions& opts = {});

/// Sum of the order-p terms with couplings included.
double moment_order_value(const std::vector<MomentTerm>& terms, int order);

/// Non-perturbative reference: the moment computed by tensor-product
/// quadrature of the Boltzmann weight over [-L, L]^N in the eigenbasis.
/// Needs a bounded action (even top arity with positive Local coupling,
/// or a free theory) and small N. Accuracy ~1e-10 relative.
double quadrature_moment_oracle(const Theory& theory, const std::vector<int>& sites);

}  // namespace sqv
