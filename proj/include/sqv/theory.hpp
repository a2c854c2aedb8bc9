#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqv/operators.hpp"

namespace sqv {

/// Interaction vertex of arity q+1. Local kernels are site-diagonal with
/// strength g; dense kernels carry a full tensor over sites, stored fully
/// symmetrized (input must at least be cyclically symmetric).
struct VertexKernel {
  enum class Kind { Local, Dense };

  int arity = 0;
  Kind kind = Kind::Local;
  double coupling = 0.0;       ///< Local only
  std::vector<double> tensor;  ///< Dense only, size N^arity, row-major

  static VertexKernel local(int arity, double g);
  static VertexKernel dense(int arity, int n_sites, std::vector<double> tensor);

  /// V(x^1..x^arity) for the given site tuple.
  double value(const std::vector<int>& sites, int n_sites) const;
};

/// Quadratic form plus interaction kernels plus the external insertions.
struct Theory {
  Operator op;
  std::vector<VertexKernel> kernels;
  std::vector<int> external_sites;

  int n_sites() const { return op.dim(); }
  int n_external() const { return static_cast<int>(external_sites.size()); }
  const VertexKernel* kernel_for_arity(int arity) const;
  std::vector<int> kernel_arities() const;

  /// Copy with every Local coupling replaced by 1 (for per-power
  /// coefficient reporting). Dense kernels are kept as they are.
  Theory with_unit_couplings() const;

  void check() const;  ///< throws on duplicate arities or out-of-range sites
};

/// Flat text configuration:
///   N 2
///   A 2 -1 -1 2
///   kernel local 4 1.0
///   kernel dense 3 <N^3 reals>
///   externals 0 1
/// '#' starts a comment. Parse errors carry line numbers.
Theory parse_theory(const std::string& text);
Theory load_theory_file(const std::string& path);
std::string theory_to_text(const Theory& theory);

}  // namespace sqv
