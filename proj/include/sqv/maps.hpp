#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqv/errors.hpp"

namespace sqv {

/// Graph embedding encoded by darts (half-edges): sigma's cycles are the
/// vertices (counterclockwise successor), alpha's transpositions are the
/// edges. External vertices are the univalent fixed points of sigma,
/// listed in a fixed order; the first external of each connected component
/// is that component's root.
struct CombinatorialMap {
  std::vector<int> sigma;      ///< permutation of darts 0..D-1
  std::vector<int> alpha;      ///< fixed-point-free involution
  std::vector<int> externals;  ///< ordered external darts

  int dart_count() const { return static_cast<int>(sigma.size()); }
};

/// Checks all structural invariants. Throws FixedPointAlpha,
/// OrphanComponent, UnivalentInternal or BadPermutation.
void validate(const CombinatorialMap& map);

/// Stable serialization of the unlabeled map: equal keys exactly when a
/// dart relabeling preserving the external order exists. Rooted maps have
/// trivial automorphisms, so a breadth-first relabeling from each
/// component root is canonical.
struct CanonicalKey {
  std::string bytes;

  friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) { return a.bytes == b.bytes; }
  friend bool operator<(const CanonicalKey& a, const CanonicalKey& b) { return a.bytes < b.bytes; }

  std::string hex() const;
};

CanonicalKey canonical_key(const CombinatorialMap& map);

/// Conjugates sigma and alpha by the dart permutation `tau` and maps the
/// external list through it. tau need not fix the externals.
CombinatorialMap relabel(const CombinatorialMap& map, const std::vector<int>& tau);

/// Vertex partition helpers.
struct VertexInfo {
  std::vector<std::vector<int>> cycles;  ///< darts of each vertex, in sigma order
  std::vector<int> vertex_of;            ///< dart -> vertex index
  std::vector<int> external_vertex;      ///< external position -> vertex index
  std::vector<int> internal_vertices;    ///< indices of cycles with length >= 2
};
VertexInfo vertex_info(const CombinatorialMap& map);

/// Edges as dart pairs {h, alpha(h)} with h < alpha(h).
std::vector<std::pair<int, int>> edge_list(const CombinatorialMap& map);

/// Connected components over the group generated by sigma and alpha.
/// Returns dart -> component id (components numbered by smallest external).
std::vector<int> components(const CombinatorialMap& map);

bool is_connected(const CombinatorialMap& map);

/// One representative per unlabeled map plus the number of labeled
/// pairings that produced it.
struct EnumeratedMap {
  CombinatorialMap map;
  CanonicalKey key;
  std::int64_t multiplicity = 0;
  std::vector<int> degrees;  ///< sorted internal-vertex degrees
};

struct EnumerateOptions {
  bool connected_only = false;
  int max_darts = 18;
  unsigned jobs = 1;
};

/// All maps with `n_external` distinguishable external vertices and
/// `internal_count` internal vertices whose degrees are drawn from
/// `allowed_degrees`, one representative per canonical key. Generated by
/// brute force over fixed-point-free pairings of the dart set; components
/// without an external vertex never survive (they are the vacuum pieces).
///
/// For a single allowed degree q+1 every class must appear exactly
/// p!(q+1)^p times among labeled pairings; the enumerator asserts the
/// analogous product rule for mixed degrees and throws if it fails.
std::vector<EnumeratedMap> enumerate_maps(int n_external, const std::vector<int>& allowed_degrees,
                                          int internal_count, const EnumerateOptions& opts = {});

/// The distinguished spanning tree picked by the first-available-successor
/// walk: from the entry dart of the current vertex, scan sigma-successors
/// and take the first edge leading to an unvisited vertex; backtrack when
/// stuck. Map must be connected. Returns oriented tree edges
/// (parent dart, child dart) in pick order.
std::vector<std::pair<int, int>> keep_to_right_tree(const CombinatorialMap& map);

/// Underlying abstract multigraph: vertices keep their index from
/// vertex_info, the dart cyclic order is forgotten. Canonicalized up to
/// permutations of internal vertices (externals stay distinguishable).
struct AbstractGraph {
  int n_vertices = 0;
  std::vector<int> external_vertices;        ///< external position -> vertex
  std::vector<std::pair<int, int>> edges;    ///< unordered, normalized a <= b
  std::string canonical_signature() const;
};

AbstractGraph to_abstract_graph(const CombinatorialMap& map);

/// Number of enumerated unlabeled maps sharing one abstract graph.
std::map<std::string, std::vector<const EnumeratedMap*>> group_by_abstract_graph(
    const std::vector<EnumeratedMap>& maps);

/// Text exchange format:
///   darts=D; sigma=(c1 c2 ..)(..); alpha=(a b)(c d)..; externals=[e1,e2]
/// Fixed points of sigma may be omitted from the cycle list.
std::string to_text(const CombinatorialMap& map);
CombinatorialMap from_text(const std::string& text);

}  // namespace sqv
