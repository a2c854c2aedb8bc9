#pragma once

#include <string>
#include <vector>

#include "sqv/maps.hpp"
#include "sqv/time_integrals.hpp"

namespace sqv {

/// Partition of a map's edges into oriented tree edges (one rooted tree
/// per external vertex, parents towards the roots) and the complementary
/// noise edges. Tree edges are (parent dart, child dart); the child end
/// is the dart the growth step entered through.
struct SpanningForest {
  std::vector<std::pair<int, int>> tree_edges;   ///< sorted for identity
  std::vector<std::pair<int, int>> noise_edges;  ///< unordered pairs, h < h'

  std::string id() const;  ///< "3>7,5>9" style, stable
};

/// All spanning forests of the map, by the iterative growth procedure:
/// start from the external vertices, repeatedly attach one uncovered
/// internal vertex through any edge into the covered set. Distinct choice
/// sequences reaching the same oriented edge set are one forest.
std::vector<SpanningForest> enumerate_spanning_forests(const CombinatorialMap& map,
                                                       int max_internal = 8);

/// Ancestry order of the internal vertices induced by the forest, items
/// indexed by position in vertex_info(map).internal_vertices. Roots sit at
/// the shared top. Throws NotSpanning if the forest does not match.
TreePoset forest_poset(const CombinatorialMap& map, const SpanningForest& forest);

}  // namespace sqv
