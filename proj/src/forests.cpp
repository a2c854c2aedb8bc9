#include "sqv/forests.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sqv {

std::string SpanningForest::id() const {
  std::string s;
  for (auto [parent, child] : tree_edges) {
    if (!s.empty()) s += ",";
    s += std::to_string(parent);
    s += ">";
    s += std::to_string(child);
  }
  return s.empty() ? "-" : s;
}

std::vector<SpanningForest> enumerate_spanning_forests(const CombinatorialMap& map,
                                                       int max_internal) {
  validate(map);
  VertexInfo info = vertex_info(map);
  const int n_internal = static_cast<int>(info.internal_vertices.size());
  if (n_internal > max_internal)
    fail(ErrorCode::DartCapExceeded,
         "refusing forest enumeration with " + std::to_string(n_internal) + " internal vertices");

  std::vector<char> covered(info.cycles.size(), 0);
  for (int v : info.external_vertex) covered[v] = 1;

  auto edges = edge_list(map);
  std::set<std::vector<std::pair<int, int>>> seen;
  std::vector<std::pair<int, int>> tree;

  std::function<void(int)> grow = [&](int remaining) {
    if (remaining == 0) {
      std::vector<std::pair<int, int>> sorted = tree;
      std::sort(sorted.begin(), sorted.end());
      seen.insert(std::move(sorted));
      return;
    }
    for (auto [h, hp] : edges) {
      for (auto [from, to] : {std::pair{h, hp}, std::pair{hp, h}}) {
        if (!covered[info.vertex_of[from]] || covered[info.vertex_of[to]]) continue;
        covered[info.vertex_of[to]] = 1;
        tree.emplace_back(from, to);
        grow(remaining - 1);
        tree.pop_back();
        covered[info.vertex_of[to]] = 0;
      }
    }
  };
  grow(n_internal);

  std::vector<SpanningForest> out;
  for (const auto& tree_set : seen) {
    SpanningForest f;
    f.tree_edges = tree_set;
    std::set<std::pair<int, int>> in_tree;
    for (auto [a, b] : tree_set) in_tree.insert({std::min(a, b), std::max(a, b)});
    for (auto e : edges)
      if (!in_tree.count(e)) f.noise_edges.push_back(e);
    out.push_back(std::move(f));
  }
  return out;
}

TreePoset forest_poset(const CombinatorialMap& map, const SpanningForest& forest) {
  VertexInfo info = vertex_info(map);
  const int n_internal = static_cast<int>(info.internal_vertices.size());
  if (static_cast<int>(forest.tree_edges.size()) != n_internal)
    fail(ErrorCode::NotSpanning, "forest must have one tree edge per internal vertex");

  std::vector<int> item_of(info.cycles.size(), -1);
  for (int i = 0; i < n_internal; ++i) item_of[info.internal_vertices[i]] = i;

  auto edge_vec = edge_list(map);
  std::set<std::pair<int, int>> edges(edge_vec.begin(), edge_vec.end());
  TreePoset poset;
  poset.parent.assign(n_internal, -2);
  for (auto [parent_dart, child_dart] : forest.tree_edges) {
    if (!edges.count({std::min(parent_dart, child_dart), std::max(parent_dart, child_dart)}))
      fail(ErrorCode::NotSpanning, "tree edge is not an edge of the map");
    int child_vertex = info.vertex_of[child_dart];
    int child_item = item_of[child_vertex];
    if (child_item == -1) fail(ErrorCode::NotSpanning, "tree edge enters an external vertex");
    if (poset.parent[child_item] != -2)
      fail(ErrorCode::NotSpanning, "two tree edges enter one vertex");
    poset.parent[child_item] = item_of[info.vertex_of[parent_dart]];  // -1 when external
  }
  for (int i = 0; i < n_internal; ++i)
    if (poset.parent[i] == -2) fail(ErrorCode::NotSpanning, "internal vertex not spanned");

  // ancestry must reach the top; cycles mean the edge set was not a forest
  for (int i = 0; i < n_internal; ++i) {
    int v = i;
    for (int hops = 0; v != -1; ++hops) {
      if (hops > n_internal) fail(ErrorCode::NotSpanning, "tree edges contain a cycle");
      v = poset.parent[v];
    }
  }
  return poset;
}

}  // namespace sqv
