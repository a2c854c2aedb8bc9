#include "sqv/maps.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

namespace sqv {

namespace {

void check_permutation(const std::vector<int>& perm, const char* name) {
  const int n = static_cast<int>(perm.size());
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v])
      fail(ErrorCode::BadPermutation, std::string(name) + " is not a permutation of the darts");
    seen[v] = 1;
  }
}

}  // namespace

void validate(const CombinatorialMap& map) {
  const int d = map.dart_count();
  if (d == 0) fail(ErrorCode::BadPermutation, "map has no darts");
  if (static_cast<int>(map.alpha.size()) != d)
    fail(ErrorCode::BadPermutation, "sigma and alpha disagree on the dart count");
  check_permutation(map.sigma, "sigma");
  check_permutation(map.alpha, "alpha");

  for (int h = 0; h < d; ++h) {
    if (map.alpha[h] == h)
      fail(ErrorCode::FixedPointAlpha, "alpha fixes dart " + std::to_string(h));
    if (map.alpha[map.alpha[h]] != h)
      fail(ErrorCode::BadPermutation, "alpha is not an involution");
  }

  // externals must list exactly the fixed points of sigma
  std::vector<char> is_external(d, 0);
  for (int e : map.externals) {
    if (e < 0 || e >= d || is_external[e])
      fail(ErrorCode::BadPermutation, "bad external dart list");
    is_external[e] = 1;
    if (map.sigma[e] != e)
      fail(ErrorCode::UnivalentInternal, "external dart " + std::to_string(e) + " is not univalent");
  }
  for (int h = 0; h < d; ++h)
    if (map.sigma[h] == h && !is_external[h])
      fail(ErrorCode::UnivalentInternal,
           "internal vertex of degree 1 at dart " + std::to_string(h));

  // every component must reach an external dart
  std::vector<int> comp = components(map);
  int n_comp = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<char> has_external(n_comp, 0);
  for (int e : map.externals) has_external[comp[e]] = 1;
  for (int c = 0; c < n_comp; ++c)
    if (!has_external[c])
      fail(ErrorCode::OrphanComponent, "component without an external vertex");
}

std::vector<int> components(const CombinatorialMap& map) {
  const int d = map.dart_count();
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int h = 0; h < d; ++h) {
    unite(h, map.sigma[h]);
    unite(h, map.alpha[h]);
  }
  // number components: those containing externals first, in external order
  std::vector<int> id(d, -1);
  int next = 0;
  for (int e : map.externals) {
    int r = find(e);
    if (id[r] == -1) id[r] = next++;
  }
  for (int h = 0; h < d; ++h) {
    int r = find(h);
    if (id[r] == -1) id[r] = next++;
  }
  std::vector<int> out(d);
  for (int h = 0; h < d; ++h) out[h] = id[find(h)];
  return out;
}

bool is_connected(const CombinatorialMap& map) {
  auto comp = components(map);
  return *std::max_element(comp.begin(), comp.end()) == 0;
}

VertexInfo vertex_info(const CombinatorialMap& map) {
  const int d = map.dart_count();
  VertexInfo info;
  info.vertex_of.assign(d, -1);
  for (int h = 0; h < d; ++h) {
    if (info.vertex_of[h] != -1) continue;
    int v = static_cast<int>(info.cycles.size());
    std::vector<int> cycle;
    int cur = h;
    do {
      info.vertex_of[cur] = v;
      cycle.push_back(cur);
      cur = map.sigma[cur];
    } while (cur != h);
    info.cycles.push_back(std::move(cycle));
  }
  for (int e : map.externals) info.external_vertex.push_back(info.vertex_of[e]);
  for (std::size_t v = 0; v < info.cycles.size(); ++v)
    if (info.cycles[v].size() >= 2) info.internal_vertices.push_back(static_cast<int>(v));
  return info;
}

std::vector<std::pair<int, int>> edge_list(const CombinatorialMap& map) {
  std::vector<std::pair<int, int>> edges;
  for (int h = 0; h < map.dart_count(); ++h)
    if (h < map.alpha[h]) edges.emplace_back(h, map.alpha[h]);
  return edges;
}

namespace {

// Breadth-first relabeling from each component root. Returns the canonical
// dart labels alongside the serialized key.
struct CanonicalResult {
  std::string key;
  std::vector<int> labels;
};

CanonicalResult canonical_labels(const CombinatorialMap& map) {
  const int d = map.dart_count();
  std::vector<int> comp = components(map);
  std::vector<int> label(d, -1);
  int next = 0;

  std::string key;
  key.reserve(static_cast<std::size_t>(d) * 8 + 16);

  std::vector<char> comp_done(d ? 1 + *std::max_element(comp.begin(), comp.end()) : 0, 0);
  std::vector<int> order;
  order.reserve(d);
  std::vector<int> queue;

  for (std::size_t root_pos = 0; root_pos < map.externals.size(); ++root_pos) {
    int root = map.externals[root_pos];
    int c = comp[root];
    if (comp_done[c]) continue;
    comp_done[c] = 1;

    const int base = next;
    order.clear();
    queue.clear();
    auto encounter = [&](int dart) {
      if (label[dart] != -1) return;
      label[dart] = next++;
      order.push_back(dart);
      queue.push_back(dart);
    };
    encounter(root);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int h = queue[qi];
      for (int cur = map.sigma[h]; cur != h; cur = map.sigma[cur]) encounter(cur);
      encounter(map.alpha[h]);
    }

    key += "c";
    key += std::to_string(next - base);
    key += ":";
    for (std::size_t nu = 0; nu < map.externals.size(); ++nu) {
      int e = map.externals[nu];
      if (comp[e] == c) {
        key += "x";
        key += std::to_string(nu);
        key += "=";
        key += std::to_string(label[e] - base);
        key += ",";
      }
    }
    key += "s:";
    for (int dart : order) {
      key += std::to_string(label[map.sigma[dart]] - base);
      key += ",";
    }
    key += "a:";
    for (int dart : order) {
      key += std::to_string(label[map.alpha[dart]] - base);
      key += ",";
    }
    key += "|";
  }
  return {std::move(key), std::move(label)};
}

}  // namespace

CanonicalKey canonical_key(const CombinatorialMap& map) {
  return CanonicalKey{canonical_labels(map).key};
}

std::string CanonicalKey::hex() const {
  // FNV-1a 64-bit digest for compact display; equality uses full bytes.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

CombinatorialMap relabel(const CombinatorialMap& map, const std::vector<int>& tau) {
  const int d = map.dart_count();
  if (static_cast<int>(tau.size()) != d) fail(ErrorCode::BadPermutation, "relabeling size mismatch");
  check_permutation(tau, "tau");
  CombinatorialMap out;
  out.sigma.assign(d, 0);
  out.alpha.assign(d, 0);
  for (int h = 0; h < d; ++h) {
    out.sigma[tau[h]] = tau[map.sigma[h]];
    out.alpha[tau[h]] = tau[map.alpha[h]];
  }
  for (int e : map.externals) out.externals.push_back(tau[e]);
  return out;
}

namespace {

struct ClassAccumulator {
  CombinatorialMap representative;
  std::vector<int> degrees;
  std::int64_t count = 0;
};

using ClassMap = std::map<std::string, ClassAccumulator>;

void visit_matchings(std::vector<int>& alpha, std::vector<char>& used, int d,
                     const std::function<void(const std::vector<int>&)>& sink) {
  int lowest = -1;
  for (int h = 0; h < d; ++h)
    if (!used[h]) { lowest = h; break; }
  if (lowest == -1) {
    sink(alpha);
    return;
  }
  used[lowest] = 1;
  for (int partner = lowest + 1; partner < d; ++partner) {
    if (used[partner]) continue;
    used[partner] = 1;
    alpha[lowest] = partner;
    alpha[partner] = lowest;
    visit_matchings(alpha, used, d, sink);
    used[partner] = 0;
  }
  used[lowest] = 0;
}

}  // namespace

std::vector<EnumeratedMap> enumerate_maps(int n_external, const std::vector<int>& allowed_degrees,
                                          int internal_count, const EnumerateOptions& opts) {
  if (n_external < 1) fail(ErrorCode::BadPermutation, "need at least one external vertex");
  if (internal_count < 0) fail(ErrorCode::BadPermutation, "negative internal vertex count");
  std::vector<int> degrees = allowed_degrees;
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  for (int q : degrees)
    if (q < 2) fail(ErrorCode::BadPermutation, "internal vertex degrees must be at least 2");
  if (internal_count > 0 && degrees.empty())
    fail(ErrorCode::DegreeParityImpossible, "no allowed internal degrees");

  // degree multisets of the internal vertices (non-decreasing sequences)
  std::vector<std::vector<int>> multisets;
  std::vector<int> cur;
  std::function<void(std::size_t)> build = [&](std::size_t from) {
    if (static_cast<int>(cur.size()) == internal_count) {
      multisets.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < degrees.size(); ++i) {
      cur.push_back(degrees[i]);
      build(i);
      cur.pop_back();
    }
  };
  build(0);

  bool any_even = false;
  ClassMap classes;

  for (const auto& ms : multisets) {
    int dart_total = n_external + std::accumulate(ms.begin(), ms.end(), 0);
    if (dart_total % 2 != 0) continue;
    any_even = true;
    if (dart_total > opts.max_darts)
      fail(ErrorCode::DartCapExceeded,
           "request needs " + std::to_string(dart_total) + " darts, cap is " +
               std::to_string(opts.max_darts));

    CombinatorialMap base;
    base.sigma.resize(dart_total);
    base.externals.resize(n_external);
    for (int e = 0; e < n_external; ++e) {
      base.sigma[e] = e;
      base.externals[e] = e;
    }
    int pos = n_external;
    for (int deg : ms) {
      for (int k = 0; k < deg; ++k) base.sigma[pos + k] = pos + (k + 1) % deg;
      pos += deg;
    }

    auto classify = [&](ClassMap& into, const std::vector<int>& alpha) {
      CombinatorialMap m = base;
      m.alpha = alpha;
      std::vector<int> comp = components(m);
      int n_comp = 1 + *std::max_element(comp.begin(), comp.end());
      if (opts.connected_only && n_comp > 1) return;
      std::vector<char> has_external(n_comp, 0);
      for (int e : m.externals) has_external[comp[e]] = 1;
      for (int c = 0; c < n_comp; ++c)
        if (!has_external[c]) return;  // vacuum component

      CanonicalResult canon = canonical_labels(m);
      auto& acc = into[canon.key];
      if (acc.count == 0) {
        acc.representative = relabel(m, canon.labels);
        acc.degrees = ms;
      }
      acc.count += 1;
    };

    const int d = dart_total;
    if (opts.jobs <= 1 || d < 6) {
      std::vector<int> alpha(d, 0);
      std::vector<char> used(d, 0);
      visit_matchings(alpha, used, d, [&](const std::vector<int>& a) { classify(classes, a); });
    } else {
      // shard on the partner of dart 0, merge local class maps afterwards
      std::vector<ClassMap> shards(d - 1);
      std::vector<std::thread> pool;
      std::atomic<int> cursor{1};
      unsigned workers = std::min<unsigned>(opts.jobs, d - 1);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
          for (int partner = cursor.fetch_add(1); partner < d; partner = cursor.fetch_add(1)) {
            std::vector<int> alpha(d, 0);
            std::vector<char> used(d, 0);
            used[0] = used[partner] = 1;
            alpha[0] = partner;
            alpha[partner] = 0;
            ClassMap& local = shards[partner - 1];
            visit_matchings(alpha, used, d, [&](const std::vector<int>& a) { classify(local, a); });
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& shard : shards)
        for (auto& [key, acc] : shard) {
          auto& dst = classes[key];
          if (dst.count == 0) {
            dst.representative = std::move(acc.representative);
            dst.degrees = acc.degrees;
          }
          dst.count += acc.count;
        }
    }
  }

  if (!any_even)
    fail(ErrorCode::DegreeParityImpossible,
         "every admissible degree assignment gives an odd dart count");

  std::vector<EnumeratedMap> out;
  out.reserve(classes.size());
  for (auto& [key, acc] : classes) {
    // labeled-pairing multiplicity rule: one factorial per repeated degree,
    // one factor d(v) per internal vertex
    std::int64_t expected = 1;
    int run = 1;
    for (std::size_t i = 0; i < acc.degrees.size(); ++i) {
      expected *= acc.degrees[i];
      if (i > 0 && acc.degrees[i] == acc.degrees[i - 1])
        expected *= ++run;
      else
        run = 1;
    }
    if (acc.count != expected)
      fail(ErrorCode::BadPermutation,
           "multiplicity rule violated: class seen " + std::to_string(acc.count) +
               " times, expected " + std::to_string(expected));
    out.push_back({std::move(acc.representative), CanonicalKey{key}, acc.count, acc.degrees});
  }
  return out;
}

std::vector<std::pair<int, int>> keep_to_right_tree(const CombinatorialMap& map) {
  validate(map);
  if (!is_connected(map)) fail(ErrorCode::OrphanComponent, "tree picking needs a connected map");

  VertexInfo info = vertex_info(map);
  std::vector<char> visited(info.cycles.size(), 0);
  std::vector<std::pair<int, int>> tree;

  int root = map.externals[0];
  visited[info.vertex_of[root]] = 1;
  tree.emplace_back(root, map.alpha[root]);
  visited[info.vertex_of[map.alpha[root]]] = 1;

  std::function<void(int)> walk = [&](int entry) {
    // successors of the entry dart in sigma order; first edge to a new
    // vertex wins, then resume the scan after returning
    for (int d = map.sigma[entry]; d != entry; d = map.sigma[d]) {
      int target = info.vertex_of[map.alpha[d]];
      if (visited[target]) continue;
      visited[target] = 1;
      tree.emplace_back(d, map.alpha[d]);
      walk(map.alpha[d]);
    }
  };
  walk(map.alpha[root]);

  for (char v : visited)
    if (!v) fail(ErrorCode::OrphanComponent, "tree walk failed to span the map");
  return tree;
}

AbstractGraph to_abstract_graph(const CombinatorialMap& map) {
  VertexInfo info = vertex_info(map);
  AbstractGraph g;
  g.n_vertices = static_cast<int>(info.cycles.size());
  g.external_vertices = info.external_vertex;
  for (auto [h, hp] : edge_list(map)) {
    int a = info.vertex_of[h];
    int b = info.vertex_of[hp];
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string AbstractGraph::canonical_signature() const {
  // externals keep their identity, internal vertices are renamed over all
  // permutations; small graphs only
  std::vector<int> internals;
  std::vector<int> role(n_vertices, -1);  // external position, or -1
  for (std::size_t nu = 0; nu < external_vertices.size(); ++nu) role[external_vertices[nu]] = static_cast<int>(nu);
  for (int v = 0; v < n_vertices; ++v)
    if (role[v] == -1) internals.push_back(v);

  const int n_ext = static_cast<int>(external_vertices.size());
  std::vector<int> perm(internals.size());
  std::iota(perm.begin(), perm.end(), 0);

  std::string best;
  do {
    std::vector<int> rename(n_vertices, -1);
    for (int v = 0; v < n_vertices; ++v)
      if (role[v] != -1) rename[v] = role[v];
    for (std::size_t i = 0; i < internals.size(); ++i) rename[internals[i]] = n_ext + perm[i];

    std::vector<std::pair<int, int>> renamed;
    renamed.reserve(edges.size());
    for (auto [a, b] : edges) {
      int x = rename[a], y = rename[b];
      renamed.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(renamed.begin(), renamed.end());
    std::string sig = "v" + std::to_string(n_vertices) + "e" + std::to_string(n_ext) + ":";
    for (auto [a, b] : renamed) {
      sig += std::to_string(a);
      sig += "-";
      sig += std::to_string(b);
      sig += ",";
    }
    if (best.empty() || sig < best) best = std::move(sig);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::map<std::string, std::vector<const EnumeratedMap*>> group_by_abstract_graph(
    const std::vector<EnumeratedMap>& maps) {
  std::map<std::string, std::vector<const EnumeratedMap*>> groups;
  for (const auto& em : maps)
    groups[to_abstract_graph(em.map).canonical_signature()].push_back(&em);
  return groups;
}

std::string to_text(const CombinatorialMap& map) {
  VertexInfo info = vertex_info(map);
  std::ostringstream os;
  os << "darts=" << map.dart_count() << "; sigma=";
  for (const auto& cycle : info.cycles) {
    if (cycle.size() < 2) continue;
    os << "(";
    for (std::size_t i = 0; i < cycle.size(); ++i) os << (i ? " " : "") << cycle[i];
    os << ")";
  }
  os << "; alpha=";
  for (auto [h, hp] : edge_list(map)) os << "(" << h << " " << hp << ")";
  os << "; externals=[";
  for (std::size_t i = 0; i < map.externals.size(); ++i)
    os << (i ? "," : "") << map.externals[i];
  os << "]";
  return os.str();
}

namespace {

struct TextCursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool try_consume(const std::string& tok) {
    skip_ws();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!try_consume(tok))
      fail(ErrorCode::ConfigParse,
           "map text: expected '" + tok + "' at offset " + std::to_string(pos));
  }
  int integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail(ErrorCode::ConfigParse, "map text: expected integer at offset " + std::to_string(start));
    return std::stoi(s.substr(start, pos - start));
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
};

}  // namespace

CombinatorialMap from_text(const std::string& text) {
  TextCursor cur{text};
  cur.expect("darts");
  cur.expect("=");
  int d = cur.integer();
  if (d <= 0) fail(ErrorCode::ConfigParse, "map text: dart count must be positive");
  cur.expect(";");
  cur.expect("sigma");
  cur.expect("=");

  CombinatorialMap map;
  map.sigma.resize(d);
  std::iota(map.sigma.begin(), map.sigma.end(), 0);
  map.alpha.assign(d, -1);

  auto in_range = [&](int h) {
    if (h < 0 || h >= d) fail(ErrorCode::ConfigParse, "map text: dart id out of range");
    return h;
  };

  while (cur.peek('(')) {
    cur.expect("(");
    std::vector<int> cycle;
    while (!cur.peek(')')) cycle.push_back(in_range(cur.integer()));
    cur.expect(")");
    for (std::size_t i = 0; i < cycle.size(); ++i)
      map.sigma[cycle[i]] = cycle[(i + 1) % cycle.size()];
  }
  cur.expect(";");
  cur.expect("alpha");
  cur.expect("=");
  while (cur.peek('(')) {
    cur.expect("(");
    int a = in_range(cur.integer());
    int b = in_range(cur.integer());
    cur.expect(")");
    if (map.alpha[a] != -1 || map.alpha[b] != -1)
      fail(ErrorCode::ConfigParse, "map text: dart paired twice in alpha");
    map.alpha[a] = b;
    map.alpha[b] = a;
  }
  cur.expect(";");
  cur.expect("externals");
  cur.expect("=");
  cur.expect("[");
  if (!cur.peek(']')) {
    map.externals.push_back(in_range(cur.integer()));
    while (cur.try_consume(",")) map.externals.push_back(in_range(cur.integer()));
  }
  cur.expect("]");

  for (int h = 0; h < d; ++h)
    if (map.alpha[h] == -1)
      fail(ErrorCode::ConfigParse, "map text: dart " + std::to_string(h) + " missing from alpha");
  validate(map);
  return map;
}

}  // namespace sqv
