#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcst/rational.hpp"

namespace pcst {

/** Vertex penalty: either a finite nonnegative rational or the root's
 *  distinguished infinite value. No arithmetic on infinite penalties. */
struct Penalty {
  bool infinite = false;
  Rat value;

  static Penalty inf() { return Penalty{true, Rat()}; }
  static Penalty fin(Rat v) { return Penalty{false, std::move(v)}; }

  const Rat& finite_value() const {
    if (infinite) throw std::logic_error("arithmetic on infinite penalty");
    return value;
  }
  bool operator==(const Penalty& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

struct Edge {
  int u = 0;
  int v = 0;
  Rat weight;
  /** Marks a zero-weight root edge added by augment_with_root_edges. */
  bool zero_root_edge = false;

  bool operator==(const Edge& o) const {
    return u == o.u && v == o.v && weight == o.weight &&
           zero_root_edge == o.zero_root_edge;
  }
};

/** Rooted prize-collecting Steiner tree instance. Vertices are 1..vertex_count,
 *  the graph is connected, the root's penalty is infinite and all others are
 *  finite and nonnegative. Immutable after construction by convention. */
struct PcstInstance {
  int vertex_count = 0;
  std::vector<Edge> edges;
  int root = 0;
  std::vector<Penalty> penalties;  // index 0 unused

  const Penalty& penalty(int v) const { return penalties.at(v); }

  bool operator==(const PcstInstance& o) const {
    return vertex_count == o.vertex_count && edges == o.edges &&
           root == o.root && penalties == o.penalties;
  }

  void validate() const;
};

/** A tree containing the root, with its cost split against some penalty map. */
struct Solution {
  std::vector<int> tree_edges;     // edge ids, ascending
  std::vector<int> tree_vertices;  // vertex ids, ascending, contains root
  Rat edge_cost;
  Rat penalty_cost;
  Rat total_cost;
};

namespace detail {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n + 1) {
    for (int i = 0; i <= n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  /** Returns false if already joined. */
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

inline bool is_connected(int n, const std::vector<Edge>& edges) {
  if (n <= 0) return false;
  Dsu dsu(n);
  int comps = n;
  for (const Edge& e : edges)
    if (dsu.unite(e.u, e.v)) --comps;
  return comps == 1;
}

}  // namespace detail

inline void PcstInstance::validate() const {
  if (vertex_count < 1) throw std::invalid_argument("vertex count must be positive");
  if (root < 1 || root > vertex_count) throw std::invalid_argument("root out of range");
  if (static_cast<int>(penalties.size()) != vertex_count + 1)
    throw std::invalid_argument("penalty table size mismatch");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 1 || e.u > vertex_count || e.v < 1 || e.v > vertex_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop edge");
    if (e.weight < 0) throw std::invalid_argument("negative edge weight");
    auto key = std::minmax(e.u, e.v);
    if (!e.zero_root_edge && !seen.insert(key).second)
      throw std::invalid_argument("duplicate edge");
  }
  if (!detail::is_connected(vertex_count, edges))
    throw std::invalid_argument("graph is not connected");
  for (int v = 1; v <= vertex_count; ++v) {
    if (v == root) {
      if (!penalties[v].infinite)
        throw std::invalid_argument("root penalty must be infinite");
    } else {
      if (penalties[v].infinite)
        throw std::invalid_argument("non-root penalty must be finite");
      if (penalties[v].value < 0)
        throw std::invalid_argument("negative penalty");
    }
  }
}

/** Star on n+1 vertices whose growth phase pays twice the optimum once the
 *  scaling divisor exceeds 2. Vertex 1 is the root leaf, vertex 2 the center,
 *  vertices 3..n+1 the remaining leaves. All edges have weight 1; the center
 *  penalty is 0 and every non-root leaf has penalty 2(1 + 1/(n-1)). */
inline PcstInstance gen_star(int n, const Rat& epsilon) {
  if (n < 2) throw std::invalid_argument("gen_star needs n >= 2");
  if (epsilon <= 0 || Rat(1, n - 1) >= epsilon)
    throw std::invalid_argument("gen_star needs 1/(n-1) < epsilon");
  PcstInstance inst;
  inst.vertex_count = n + 1;
  inst.root = 1;
  inst.penalties.assign(n + 2, Penalty::fin(Rat(0)));
  inst.penalties[1] = Penalty::inf();
  Rat leaf_penalty = 2 * (Rat(1) + Rat(1, n - 1));
  inst.edges.push_back(Edge{1, 2, Rat(1), false});
  for (int leaf = 3; leaf <= n + 1; ++leaf) {
    inst.edges.push_back(Edge{2, leaf, Rat(1), false});
    inst.penalties[leaf] = Penalty::fin(leaf_penalty);
  }
  inst.validate();
  return inst;
}

namespace detail {

/** Deterministic bounded draw; modulo bias is irrelevant for test supply. */
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

}  // namespace detail

/** Connected random instance: a random spanning tree plus each remaining pair
 *  independently with the given probability. Integer weights in [0, max_weight]
 *  and integer penalties in [0, max_penalty]. Pure function of its arguments. */
inline PcstInstance gen_random(int n, const Rat& edge_probability, int max_weight,
                               int max_penalty, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random needs n >= 1");
  if (edge_probability < 0 || edge_probability > 1)
    throw std::invalid_argument("edge probability outside [0,1]");
  if (max_weight < 0 || max_penalty < 0)
    throw std::invalid_argument("negative weight or penalty bound");

  std::mt19937_64 rng(seed);
  PcstInstance inst;
  inst.vertex_count = n;
  inst.root = 1;
  inst.penalties.assign(n + 1, Penalty::fin(Rat(0)));
  inst.penalties[1] = Penalty::inf();

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(detail::draw_below(rng, i + 1));
    std::swap(order[i], order[j]);
  }

  std::set<std::pair<int, int>> present;
  auto add_edge = [&](int u, int v) {
    auto key = std::minmax(u, v);
    if (!present.insert(key).second) return;
    Rat w(static_cast<long>(detail::draw_below(rng, max_weight + 1)));
    inst.edges.push_back(Edge{key.first, key.second, w, false});
  };

  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(detail::draw_below(rng, i));
    add_edge(order[i], order[j]);
  }

  // Exact Bernoulli draw: accept iff a 64-bit sample falls below
  // floor(probability * 2^64).
  Int threshold = (numerator(edge_probability) << 64) / denominator(edge_probability);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      std::uint64_t sample = rng();
      if (Int(sample) < threshold) add_edge(u, v);
    }

  for (int v = 2; v <= n; ++v)
    inst.penalties[v] =
        Penalty::fin(Rat(static_cast<long>(detail::draw_below(rng, max_penalty + 1))));

  std::sort(inst.edges.begin(), inst.edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  inst.validate();
  return inst;
}

/** Divides every finite penalty exactly by beta; the graph and the root's
 *  infinite penalty are untouched. */
inline PcstInstance scale_penalties(const PcstInstance& inst, const Rat& beta) {
  if (beta <= 0) throw std::invalid_argument("scale divisor must be positive");
  PcstInstance out = inst;
  for (int v = 1; v <= inst.vertex_count; ++v)
    if (!out.penalties[v].infinite) out.penalties[v].value /= beta;
  return out;
}

/** Adds one zero-weight root edge per target vertex, each carrying the
 *  zero_root_edge marker. Such edges may duplicate existing pairs; the
 *  simulation treats them as independent parallel edges. */
inline PcstInstance augment_with_root_edges(const PcstInstance& inst,
                                            const std::vector<int>& targets) {
  PcstInstance out = inst;
  for (int u : targets) {
    if (u == inst.root) throw std::invalid_argument("target equals root");
    if (u < 1 || u > inst.vertex_count)
      throw std::invalid_argument("target out of range");
    auto key = std::minmax(inst.root, u);
    out.edges.push_back(Edge{key.first, key.second, Rat(0), true});
  }
  out.validate();
  return out;
}

/** Edge/penalty sums for a given tree against an explicit penalty map. */
inline Solution evaluate_cost(const std::vector<int>& tree_edges,
                              const std::vector<int>& tree_vertices,
                              const PcstInstance& graph,
                              const std::vector<Penalty>& penalties) {
  Solution sol;
  sol.tree_edges = tree_edges;
  sol.tree_vertices = tree_vertices;
  std::sort(sol.tree_edges.begin(), sol.tree_edges.end());
  std::sort(sol.tree_vertices.begin(), sol.tree_vertices.end());
  if (!std::binary_search(sol.tree_vertices.begin(), sol.tree_vertices.end(),
                          graph.root))
    throw std::invalid_argument("tree does not contain the root");
  for (int e : sol.tree_edges) sol.edge_cost += graph.edges.at(e).weight;
  for (int v = 1; v <= graph.vertex_count; ++v) {
    if (std::binary_search(sol.tree_vertices.begin(), sol.tree_vertices.end(), v))
      continue;
    sol.penalty_cost += penalties.at(v).finite_value();
  }
  sol.total_cost = sol.edge_cost + sol.penalty_cost;
  return sol;
}

inline Solution evaluate_cost(const std::vector<int>& tree_edges,
                              const std::vector<int>& tree_vertices,
                              const PcstInstance& graph) {
  return evaluate_cost(tree_edges, tree_vertices, graph, graph.penalties);
}

}  // namespace pcst
