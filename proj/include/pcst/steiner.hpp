#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcst/instance.hpp"

namespace pcst {

enum class SteinerKind { EXACT_DP, MST2 };

/** Steiner subroutine handle with its declared approximation factor. */
struct SteinerSolver {
  SteinerKind kind = SteinerKind::EXACT_DP;
  Rat declared_factor = Rat(1);

  static SteinerSolver exact() { return {SteinerKind::EXACT_DP, Rat(1)}; }
  static SteinerSolver mst2() { return {SteinerKind::MST2, Rat(2)}; }
};

/** The exact DP is exponential in the terminal count; past the cap the caller
 *  is expected to fall back to the 2-approximation. */
struct SteinerCapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExactDpTerminalCap = 14;

/** A tree spanning all requested terminals; no penalty accounting. */
struct SteinerTree {
  std::vector<int> edges;     // edge ids, ascending
  std::vector<int> vertices;  // ascending
  Rat cost;
};

namespace detail {

/** All-pairs shortest paths with deterministic first-hop reconstruction. */
struct Apsp {
  int n = 0;
  const PcstInstance* g = nullptr;
  std::vector<std::vector<std::optional<Rat>>> dist;
  std::vector<std::vector<int>> hop;  // first edge on the canonical path

  explicit Apsp(const PcstInstance& inst) : n(inst.vertex_count), g(&inst) {
    dist.assign(n + 1, std::vector<std::optional<Rat>>(n + 1));
    hop.assign(n + 1, std::vector<int>(n + 1, -1));
    for (int v = 1; v <= n; ++v) dist[v][v] = Rat(0);
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
      int u = inst.edges[e].u, v = inst.edges[e].v;
      const Rat& w = inst.edges[e].weight;
      if (!dist[u][v] || w < *dist[u][v]) {
        dist[u][v] = w;
        dist[v][u] = w;
        hop[u][v] = static_cast<int>(e);
        hop[v][u] = static_cast<int>(e);
      }
    }
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i) {
        if (!dist[i][k]) continue;
        for (int j = 1; j <= n; ++j) {
          if (!dist[k][j]) continue;
          Rat cand = *dist[i][k] + *dist[k][j];
          if (!dist[i][j] || cand < *dist[i][j]) {
            dist[i][j] = cand;
            hop[i][j] = hop[i][k];
          }
        }
      }
  }

  const Rat& d(int u, int v) const {
    if (!dist[u][v]) throw std::logic_error("unreachable vertex pair");
    return *dist[u][v];
  }

  void append_path(int u, int v, std::set<int>& edge_ids) const {
    int steps = 0;
    while (u != v) {
      if (++steps > n) throw std::logic_error("path reconstruction cycle");
      int e = hop[u][v];
      edge_ids.insert(e);
      u = g->edges[e].u == u ? g->edges[e].v : g->edges[e].u;
    }
  }
};

/** Spanning tree of the given edge set with non-terminal leaves peeled off. */
inline SteinerTree tidy_union(const PcstInstance& g, const std::set<int>& edge_ids,
                              const std::vector<int>& terminals) {
  std::vector<int> ids(edge_ids.begin(), edge_ids.end());
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (g.edges[a].weight != g.edges[b].weight)
      return g.edges[a].weight < g.edges[b].weight;
    return a < b;
  });
  Dsu dsu(g.vertex_count);
  std::vector<int> tree;
  for (int e : ids)
    if (dsu.unite(g.edges[e].u, g.edges[e].v)) tree.push_back(e);

  std::set<int> term(terminals.begin(), terminals.end());
  for (int t : terminals)
    if (dsu.find(t) != dsu.find(terminals[0]))
      throw std::logic_error("terminals not connected by candidate edges");

  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::map<int, int> degree;
    for (int e : tree) {
      ++degree[g.edges[e].u];
      ++degree[g.edges[e].v];
    }
    std::vector<int> kept;
    for (int e : tree) {
      int u = g.edges[e].u, v = g.edges[e].v;
      bool drop = (degree[u] == 1 && !term.count(u)) ||
                  (degree[v] == 1 && !term.count(v));
      if (drop)
        pruned = true;
      else
        kept.push_back(e);
    }
    tree = std::move(kept);
  }

  SteinerTree out;
  out.edges = tree;
  std::sort(out.edges.begin(), out.edges.end());
  std::set<int> verts(terminals.begin(), terminals.end());
  for (int e : out.edges) {
    verts.insert(g.edges[e].u);
    verts.insert(g.edges[e].v);
  }
  out.vertices.assign(verts.begin(), verts.end());
  for (int e : out.edges) out.cost += g.edges[e].weight;
  return out;
}

inline SteinerTree steiner_exact_dp(const PcstInstance& g,
                                    const std::vector<int>& terminals) {
  const Apsp apsp(g);
  std::vector<int> t;  // non-root terminal list
  for (int v : terminals)
    if (v != g.root) t.push_back(v);
  const int k = static_cast<int>(t.size());
  const int n = g.vertex_count;
  const int full = (1 << k) - 1;

  // dp[mask][v]: cheapest tree connecting v with the terminals in mask.
  std::vector<std::vector<Rat>> dp(full + 1, std::vector<Rat>(n + 1));
  std::vector<std::vector<bool>> has(full + 1, std::vector<bool>(n + 1, false));
  std::vector<std::vector<int>> via(full + 1, std::vector<int>(n + 1, 0));
  std::vector<std::vector<int>> split(full + 1, std::vector<int>(n + 1, 0));

  for (int i = 0; i < k; ++i)
    for (int v = 1; v <= n; ++v) {
      dp[1 << i][v] = apsp.d(t[i], v);
      has[1 << i][v] = true;
    }

  for (int mask = 1; mask <= full; ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) < 2) continue;
    int low = mask & -mask;
    std::vector<Rat> merged(n + 1);
    std::vector<bool> merged_has(n + 1, false);
    for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;  // canonical half carries the lowest bit
      int rest = mask ^ sub;
      for (int v = 1; v <= n; ++v) {
        Rat cand = dp[sub][v] + dp[rest][v];
        if (!merged_has[v] || cand < merged[v]) {
          merged[v] = cand;
          merged_has[v] = true;
          split[mask][v] = sub;
        }
      }
    }
    for (int v = 1; v <= n; ++v)
      for (int u = 1; u <= n; ++u) {
        if (!merged_has[u]) continue;
        Rat cand = merged[u] + apsp.d(u, v);
        if (!has[mask][v] || cand < dp[mask][v]) {
          dp[mask][v] = cand;
          has[mask][v] = true;
          via[mask][v] = u;
        }
      }
  }

  std::set<int> edge_ids;
  // Expand the optimal decomposition back into concrete edges.
  std::vector<std::pair<int, int>> stack{{full, g.root}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    if (std::popcount(static_cast<unsigned>(mask)) == 1) {
      int idx = std::countr_zero(static_cast<unsigned>(mask));
      apsp.append_path(t[idx], v, edge_ids);
      continue;
    }
    int u = via[mask][v];
    apsp.append_path(u, v, edge_ids);
    int sub = split[mask][u];
    stack.push_back({sub, u});
    stack.push_back({mask ^ sub, u});
  }

  SteinerTree out = tidy_union(g, edge_ids, terminals);
  if (out.cost != dp[full][g.root])
    throw std::logic_error("reconstructed tree cost differs from its table value");
  return out;
}

inline SteinerTree steiner_mst2(const PcstInstance& g,
                                const std::vector<int>& terminals) {
  const Apsp apsp(g);
  struct Pair {
    Rat d;
    int u, v;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < terminals.size(); ++i)
    for (std::size_t j = i + 1; j < terminals.size(); ++j)
      pairs.push_back({apsp.d(terminals[i], terminals[j]), terminals[i], terminals[j]});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d != b.d) return a.d < b.d;
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  Dsu dsu(g.vertex_count);
  std::set<int> edge_ids;
  for (const Pair& p : pairs)
    if (dsu.unite(p.u, p.v)) apsp.append_path(p.u, p.v, edge_ids);
  return tidy_union(g, edge_ids, terminals);
}

}  // namespace detail

/** Tree through all terminals. EXACT_DP returns a minimum-cost Steiner tree
 *  and requires at most 14 terminals; MST2 runs the metric-closure heuristic,
 *  within twice the minimum. Pure and deterministic. */
inline SteinerTree steiner_tree(const SteinerSolver& solver, const PcstInstance& graph,
                                const std::vector<int>& terminals) {
  if (terminals.empty()) throw std::invalid_argument("no terminals");
  std::set<int> uniq(terminals.begin(), terminals.end());
  if (static_cast<int>(uniq.size()) != static_cast<int>(terminals.size()))
    throw std::invalid_argument("duplicate terminals");
  for (int v : terminals)
    if (v < 1 || v > graph.vertex_count)
      throw std::invalid_argument("terminal out of range");
  if (!uniq.count(graph.root)) throw std::invalid_argument("terminals must contain the root");

  std::vector<int> ts(uniq.begin(), uniq.end());
  if (ts.size() == 1) return SteinerTree{{}, {graph.root}, Rat(0)};

  if (solver.kind == SteinerKind::EXACT_DP) {
    if (static_cast<int>(ts.size()) > kExactDpTerminalCap)
      throw SteinerCapacityError("exact solver capped at " +
                                 std::to_string(kExactDpTerminalCap) + " terminals, got " +
                                 std::to_string(ts.size()));
    return detail::steiner_exact_dp(graph, ts);
  }
  return detail::steiner_mst2(graph, ts);
}

}  // namespace pcst
