#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcst/instance.hpp"

namespace pcst {

/** One maximal interval during which an active set was colored at unit rate
 *  with the charge assigned to a single member vertex. Within a set, charges
 *  go to the root first, then to the remaining members in ascending id order
 *  as their personal potentials run out. */
struct ColoringSegment {
  std::vector<int> set;  // ascending snapshot of the active set
  int charged_vertex = 0;
  Rat duration;  // strictly positive
};

/** Complete output of one moat-growing run. Costs inside `tree` are measured
 *  against `inst`, the exact instance the run consumed. */
struct MoatRun {
  PcstInstance inst;
  std::vector<int> forest_edges;            // spanning tree edge ids, merge order
  Solution tree;                            // pruned tree
  std::vector<int> dead_vertices;           // ascending
  std::vector<std::vector<int>> dead_sets;  // deactivation order
  std::vector<ColoringSegment> history;
  std::vector<Rat> y_v;  // index 0 unused
  std::map<std::vector<int>, Rat> y_sets;
};

namespace detail {

struct MoatComp {
  std::vector<int> members;  // ascending
  bool active = true;
  bool has_root = false;
  Rat remaining;  // unspent potential; meaningless when has_root
};

}  // namespace detail

/** Grows moats around every vertex simultaneously. Each iteration advances all
 *  active sets by the largest uniform amount that keeps potentials nonnegative
 *  and edge colorings within capacity, then applies exactly one event. Ties:
 *  deactivations before merges; simultaneous deactivations by smallest member
 *  id; simultaneous merges by ascending edge id, skipping cycle edges. Once
 *  the forest spans, dead sets cutting exactly one forest edge are peeled off
 *  in reverse deactivation order until a full pass removes nothing. */
inline MoatRun run_gw(const PcstInstance& inst) {
  inst.validate();
  const int n = inst.vertex_count;
  const auto& edges = inst.edges;

  MoatRun run;
  run.inst = inst;
  run.y_v.assign(n + 1, Rat(0));

  detail::Dsu dsu(n);
  std::map<int, detail::MoatComp> comps;
  for (int v = 1; v <= n; ++v) {
    detail::MoatComp c;
    c.members = {v};
    c.has_root = (v == inst.root);
    if (!c.has_root) c.remaining = inst.penalties[v].value;
    comps.emplace(v, std::move(c));
  }
  std::vector<Rat> color(edges.size(), Rat(0));

  auto personal_left = [&](int v) -> Rat {
    return Rat(inst.penalties[v].value - run.y_v[v]);
  };

  int comp_count = n;
  while (comp_count > 1) {
    // Smallest remaining potential over active non-root sets.
    std::optional<Rat> d1;
    int d1_comp = 0;
    for (const auto& [id, c] : comps) {
      if (!c.active || c.has_root) continue;
      if (!d1 || c.remaining < *d1 ||
          (c.remaining == *d1 && c.members[0] < comps.at(d1_comp).members[0])) {
        d1 = c.remaining;
        d1_comp = id;
      }
    }

    // Smallest residual capacity per unit of active coloring over cross edges.
    std::optional<Rat> d2;
    int d2_edge = -1;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      int cu = dsu.find(edges[e].u), cv = dsu.find(edges[e].v);
      if (cu == cv) continue;
      int act = (comps.at(cu).active ? 1 : 0) + (comps.at(cv).active ? 1 : 0);
      if (act == 0) continue;
      Rat slack = (edges[e].weight - color[e]) / act;
      if (!d2 || slack < *d2) {
        d2 = slack;
        d2_edge = static_cast<int>(e);
      }
    }

    if (!d1 && !d2) throw std::logic_error("stalled growth phase");
    bool deactivate = d1 && (!d2 || *d1 <= *d2);
    Rat delta = deactivate ? *d1 : *d2;
    if (delta < 0) throw std::logic_error("negative event time");

    if (delta > 0) {
      for (auto& [id, c] : comps) {
        if (!c.active) continue;
        run.y_sets[c.members] += delta;
        if (c.has_root) {
          run.history.push_back({c.members, inst.root, delta});
          run.y_v[inst.root] += delta;
        } else {
          Rat left = delta;
          for (int v : c.members) {
            Rat pers = personal_left(v);
            if (pers <= 0) continue;
            Rat take = left < pers ? left : pers;
            run.history.push_back({c.members, v, take});
            run.y_v[v] += take;
            left -= take;
            if (left == 0) break;
          }
          if (left != 0) throw std::logic_error("set potential underflow");
          c.remaining -= delta;
        }
      }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        int cu = dsu.find(edges[e].u), cv = dsu.find(edges[e].v);
        if (cu == cv) continue;
        int act = (comps.at(cu).active ? 1 : 0) + (comps.at(cv).active ? 1 : 0);
        if (act == 0) continue;
        color[e] += act * delta;
      }
    }

    if (deactivate) {
      detail::MoatComp& c = comps.at(d1_comp);
      if (c.remaining != 0) throw std::logic_error("deactivation with leftover potential");
      c.active = false;
      run.dead_sets.push_back(c.members);
    } else {
      const Edge& e = edges[d2_edge];
      int cu = dsu.find(e.u), cv = dsu.find(e.v);
      if (color[d2_edge] != e.weight) throw std::logic_error("merge on a loose edge");
      detail::MoatComp merged;
      merged.members.resize(comps.at(cu).members.size() + comps.at(cv).members.size());
      std::merge(comps.at(cu).members.begin(), comps.at(cu).members.end(),
                 comps.at(cv).members.begin(), comps.at(cv).members.end(),
                 merged.members.begin());
      merged.has_root = comps.at(cu).has_root || comps.at(cv).has_root;
      if (!merged.has_root)
        merged.remaining = comps.at(cu).remaining + comps.at(cv).remaining;
      merged.active = true;
      comps.erase(cu);
      comps.erase(cv);
      dsu.unite(cu, cv);
      comps.emplace(dsu.find(cu), std::move(merged));
      run.forest_edges.push_back(d2_edge);
      --comp_count;
    }
  }

  std::set<int> dead;
  for (const auto& s : run.dead_sets) dead.insert(s.begin(), s.end());
  run.dead_vertices.assign(dead.begin(), dead.end());

  // Pruning. Historical sets are laminar, so every dead set is either fully
  // present or fully removed at any point of the peeling.
  std::vector<bool> present(n + 1, true);
  std::vector<int> tree_edges = run.forest_edges;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = run.dead_sets.rbegin(); it != run.dead_sets.rend(); ++it) {
      const std::vector<int>& s = *it;
      bool all_present = true;
      for (int v : s)
        if (!present[v]) {
          all_present = false;
          break;
        }
      if (!all_present) continue;
      auto in_s = [&](int v) {
        return std::binary_search(s.begin(), s.end(), v);
      };
      int cut = 0;
      for (int e : tree_edges)
        if (in_s(edges[e].u) != in_s(edges[e].v)) ++cut;
      if (cut != 1) continue;
      for (int v : s) present[v] = false;
      std::vector<int> kept;
      for (int e : tree_edges)
        if (!in_s(edges[e].u) && !in_s(edges[e].v)) kept.push_back(e);
      tree_edges = std::move(kept);
      changed = true;
    }
  }

  std::vector<int> tree_vertices;
  for (int v = 1; v <= n; ++v)
    if (present[v]) tree_vertices.push_back(v);
  run.tree = evaluate_cost(tree_edges, tree_vertices, inst);
  return run;
}

/** Cost of the pruned tree re-priced against the unscaled penalties. */
inline Rat gw_cost(const MoatRun& run, const std::vector<Penalty>& original_penalties) {
  Rat total = run.tree.edge_cost;
  for (int v = 1; v <= run.inst.vertex_count; ++v) {
    if (std::binary_search(run.tree.tree_vertices.begin(),
                           run.tree.tree_vertices.end(), v))
      continue;
    total += original_penalties.at(v).finite_value();
  }
  return total;
}

/** Re-derives the duration aggregates from the recorded history and evaluates
 *  the run's structural guarantees against them. Returns human-readable
 *  descriptors for everything that fails; an empty list means the run is
 *  internally consistent and all bounds hold. */
inline std::vector<std::string> replay_check(const MoatRun& run,
                                             const PcstInstance& inst) {
  std::vector<std::string> bad;
  if (!(run.inst == inst)) {
    bad.push_back("run was produced from a different instance");
    return bad;
  }
  const int n = inst.vertex_count;

  std::vector<Rat> yv(n + 1, Rat(0));
  std::map<std::vector<int>, Rat> ysets;
  for (const ColoringSegment& seg : run.history) {
    if (seg.duration <= 0) bad.push_back("history: nonpositive segment duration");
    if (!std::binary_search(seg.set.begin(), seg.set.end(), seg.charged_vertex))
      bad.push_back("history: charged vertex outside its set");
    yv.at(seg.charged_vertex) += seg.duration;
    ysets[seg.set] += seg.duration;
  }
  for (int v = 1; v <= n; ++v)
    if (yv[v] != run.y_v.at(v))
      bad.push_back("history does not reproduce y_v at vertex " + std::to_string(v));
  if (ysets != run.y_sets) bad.push_back("history does not reproduce y_sets");

  auto in_tree = [&](int v) {
    return std::binary_search(run.tree.tree_vertices.begin(),
                              run.tree.tree_vertices.end(), v);
  };
  auto in_dead = [&](int v) {
    return std::binary_search(run.dead_vertices.begin(), run.dead_vertices.end(), v);
  };

  if (static_cast<int>(run.forest_edges.size()) != n - 1 ||
      !detail::is_connected(n, [&] {
        std::vector<Edge> fe;
        for (int e : run.forest_edges) fe.push_back(inst.edges[e]);
        return fe;
      }()))
    bad.push_back("forest is not a spanning tree");
  for (int e : run.tree.tree_edges)
    if (std::find(run.forest_edges.begin(), run.forest_edges.end(), e) ==
        run.forest_edges.end())
      bad.push_back("tree edge outside the forest");

  // Full coloring: the pruned tree's weight equals the total boundary
  // coloring it received.
  Rat colored;
  for (const auto& [s, y] : ysets) {
    auto in_s = [&](int v) { return std::binary_search(s.begin(), s.end(), v); };
    int cut = 0;
    for (int e : run.tree.tree_edges)
      if (in_s(inst.edges[e].u) != in_s(inst.edges[e].v)) ++cut;
    colored += y * cut;
  }
  if (colored != run.tree.edge_cost)
    bad.push_back("tree is not completely colored");

  Rat tree_dual;  // total duration charged to non-root tree vertices
  for (int v = 1; v <= n; ++v)
    if (v != inst.root && in_tree(v)) tree_dual += yv[v];
  if (run.tree.edge_cost > 2 * tree_dual)
    bad.push_back("tree weight exceeds twice its dual mass");

  for (int v = 1; v <= n; ++v) {
    if (v == inst.root) continue;
    if (yv[v] > inst.penalties[v].value)
      bad.push_back("vertex " + std::to_string(v) + " charged beyond its potential");
    if (in_dead(v) && yv[v] != inst.penalties[v].value)
      bad.push_back("dead vertex " + std::to_string(v) + " not fully charged");
  }

  for (int v = 1; v <= n; ++v)
    if (!in_tree(v) && !in_dead(v))
      bad.push_back("pruned vertex " + std::to_string(v) + " is not dead");

  Rat outside_dual;
  for (int v = 1; v <= n; ++v)
    if (!in_tree(v)) outside_dual += yv[v];
  if (run.tree.total_cost > 2 * tree_dual + outside_dual)
    bad.push_back("run cost exceeds its dual bound");

  return bad;
}

}  // namespace pcst
