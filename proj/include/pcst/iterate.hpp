#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pcst/instance.hpp"
#include "pcst/moat.hpp"
#include "pcst/steiner.hpp"

namespace pcst {

/** The scaling divisor must stay in (0, 2]; larger values void the guarantee
 *  and are only allowed under an explicit override. */
struct BetaRangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IterLevel {
  Rat cost_gw;
  Rat cost_st;
  std::optional<Rat> cost_it;  // absent when the recursion stopped here
  std::vector<int> dead;       // vertices deactivated at this level, ascending
  std::string chosen;          // "GW", "ST", or "IT"
  bool mst2_fallback = false;  // exact solver overflowed, heuristic used
};

struct IterTrace {
  int depth = 0;  // number of recursive descents, i.e. levels - 1
  std::vector<IterLevel> levels;
  Rat beta;
  Rat solver_p;
};

namespace detail {

inline std::pair<Solution, std::vector<IterLevel>> ipcst_level(
    const PcstInstance& inst, const Rat& beta, const SteinerSolver& solver) {
  MoatRun run = run_gw(scale_penalties(inst, beta));
  Solution gw_sol =
      evaluate_cost(run.tree.tree_edges, run.tree.tree_vertices, inst);

  const std::vector<int>& dead = run.dead_vertices;
  std::vector<int> live;
  for (int v = 1; v <= inst.vertex_count; ++v)
    if (!std::binary_search(dead.begin(), dead.end(), v)) live.push_back(v);

  IterLevel level;
  level.dead = dead;

  SteinerTree st;
  try {
    st = steiner_tree(solver, inst, live);
  } catch (const SteinerCapacityError&) {
    st = steiner_tree(SteinerSolver::mst2(), inst, live);
    level.mst2_fallback = true;
  }
  Solution st_sol = evaluate_cost(st.edges, st.vertices, inst);

  level.cost_gw = gw_sol.total_cost;
  level.cost_st = st_sol.total_cost;

  Rat dead_penalty;
  for (int v : dead) dead_penalty += inst.penalties[v].finite_value();

  if (dead_penalty == 0) {
    bool pick_gw = gw_sol.total_cost <= st_sol.total_cost;
    level.chosen = pick_gw ? "GW" : "ST";
    std::vector<IterLevel> levels;
    levels.push_back(std::move(level));
    return {pick_gw ? std::move(gw_sol) : std::move(st_sol), std::move(levels)};
  }

  PcstInstance rest = inst;
  for (int v : dead) rest.penalties[v] = Penalty::fin(Rat(0));
  auto [inner, inner_levels] = ipcst_level(rest, beta, solver);
  Solution it_sol =
      evaluate_cost(inner.tree_edges, inner.tree_vertices, inst);
  level.cost_it = it_sol.total_cost;

  Solution* best = &gw_sol;
  level.chosen = "GW";
  if (st_sol.total_cost < best->total_cost) {
    best = &st_sol;
    level.chosen = "ST";
  }
  if (it_sol.total_cost < best->total_cost) {
    best = &it_sol;
    level.chosen = "IT";
  }

  std::vector<IterLevel> levels;
  levels.push_back(std::move(level));
  for (IterLevel& l : inner_levels) levels.push_back(std::move(l));
  return {std::move(*best), std::move(levels)};
}

}  // namespace detail

/** Best-of-three driver: solve the instance with penalties divided by beta,
 *  solve the Steiner problem on the vertices that never deactivated, and, as
 *  long as deactivated vertices still carry penalty, recurse with those
 *  penalties zeroed, re-pricing the recursive tree at this level. Returns the
 *  cheapest candidate (ties: GW, then ST, then IT) and the level-by-level
 *  trace. */
inline std::pair<Solution, IterTrace> ipcst(const PcstInstance& inst, const Rat& beta,
                                            const SteinerSolver& solver,
                                            bool allow_beta_gt2 = false) {
  inst.validate();
  if (beta <= 0) throw BetaRangeError("beta must be positive");
  if (beta > 2 && !allow_beta_gt2)
    throw BetaRangeError("beta > 2 voids the approximation guarantee; "
                         "pass the explicit override to run anyway");

  auto [sol, levels] = detail::ipcst_level(inst, beta, solver);
  IterTrace trace;
  trace.depth = static_cast<int>(levels.size()) - 1;
  trace.levels = std::move(levels);
  trace.beta = beta;
  trace.solver_p = solver.declared_factor;
  if (trace.depth + 1 > inst.vertex_count)
    throw std::logic_error("recursion exceeded the vertex count");
  return {std::move(sol), std::move(trace)};
}

}  // namespace pcst
