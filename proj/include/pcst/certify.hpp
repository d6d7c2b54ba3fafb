#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pcst/instance.hpp"
#include "pcst/iterate.hpp"
#include "pcst/moat.hpp"
#include "pcst/steiner.hpp"
#include "pcst/stp.hpp"

namespace pcst {

/** Twelve-significant-digit rational approximation of ln 4. */
inline Rat ln4_rational() { return Rat(Int("138629436112"), Int("100000000000")); }

/** Exact optimum by enumerating every root-containing vertex subset with a
 *  connected induced subgraph and taking its induced minimum spanning tree.
 *  Capped at 16 vertices. Cost ties go to the lexicographically smallest
 *  vertex set; the spanning tree itself is fixed by a deterministic
 *  ascending-(weight, id) edge order. */
inline Solution oracle_pcst(const PcstInstance& inst) {
  inst.validate();
  const int n = inst.vertex_count;
  if (n > 16) throw std::invalid_argument("oracle capped at 16 vertices");

  std::vector<int> by_weight(inst.edges.size());
  for (std::size_t i = 0; i < by_weight.size(); ++i) by_weight[i] = static_cast<int>(i);
  std::sort(by_weight.begin(), by_weight.end(), [&](int a, int b) {
    if (inst.edges[a].weight != inst.edges[b].weight)
      return inst.edges[a].weight < inst.edges[b].weight;
    return a < b;
  });

  std::optional<Rat> best_cost;
  std::vector<int> best_vertices, best_edges;

  const unsigned root_bit = 1u << (inst.root - 1);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (!(mask & root_bit)) continue;
    auto in_s = [&](int v) { return (mask >> (v - 1)) & 1u; };

    detail::Dsu dsu(n);
    int comps = std::popcount(mask);
    std::vector<int> mst;
    Rat mst_cost;
    for (int e : by_weight) {
      if (!in_s(inst.edges[e].u) || !in_s(inst.edges[e].v)) continue;
      if (dsu.unite(inst.edges[e].u, inst.edges[e].v)) {
        mst.push_back(e);
        mst_cost += inst.edges[e].weight;
        --comps;
      }
    }
    if (comps != 1) continue;  // induced subgraph disconnected

    Rat cost = mst_cost;
    std::vector<int> vertices;
    for (int v = 1; v <= n; ++v) {
      if (in_s(v))
        vertices.push_back(v);
      else
        cost += inst.penalties[v].finite_value();
    }
    if (!best_cost || cost < *best_cost ||
        (cost == *best_cost && vertices < best_vertices)) {
      best_cost = cost;
      best_vertices = std::move(vertices);
      best_edges = std::move(mst);
    }
  }
  return evaluate_cost(best_edges, best_vertices, inst);
}

/** Duration masses of the scaled run split by the four vertex classes
 *  (optimal-tree membership crossed with deactivation), the root-connectivity
 *  refinement of the two deactivated classes, and the single/multi cut split
 *  of the deactivated optimal-tree mass. */
struct DecompStats {
  Rat r_A, r_B, r_C, r_D;
  Rat r_Bp, r_Bz;  // deactivated opt-tree mass inside / outside the grown tree
  Rat r_Dp, r_Dz;
  Rat b1, b2;  // segments cutting exactly one / more than one opt-tree edge
};

inline DecompStats decompose(const PcstInstance& inst, const MoatRun& run,
                             const Solution& opt) {
  if (fingerprint_graph(run.inst) != fingerprint_graph(inst))
    throw std::invalid_argument("run and instance graphs do not match");

  auto member = [](const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
  };

  DecompStats st;
  std::vector<bool> in_b(inst.vertex_count + 1, false);
  for (int v = 1; v <= inst.vertex_count; ++v) {
    if (v == inst.root) continue;
    bool dead = member(run.dead_vertices, v);
    bool in_opt = member(opt.tree_vertices, v);
    bool in_gw = member(run.tree.tree_vertices, v);
    const Rat& y = run.y_v.at(v);
    if (in_opt && !dead) {
      st.r_A += y;
    } else if (in_opt && dead) {
      st.r_B += y;
      in_b[v] = true;
      (in_gw ? st.r_Bp : st.r_Bz) += y;
    } else if (!in_opt && !dead) {
      st.r_C += y;
    } else {
      st.r_D += y;
      (in_gw ? st.r_Dp : st.r_Dz) += y;
    }
  }

  for (const ColoringSegment& seg : run.history) {
    if (!in_b[seg.charged_vertex]) continue;
    auto in_s = [&](int v) {
      return std::binary_search(seg.set.begin(), seg.set.end(), v);
    };
    int cut = 0;
    for (int e : opt.tree_edges)
      if (in_s(inst.edges[e].u) != in_s(inst.edges[e].v)) ++cut;
    if (cut == 0)
      throw std::logic_error("deactivated opt-tree set with no boundary edge");
    (cut == 1 ? st.b1 : st.b2) += seg.duration;
  }
  return st;
}

/** Evaluates every instance-checkable inequality of the analysis against
 *  exact oracle values: the scaled dual-vs-penalty bound, two lower bounds on
 *  the optimum, the growth-phase and Steiner-arm upper bounds, the exact
 *  Steiner tree comparison, the residual-instance bound, and the end-to-end
 *  factor. Violations come back as descriptors; expected empty. */
inline std::vector<std::string> check_lemmas(const PcstInstance& inst,
                                             const MoatRun& run, const Solution& opt,
                                             const DecompStats& stats, const Rat& beta,
                                             const SteinerSolver& solver,
                                             const Rat& alpha) {
  std::vector<std::string> bad;
  if (fingerprint_graph(run.inst) != fingerprint_graph(inst)) {
    bad.push_back("run and instance graphs do not match");
    return bad;
  }

  auto member = [](const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
  };

  for (int v = 1; v <= inst.vertex_count; ++v) {
    if (v == inst.root) continue;
    Rat scaled_dual = beta * run.y_v.at(v);
    const Rat& pen = inst.penalties[v].value;
    if (scaled_dual > pen)
      bad.push_back("scaled dual above penalty at vertex " + std::to_string(v));
    if (member(run.dead_vertices, v) && scaled_dual != pen)
      bad.push_back("dead vertex " + std::to_string(v) +
                    " not fully charged under scaling");
  }

  if (opt.total_cost < opt.edge_cost + beta * (stats.r_C + stats.r_D))
    bad.push_back("optimum below its tree-plus-outside lower bound");

  if (opt.total_cost <
      stats.r_A + stats.b1 + 2 * stats.b2 + beta * (stats.r_C + stats.r_D))
    bad.push_back("optimum below its duration lower bound");

  Rat cost_gw = gw_cost(run, inst.penalties);
  if (cost_gw > 2 * (stats.r_A + stats.r_B + stats.r_C + stats.r_D))
    bad.push_back("growth-phase cost above its duration bound");

  std::vector<int> live;
  for (int v = 1; v <= inst.vertex_count; ++v)
    if (!member(run.dead_vertices, v)) live.push_back(v);

  SteinerTree st_arm = steiner_tree(solver, inst, live);
  Solution st_sol = evaluate_cost(st_arm.edges, st_arm.vertices, inst);
  Rat min_steiner = solver.kind == SteinerKind::EXACT_DP
                        ? st_arm.cost
                        : steiner_tree(SteinerSolver::exact(), inst, live).cost;

  if (st_sol.total_cost > solver.declared_factor * min_steiner +
                              beta * (stats.r_B + stats.r_D))
    bad.push_back("steiner arm above its cost bound");

  if (min_steiner > opt.edge_cost + 2 * (stats.r_C + stats.r_D))
    bad.push_back("exact steiner tree above its optimal-tree bound");

  PcstInstance rest = inst;
  for (int v : run.dead_vertices) rest.penalties[v] = Penalty::fin(Rat(0));
  Solution rest_opt = oracle_pcst(rest);
  if (rest_opt.total_cost > opt.total_cost - beta * stats.r_D - stats.b1)
    bad.push_back("residual optimum above its bound");

  auto [pipeline, trace] = ipcst(inst, beta, solver, false);
  (void)trace;
  if (pipeline.total_cost > alpha * opt.total_cost)
    bad.push_back("pipeline exceeded its target factor");

  return bad;
}

/** Parameter point of the five-inequality weighting system. */
struct ConstraintSystem {
  Rat p, alpha, beta;
  Rat w_gw, w_st, w_it;

  void validate() const {
    if (w_gw < 0 || w_st < 0 || w_it < 0)
      throw std::invalid_argument("negative solution weight");
    if (w_gw + w_st + w_it != 1)
      throw std::invalid_argument("solution weights must sum to 1");
    if (p < 1 || p > alpha || alpha > 2)
      throw std::invalid_argument("need 1 <= p <= alpha <= 2");
    if (beta <= 0 || beta > 2) throw std::invalid_argument("need 0 < beta <= 2");
  }
};

namespace detail {

/** Per-inequality coefficients of (w_gw, w_st, w_it). */
inline std::array<std::array<Rat, 3>, 5> system_coefficients(const Rat& p,
                                                             const Rat& alpha,
                                                             const Rat& beta) {
  return {{
      {2 - alpha, p - alpha, Rat(0)},
      {2 - alpha, p + beta - alpha, beta - alpha},
      {2 - 2 * alpha, 2 * p + beta - 2 * alpha, beta},
      {2 - alpha * beta, 2 * p - alpha * beta, Rat(0)},
      {2 - alpha * beta, 2 * p + beta - alpha * beta, beta - alpha * beta},
  }};
}

}  // namespace detail

/** The five signed left-hand sides; the point is feasible iff all are <= 0. */
inline std::array<Rat, 5> feasible(const ConstraintSystem& cs) {
  cs.validate();
  auto co = detail::system_coefficients(cs.p, cs.alpha, cs.beta);
  std::array<Rat, 5> slack;
  for (int i = 0; i < 5; ++i)
    slack[i] = co[i][0] * cs.w_gw + co[i][1] * cs.w_st + co[i][2] * cs.w_it;
  return slack;
}

/** Searches the weight simplex for a point satisfying all five inequalities
 *  at the given parameters; the polygon is small enough to check by
 *  enumerating half-plane intersections exactly. */
inline std::optional<std::array<Rat, 3>> feasible_weights(const Rat& alpha,
                                                          const Rat& beta,
                                                          const Rat& p) {
  auto co = detail::system_coefficients(p, alpha, beta);
  // Substitute w_it = 1 - g - s: rows of a*g + b*s + c <= 0.
  std::vector<std::array<Rat, 3>> hp;
  for (const auto& row : co)
    hp.push_back({row[0] - row[2], row[1] - row[2], row[2]});
  hp.push_back({Rat(-1), Rat(0), Rat(0)});
  hp.push_back({Rat(0), Rat(-1), Rat(0)});
  hp.push_back({Rat(1), Rat(1), Rat(-1)});

  for (std::size_t i = 0; i < hp.size(); ++i)
    for (std::size_t j = i + 1; j < hp.size(); ++j) {
      Rat det = hp[i][0] * hp[j][1] - hp[j][0] * hp[i][1];
      if (det == 0) continue;
      Rat g = (-hp[i][2] * hp[j][1] + hp[j][2] * hp[i][1]) / det;
      Rat s = (-hp[i][0] * hp[j][2] + hp[j][0] * hp[i][2]) / det;
      bool ok = true;
      for (const auto& row : hp)
        if (row[0] * g + row[1] * s + row[2] > 0) {
          ok = false;
          break;
        }
      if (ok) return std::array<Rat, 3>{g, s, 1 - g - s};
    }
  return std::nullopt;
}

struct MinAlphaResult {
  Rat alpha;
  Rat beta;                   // witness divisor
  std::array<Rat, 3> weights;  // witness weights (gw, st, it)
};

namespace detail {

inline std::optional<std::pair<Rat, std::array<Rat, 3>>> witness_at(const Rat& alpha,
                                                                    const Rat& p) {
  for (int k = 1; k <= 2000; ++k) {
    Rat beta(k, 1000);
    if (auto w = feasible_weights(alpha, beta, p))
      return std::make_pair(beta, *w);
  }
  return std::nullopt;
}

}  // namespace detail

/** Least factor alpha (within tolerance) for which some divisor beta on a
 *  millistep grid over (0, 2] and some weight triple satisfy the system, via
 *  bisection over [p, 2]. alpha = 2 is always feasible through the pure
 *  growth-phase corner. */
inline MinAlphaResult min_alpha(const Rat& p, const Rat& tolerance) {
  if (p < 1 || p > 2) throw std::invalid_argument("need 1 <= p <= 2");
  if (tolerance <= 0) throw std::invalid_argument("tolerance must be positive");

  if (auto low = detail::witness_at(p, p))
    return {p, low->first, low->second};

  Rat lo = p, hi = Rat(2);
  auto at_two = detail::witness_at(Rat(2), p);
  if (!at_two) throw std::logic_error("factor 2 must be feasible");
  std::pair<Rat, std::array<Rat, 3>> witness = *at_two;

  while (hi - lo > tolerance) {
    Rat mid = (lo + hi) / 2;
    if (auto w = detail::witness_at(mid, p)) {
      hi = mid;
      witness = *w;
    } else {
      lo = mid;
    }
  }
  return {hi, witness.first, witness.second};
}

enum class Sign { Minus, Zero, Plus };

struct SignTable {
  /** Rows: growth-phase, steiner, iterative. Columns follow the five
   *  inequalities in DecompStats order: r_A, b1, b2, r_C, r_D. */
  std::array<std::array<Sign, 5>, 3> signs;
  /** Deviations from the expected pattern (one wildcard cell excluded). */
  std::vector<std::string> mismatches;
};

/** Signs of the fifteen per-solution coefficients in the valid window
 *  1 < p < alpha < 1.8, 2/alpha <= beta <= alpha. */
inline SignTable sign_table(const ConstraintSystem& cs) {
  if (cs.p <= 1 || cs.alpha <= cs.p || cs.alpha >= Rat(18, 10))
    throw std::invalid_argument("need 1 < p < alpha < 1.8");
  if (cs.beta * cs.alpha < 2 || cs.beta > cs.alpha)
    throw std::invalid_argument("need 2/alpha <= beta <= alpha");

  auto co = detail::system_coefficients(cs.p, cs.alpha, cs.beta);
  SignTable out;
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 5; ++col) {
      const Rat& c = co[col][row];
      out.signs[row][col] = c < 0 ? Sign::Minus : (c == 0 ? Sign::Zero : Sign::Plus);
    }

  static const char* kRowNames[3] = {"GW", "ST", "IT"};
  static const char* kColNames[5] = {"r_A", "b1", "b2", "r_C", "r_D"};
  const Sign P = Sign::Plus, M = Sign::Minus, Z = Sign::Zero;
  const std::array<std::array<Sign, 5>, 3> expected = {{
      {P, P, M, M, M},
      {M, P, P, P, P},  // the (ST, r_C) cell is a wildcard, see below
      {Z, M, P, Z, M},
  }};
  auto show = [](Sign s) { return s == Sign::Plus ? "+" : (s == Sign::Minus ? "-" : "0"); };
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 5; ++col) {
      if (row == 1 && col == 3) continue;  // parameter-dependent either way
      if (out.signs[row][col] != expected[row][col])
        out.mismatches.push_back(std::string(kRowNames[row]) + "/" + kColNames[col] +
                                 ": expected " + show(expected[row][col]) + ", got " +
                                 show(out.signs[row][col]));
    }
  return out;
}

}  // namespace pcst
