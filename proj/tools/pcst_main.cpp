// Command-line frontend: solve / verify / oracle / minalpha / generate.
//
// Exit codes: 0 success, 1 verification violations, 2 unusable input
// (parse errors, bad parameters, capacity overflow), 3 scaling-divisor
// violation, 4 broken internal invariant.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcst/pcst.hpp"

namespace {

using nlohmann::json;
using namespace pcst;

/** Self-contained result of one command; wall time never enters the JSON so
 *  repeated runs stay byte-identical. */
struct RunReport {
  std::string fingerprint;
  std::string command;
  json params = json::object();
  json payload = json::object();
  long long wall_ms = 0;
};

json report_json(const RunReport& r) {
  json out;
  out["command"] = r.command;
  if (!r.fingerprint.empty()) out["instance"] = r.fingerprint;
  if (!r.params.empty()) out["solver"] = r.params;
  for (auto it = r.payload.begin(); it != r.payload.end(); ++it)
    out[it.key()] = it.value();
  return out;
}

std::string dec(const Rat& r) {
  std::ostringstream out;
  out << rat_double(r);
  return out.str();
}

json solution_json(const Solution& sol, const PcstInstance& inst) {
  json edges = json::array();
  for (int e : sol.tree_edges) {
    int u = inst.edges[e].u, v = inst.edges[e].v;
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return {{"edges", edges},
          {"vertices", sol.tree_vertices},
          {"edge_cost", rat_str(sol.edge_cost)},
          {"penalty_cost", rat_str(sol.penalty_cost)},
          {"total_cost", rat_str(sol.total_cost)}};
}

json trace_json(const IterTrace& trace) {
  json levels = json::array();
  for (const IterLevel& l : trace.levels) {
    json entry = {{"cost_gw", rat_str(l.cost_gw)},
                  {"cost_st", rat_str(l.cost_st)},
                  {"dead", l.dead},
                  {"chosen", l.chosen},
                  {"mst2_fallback", l.mst2_fallback}};
    entry["cost_it"] = l.cost_it ? json(rat_str(*l.cost_it)) : json(nullptr);
    levels.push_back(entry);
  }
  return levels;
}

PcstInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::vector<std::string> warnings;
  PcstInstance inst = parse_instance(in, &warnings);
  for (const std::string& w : warnings) std::cerr << path << ": " << w << "\n";
  return inst;
}

SteinerSolver solver_from_name(const std::string& name) {
  if (name == "exact") return SteinerSolver::exact();
  if (name == "mst2") return SteinerSolver::mst2();
  throw std::invalid_argument("unknown steiner solver '" + name + "'");
}

Rat parse_p(const std::string& text) {
  if (text == "ln4") return ln4_rational();
  return parse_rat(text);
}

void print_solution(const Solution& sol, const PcstInstance& inst) {
  std::cout << "tree edges:";
  if (sol.tree_edges.empty()) std::cout << " (none)";
  for (int e : sol.tree_edges) {
    int u = inst.edges[e].u, v = inst.edges[e].v;
    std::cout << " " << std::min(u, v) << "-" << std::max(u, v);
  }
  std::cout << "\ntree vertices:";
  for (int v : sol.tree_vertices) std::cout << " " << v;
  std::cout << "\nedge cost:    " << rat_str(sol.edge_cost) << " (" << dec(sol.edge_cost)
            << ")\n";
  std::cout << "penalty cost: " << rat_str(sol.penalty_cost) << " ("
            << dec(sol.penalty_cost) << ")\n";
  std::cout << "total cost:   " << rat_str(sol.total_cost) << " (" << dec(sol.total_cost)
            << ")\n";
}

void print_trace(const IterTrace& trace) {
  for (std::size_t i = 0; i < trace.levels.size(); ++i) {
    const IterLevel& l = trace.levels[i];
    std::cout << "level " << i << ": gw " << rat_str(l.cost_gw) << ", st "
              << rat_str(l.cost_st);
    if (l.cost_it) std::cout << ", it " << rat_str(*l.cost_it);
    std::cout << ", chose " << l.chosen;
    if (l.mst2_fallback) std::cout << " (exact solver overflowed, used mst2)";
    std::cout << ", dead:";
    if (l.dead.empty()) std::cout << " (none)";
    for (int v : l.dead) std::cout << " " << v;
    std::cout << "\n";
  }
}

int cmd_solve(const std::string& file, const Rat& beta, const SteinerSolver& solver,
              bool all_roots, bool allow_beta_gt2, bool as_json) {
  auto started = std::chrono::steady_clock::now();
  PcstInstance inst = load_instance(file);

  RunReport report;
  report.command = "solve";
  report.fingerprint = fingerprint(inst);
  report.params = {{"beta", rat_str(beta)},
                   {"steiner", solver.kind == SteinerKind::EXACT_DP ? "exact" : "mst2"},
                   {"p", rat_str(solver.declared_factor)}};

  Solution sol;
  IterTrace trace;
  int best_root = inst.root;
  if (all_roots) {
    std::vector<Penalty> base = inst.penalties;
    base[inst.root] = Penalty::fin(Rat(0));
    bool first = true;
    for (int r = 1; r <= inst.vertex_count; ++r) {
      PcstInstance rooted = inst;
      rooted.root = r;
      rooted.penalties = base;
      rooted.penalties[r] = Penalty::inf();
      auto [s, t] = ipcst(rooted, beta, solver, allow_beta_gt2);
      if (first || s.total_cost < sol.total_cost) {
        sol = s;
        trace = t;
        best_root = r;
        first = false;
      }
    }
    report.params["all_roots"] = true;
    report.payload["best_root"] = best_root;
  } else {
    std::tie(sol, trace) = ipcst(inst, beta, solver, allow_beta_gt2);
  }

  report.payload["solution"] = solution_json(sol, inst);
  report.payload["trace"] = trace_json(trace);
  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

  if (as_json) {
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    if (all_roots) std::cout << "best root: " << best_root << "\n";
    print_solution(sol, inst);
    print_trace(trace);
  }
  std::cerr << "elapsed: " << report.wall_ms << " ms\n";
  return 0;
}

int cmd_verify(const std::string& file, const Rat& beta, const SteinerSolver& solver,
               const Rat& alpha, const std::string& corpus_spec, bool inject_corruption,
               bool as_json) {
  auto started = std::chrono::steady_clock::now();
  std::vector<PcstInstance> instances;
  if (!corpus_spec.empty()) {
    int n = 0, count = 0;
    long long seed = 0;
    char c1 = 0, c2 = 0;
    std::istringstream spec_in(corpus_spec);
    if (!(spec_in >> n >> c1 >> count >> c2 >> seed) || c1 != ',' || c2 != ',' ||
        n < 1 || count < 1)
      throw std::invalid_argument("--seed-corpus wants n,count,seed");
    for (int i = 0; i < count; ++i)
      instances.push_back(
          gen_random(n, Rat(1, 2), 10, 10, static_cast<std::uint64_t>(seed) + i));
  } else {
    instances.push_back(load_instance(file));
  }

  RunReport report;
  report.command = "verify";
  report.params = {{"beta", rat_str(beta)},
                   {"steiner", solver.kind == SteinerKind::EXACT_DP ? "exact" : "mst2"},
                   {"alpha", rat_str(alpha)}};

  json detail = json::array();
  int total_violations = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const PcstInstance& inst = instances[i];
    std::vector<std::string> bad;

    MoatRun run = run_gw(scale_penalties(inst, beta));
    for (std::string& d : replay_check(run, run.inst)) bad.push_back("replay: " + d);

    Solution opt = oracle_pcst(inst);
    DecompStats stats = decompose(inst, run, opt);
    // Bump past any slack in the duration bound so the control always trips.
    if (inject_corruption) stats.b2 += opt.total_cost + 1;
    for (std::string& d : check_lemmas(inst, run, opt, stats, beta, solver, alpha))
      bad.push_back("bound: " + d);

    // Differential run with zero-weight root edges onto the optimal tree.
    std::vector<int> targets;
    for (int v : opt.tree_vertices)
      if (v != inst.root) targets.push_back(v);
    MoatRun base = run_gw(inst);
    MoatRun aug = run_gw(augment_with_root_edges(inst, targets));
    for (int v = 1; v <= inst.vertex_count; ++v) {
      if (aug.y_v[v] > base.y_v[v])
        bad.push_back("differential: dual grew at vertex " + std::to_string(v));
    }
    for (int v : targets)
      if (aug.y_v[v] != 0)
        bad.push_back("differential: attached vertex " + std::to_string(v) +
                      " kept dual mass");
    for (int v : aug.dead_vertices)
      if (!std::binary_search(base.dead_vertices.begin(), base.dead_vertices.end(), v))
        bad.push_back("differential: fresh dead vertex " + std::to_string(v));

    total_violations += static_cast<int>(bad.size());
    json entry = {{"fingerprint", fingerprint(inst)}, {"violations", bad}};
    detail.push_back(entry);
    if (!as_json)
      for (const std::string& d : bad)
        std::cout << "instance " << i << " [" << fingerprint(inst) << "]: " << d << "\n";
  }

  report.payload["instances"] = detail;
  report.payload["violation_count"] = total_violations;
  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

  if (as_json)
    std::cout << report_json(report).dump(2) << "\n";
  else
    std::cout << instances.size() << " instance(s), " << total_violations
              << " violation(s)\n";
  std::cerr << "elapsed: " << report.wall_ms << " ms\n";
  return total_violations == 0 ? 0 : 1;
}

int cmd_minalpha(const Rat& p, const Rat& tol, bool as_json) {
  auto started = std::chrono::steady_clock::now();
  MinAlphaResult res = min_alpha(p, tol);
  ConstraintSystem cs{p, res.alpha, res.beta, res.weights[0], res.weights[1],
                      res.weights[2]};
  std::array<Rat, 5> slack = feasible(cs);

  RunReport report;
  report.command = "minalpha";
  report.params = {{"p", rat_str(p)}, {"tol", rat_str(tol)}};
  report.payload = {{"alpha", rat_str(res.alpha)},
                    {"beta", rat_str(res.beta)},
                    {"weights",
                     {rat_str(res.weights[0]), rat_str(res.weights[1]),
                      rat_str(res.weights[2])}}};
  json slacks = json::array();
  for (const Rat& s : slack) slacks.push_back(rat_str(s));
  report.payload["slacks"] = slacks;
  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

  if (as_json) {
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    std::cout << "alpha: " << rat_str(res.alpha) << " (" << dec(res.alpha) << ")\n";
    std::cout << "witness beta: " << rat_str(res.beta) << " (" << dec(res.beta) << ")\n";
    std::cout << "witness weights: gw " << rat_str(res.weights[0]) << " ("
              << dec(res.weights[0]) << "), st " << rat_str(res.weights[1]) << " ("
              << dec(res.weights[1]) << "), it " << rat_str(res.weights[2]) << " ("
              << dec(res.weights[2]) << ")\n";
    static const char* names[5] = {"r_A", "b1", "b2", "r_C", "r_D"};
    for (int i = 0; i < 5; ++i)
      std::cout << "slack " << names[i] << ": " << rat_str(slack[i]) << " ("
                << dec(slack[i]) << ")\n";
  }
  std::cerr << "elapsed: "
            << std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - started)
                   .count()
            << " ms\n";
  return 0;
}

int cmd_oracle(const std::string& file, bool as_json) {
  PcstInstance inst = load_instance(file);
  Solution sol = oracle_pcst(inst);
  if (as_json) {
    RunReport report;
    report.command = "oracle";
    report.fingerprint = fingerprint(inst);
    report.payload["solution"] = solution_json(sol, inst);
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    print_solution(sol, inst);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rooted prize-collecting Steiner tree solver and certifier"};
  app.require_subcommand(1);

  std::string file, beta_text = "1.252", steiner_name = "exact";
  bool all_roots = false, allow_beta_gt2 = false, as_json = false;

  CLI::App* solve = app.add_subcommand("solve", "run the best-of-three pipeline");
  solve->add_option("file", file, "instance file")->required();
  solve->add_option("--beta", beta_text, "penalty scaling divisor")->capture_default_str();
  solve->add_option("--steiner", steiner_name, "exact | mst2")->capture_default_str();
  solve->add_flag("--all-roots", all_roots, "solve the unrooted problem by looping roots");
  solve->add_flag("--allow-beta-gt-2", allow_beta_gt2,
                  "permit divisors above 2 (forfeits the guarantee)");
  solve->add_flag("--json", as_json, "machine-readable output");

  std::string corpus_spec, alpha_text;
  bool inject_corruption = false;
  CLI::App* verify = app.add_subcommand("verify", "run the certification suite");
  verify->add_option("file", file, "instance file");
  verify->add_option("--beta", beta_text, "penalty scaling divisor")->capture_default_str();
  verify->add_option("--steiner", steiner_name, "exact | mst2")->capture_default_str();
  verify->add_option("--alpha", alpha_text,
                     "target factor for the end-to-end check "
                     "(default 1.7994 for exact, 2 for mst2)");
  verify->add_option("--seed-corpus", corpus_spec, "n,count,seed random corpus");
  verify->add_flag("--inject-corruption", inject_corruption,
                   "negative-control hook: corrupt one aggregate before checking");
  verify->add_flag("--json", as_json, "machine-readable output");

  std::string p_text, tol_text = "1/10000";
  CLI::App* minalpha = app.add_subcommand("minalpha", "search the least feasible factor");
  minalpha->add_option("--p", p_text, "steiner subroutine factor (rational or 'ln4')")
      ->required();
  minalpha->add_option("--tol", tol_text, "bisection tolerance")->capture_default_str();
  minalpha->add_flag("--json", as_json, "machine-readable output");

  CLI::App* oracle = app.add_subcommand("oracle", "exact optimum by enumeration");
  oracle->add_option("file", file, "instance file")->required();
  oracle->add_flag("--json", as_json, "machine-readable output");

  CLI::App* generate = app.add_subcommand("generate", "emit an instance file");
  int gen_n = 0, gen_maxw = 10, gen_maxp = 10;
  long long gen_seed = 1;
  std::string gen_eps = "0.6", gen_prob = "0.5";
  CLI::App* gen_star_cmd = generate->add_subcommand("star", "adversarial star family");
  gen_star_cmd->add_option("--n", gen_n, "number of leaves")->required();
  gen_star_cmd->add_option("--eps", gen_eps, "epsilon > 1/(n-1)")->capture_default_str();
  CLI::App* gen_rand_cmd = generate->add_subcommand("random", "connected random graph");
  gen_rand_cmd->add_option("--n", gen_n, "vertex count")->required();
  gen_rand_cmd->add_option("--prob", gen_prob, "edge probability")->capture_default_str();
  gen_rand_cmd->add_option("--max-weight", gen_maxw, "weight bound")->capture_default_str();
  gen_rand_cmd->add_option("--max-penalty", gen_maxp, "penalty bound")->capture_default_str();
  gen_rand_cmd->add_option("--seed", gen_seed, "rng seed")->capture_default_str();
  generate->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Rat beta = parse_rat(beta_text);
    SteinerSolver solver = solver_from_name(steiner_name);
    if (solve->parsed())
      return cmd_solve(file, beta, solver, all_roots, allow_beta_gt2, as_json);
    if (verify->parsed()) {
      if (file.empty() && corpus_spec.empty())
        throw std::invalid_argument("verify needs a file or --seed-corpus");
      Rat alpha = alpha_text.empty()
                      ? (solver.kind == SteinerKind::EXACT_DP ? parse_rat("1.7994")
                                                              : Rat(2))
                      : parse_rat(alpha_text);
      return cmd_verify(file, beta, solver, alpha, corpus_spec, inject_corruption,
                        as_json);
    }
    if (minalpha->parsed()) return cmd_minalpha(parse_p(p_text), parse_rat(tol_text), as_json);
    if (oracle->parsed()) return cmd_oracle(file, as_json);
    if (generate->parsed()) {
      PcstInstance inst = gen_star_cmd->parsed()
                              ? gen_star(gen_n, parse_rat(gen_eps))
                              : gen_random(gen_n, parse_rat(gen_prob), gen_maxw,
                                           gen_maxp, static_cast<std::uint64_t>(gen_seed));
      std::cout << serialize_instance(inst);
      return 0;
    }
  } catch (const BetaRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SteinerCapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
