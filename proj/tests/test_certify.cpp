#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include <pcst/pcst.hpp>

#include <cmath>

using namespace pcst;

namespace {

const Rat kAlpha(8997, 5000);  // 1.7994
const Rat kBeta(313, 250);     // 1.252

ConstraintSystem published_point() {
  return ConstraintSystem{ln4_rational(), kAlpha,         kBeta,
                          Rat(77, 200),   Rat(187, 1000), Rat(107, 250)};
}

}  // namespace

TEST_CASE("ln4_rational pins twelve digits") {
  CHECK(ln4_rational() == Rat(Int("138629436112"), Int("100000000000")));
  CHECK(std::abs(rat_double(ln4_rational()) - std::log(4.0)) < 1e-11);
}

TEST_CASE("oracle agrees with the edge-subset reference") {
  for (int i = 0; i < 60; ++i) {
    PcstInstance inst = gen_random(2 + (i % 5), Rat(1, 2), 10, 10, 500 + i);
    Solution opt = oracle_pcst(inst);
    CAPTURE(fingerprint(inst));
    CHECK(opt.total_cost == refs::pcst_by_edge_subsets(inst));
    CHECK(opt.tree_edges.size() + 1 == opt.tree_vertices.size());
    CHECK(std::binary_search(opt.tree_vertices.begin(), opt.tree_vertices.end(),
                             inst.root));
  }
}

TEST_CASE("oracle solves the star family exactly") {
  for (int n = 2; n <= 6; ++n)
    CHECK(oracle_pcst(gen_star(n, Rat(2, n - 1))).total_cost == Rat(n));
}

TEST_CASE("oracle ties break toward the smallest vertex set") {
  PcstInstance inst;
  inst.vertex_count = 2;
  inst.root = 1;
  inst.edges = {Edge{1, 2, Rat(2), false}};
  inst.penalties = {Penalty::fin(Rat(0)), Penalty::inf(), Penalty::fin(Rat(2))};
  inst.validate();

  Solution opt = oracle_pcst(inst);
  CHECK(opt.total_cost == Rat(2));
  CHECK(opt.tree_vertices == std::vector<int>{1});
}

TEST_CASE("oracle handles the trivial instance and enforces its cap") {
  PcstInstance lone = gen_random(1, Rat(1, 2), 10, 10, 3);
  CHECK(oracle_pcst(lone).total_cost == Rat(0));

  PcstInstance big = gen_random(17, Rat(1, 2), 5, 5, 1);
  CHECK_THROWS_AS(oracle_pcst(big), std::invalid_argument);
}

TEST_CASE("decompose splits the star run duration mass") {
  PcstInstance star = gen_star(3, Rat(3, 5));
  MoatRun run = run_gw(scale_penalties(star, Rat(16, 5)));
  Solution opt = oracle_pcst(star);
  REQUIRE(opt.total_cost == Rat(3));
  REQUIRE(opt.tree_vertices == std::vector<int>{1, 2, 3, 4});

  DecompStats st = decompose(star, run, opt);
  CHECK(st.r_A == Rat(0));
  CHECK(st.r_B == Rat(15, 8));
  CHECK(st.r_Bp == Rat(0));
  CHECK(st.r_Bz == Rat(15, 8));
  CHECK(st.r_C == Rat(0));
  CHECK(st.r_D == Rat(0));
  CHECK(st.r_Dp == Rat(0));
  CHECK(st.r_Dz == Rat(0));
  CHECK(st.b1 == Rat(15, 8));  // each dead leaf set cuts one star edge
  CHECK(st.b2 == Rat(0));
}

TEST_CASE("decompose refuses a run from a different graph") {
  PcstInstance star = gen_star(3, Rat(3, 5));
  PcstInstance other = gen_random(4, Rat(1, 2), 10, 10, 8);
  MoatRun run = run_gw(scale_penalties(other, kBeta));
  CHECK_THROWS_AS(decompose(star, run, oracle_pcst(star)), std::invalid_argument);
}

TEST_CASE("decompose aggregates are internally consistent on the corpus") {
  for (const PcstInstance& inst : refs::corpus(40)) {
    MoatRun run = run_gw(scale_penalties(inst, kBeta));
    Solution opt = oracle_pcst(inst);
    DecompStats st = decompose(inst, run, opt);

    Rat total;
    for (int v = 1; v <= inst.vertex_count; ++v)
      if (v != inst.root) total += run.y_v[v];
    CAPTURE(fingerprint(inst));
    CHECK(st.r_A + st.r_B + st.r_C + st.r_D == total);
    CHECK(st.r_Bp + st.r_Bz == st.r_B);
    CHECK(st.r_Dp + st.r_Dz == st.r_D);
    CHECK(st.b1 + st.b2 == st.r_B);  // every dead opt-tree duration lands in a bin
  }
}

TEST_CASE("check_lemmas passes on the star and flags a corrupted aggregate") {
  PcstInstance star = gen_star(3, Rat(3, 5));
  MoatRun run = run_gw(scale_penalties(star, kBeta));
  Solution opt = oracle_pcst(star);
  DecompStats st = decompose(star, run, opt);

  CHECK(check_lemmas(star, run, opt, st, kBeta, SteinerSolver::exact(), kAlpha)
            .empty());

  DecompStats corrupt = st;
  corrupt.b2 += 1;
  std::vector<std::string> bad =
      check_lemmas(star, run, opt, corrupt, kBeta, SteinerSolver::exact(), kAlpha);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "optimum below its duration lower bound");

  PcstInstance other = gen_random(4, Rat(1, 2), 10, 10, 8);
  MoatRun foreign = run_gw(scale_penalties(other, kBeta));
  bad = check_lemmas(star, foreign, opt, st, kBeta, SteinerSolver::exact(), kAlpha);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "run and instance graphs do not match");
}

TEST_CASE("check_lemmas is clean across the corpus with both solvers") {
  for (const PcstInstance& inst : refs::corpus(20)) {
    MoatRun run = run_gw(scale_penalties(inst, kBeta));
    Solution opt = oracle_pcst(inst);
    DecompStats st = decompose(inst, run, opt);
    CAPTURE(fingerprint(inst));
    CHECK(check_lemmas(inst, run, opt, st, kBeta, SteinerSolver::exact(), kAlpha)
              .empty());
    CHECK(check_lemmas(inst, run, opt, st, kBeta, SteinerSolver::mst2(), Rat(2))
              .empty());
  }
}

TEST_CASE("constraint system points validate their ranges") {
  ConstraintSystem cs = published_point();
  CHECK_NOTHROW(cs.validate());

  ConstraintSystem bad = cs;
  bad.w_gw = Rat(-1, 10);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cs;
  bad.w_it += Rat(1, 100);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // weights off the simplex

  bad = cs;
  bad.p = Rat(1, 2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cs;
  bad.alpha = Rat(5, 2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cs;
  bad.beta = Rat(21, 10);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cs;
  bad.p = bad.alpha + 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("the published point satisfies all five inequalities") {
  std::array<Rat, 5> slack = feasible(published_point());

  CHECK(slack[0] == Rat(Int("-123465441"), Int("6250000000000")));
  CHECK(slack[1] == Rat(Int("-1143465441"), Int("6250000000000")));
  CHECK(slack[2] == Rat(Int("-185965441"), Int("3125000000000")));
  CHECK(slack[3] == Rat(Int("-485695441"), Int("3125000000000")));
  CHECK(slack[4] == Rat(Int("-607483465441"), Int("3125000000000")));

  int tight = 0;
  for (const Rat& s : slack) {
    CHECK(s <= 0);
    if (abs(s) < Rat(1, 2000)) ++tight;
  }
  CHECK(tight == 4);
}

TEST_CASE("feasible_weights finds a witness exactly when one exists") {
  auto w = feasible_weights(kAlpha, kBeta, ln4_rational());
  REQUIRE(w.has_value());
  ConstraintSystem cs{ln4_rational(), kAlpha, kBeta, (*w)[0], (*w)[1], (*w)[2]};
  for (const Rat& s : feasible(cs)) CHECK(s <= 0);

  CHECK_FALSE(feasible_weights(Rat(17, 10), kBeta, ln4_rational()).has_value());
}

TEST_CASE("min_alpha hits the known landmarks") {
  MinAlphaResult two = min_alpha(Rat(2), Rat(1, 10000));
  CHECK(two.alpha == Rat(2));
  CHECK(two.beta == Rat(1));  // no divisor below 1 admits any weights at p = 2
  ConstraintSystem cs{Rat(2),         two.alpha,      two.beta,
                      two.weights[0], two.weights[1], two.weights[2]};
  for (const Rat& s : feasible(cs)) CHECK(s <= 0);

  MinAlphaResult one = min_alpha(Rat(1), Rat(1, 100));
  CHECK(one.alpha > Rat(166, 100));
  CHECK(one.alpha < Rat(169, 100));
  ConstraintSystem cs1{Rat(1),         one.alpha,      one.beta,
                       one.weights[0], one.weights[1], one.weights[2]};
  for (const Rat& s : feasible(cs1)) CHECK(s <= 0);

  MinAlphaResult ln4 = min_alpha(ln4_rational(), Rat(1, 100));
  CHECK(ln4.alpha > Rat(179, 100));
  CHECK(ln4.alpha < Rat(181, 100));

  CHECK_THROWS_AS(min_alpha(Rat(1, 2), Rat(1, 100)), std::invalid_argument);
  CHECK_THROWS_AS(min_alpha(Rat(5, 2), Rat(1, 100)), std::invalid_argument);
  CHECK_THROWS_AS(min_alpha(Rat(1), Rat(0)), std::invalid_argument);
}

TEST_CASE("sign table matches the expected pattern at the published point") {
  SignTable table = sign_table(published_point());
  CHECK(table.mismatches.empty());

  using S = Sign;
  CHECK(table.signs[0] ==
        std::array<S, 5>{S::Plus, S::Plus, S::Minus, S::Minus, S::Minus});
  CHECK(table.signs[1][0] == S::Minus);
  CHECK(table.signs[1][2] == S::Plus);  // the heuristic arm leans on b2
  CHECK(table.signs[2] ==
        std::array<S, 5>{S::Zero, S::Minus, S::Plus, S::Zero, S::Minus});
}

TEST_CASE("sign table rejects points outside its window") {
  ConstraintSystem cs = published_point();

  ConstraintSystem bad = cs;
  bad.p = Rat(1);
  CHECK_THROWS_AS(sign_table(bad), std::invalid_argument);

  bad = cs;
  bad.alpha = Rat(185, 100);
  CHECK_THROWS_AS(sign_table(bad), std::invalid_argument);

  bad = cs;
  bad.beta = Rat(1);  // below 2/alpha for alpha < 2
  CHECK_THROWS_AS(sign_table(bad), std::invalid_argument);

  bad = cs;
  bad.beta = cs.alpha + Rat(1, 100);
  CHECK_THROWS_AS(sign_table(bad), std::invalid_argument);
}
