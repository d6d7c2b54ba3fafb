#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include <pcst/pcst.hpp>

using namespace pcst;

namespace {

PcstInstance triangle() {
  PcstInstance inst;
  inst.vertex_count = 3;
  inst.root = 1;
  inst.edges = {Edge{1, 2, Rat(4), false}, Edge{1, 3, Rat(1), false},
                Edge{2, 3, Rat(2), false}};
  inst.penalties = {Penalty::fin(Rat(0)), Penalty::inf(), Penalty::fin(Rat(5)),
                    Penalty::fin(Rat(3))};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("infinite penalties refuse arithmetic") {
  CHECK(Penalty::fin(Rat(3)).finite_value() == Rat(3));
  CHECK_THROWS_AS(Penalty::inf().finite_value(), std::logic_error);
  CHECK(Penalty::inf() == Penalty::inf());
  CHECK_FALSE(Penalty::inf() == Penalty::fin(Rat(0)));
}

TEST_CASE("validate rejects broken instances") {
  PcstInstance good = triangle();
  CHECK_NOTHROW(good.validate());

  PcstInstance bad = good;
  bad.root = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.edges.push_back(Edge{2, 1, Rat(9), false});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // duplicate pair

  bad = good;
  bad.edges[0].v = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // self-loop

  bad = good;
  bad.edges[0].weight = Rat(-1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.penalties[2] = Penalty::fin(Rat(-2));
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.penalties[1] = Penalty::fin(Rat(7));
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // finite root

  bad = good;
  bad.penalties[3] = Penalty::inf();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // infinite non-root

  bad = good;
  bad.vertex_count = 4;
  bad.penalties.push_back(Penalty::fin(Rat(0)));
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // vertex 4 stranded

  bad = good;
  bad.penalties.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // table size
}

TEST_CASE("gen_star builds the documented family") {
  PcstInstance star = gen_star(3, Rat(3, 5));
  CHECK(star.vertex_count == 4);
  CHECK(star.root == 1);
  REQUIRE(star.edges.size() == 3);
  for (const Edge& e : star.edges) CHECK(e.weight == Rat(1));
  CHECK(star.penalties[2] == Penalty::fin(Rat(0)));
  CHECK(star.penalties[3] == Penalty::fin(Rat(3)));
  CHECK(star.penalties[4] == Penalty::fin(Rat(3)));

  PcstInstance big = gen_star(10, Rat(2, 9));
  CHECK(big.vertex_count == 11);
  CHECK(big.penalties[5] == Penalty::fin(Rat(20, 9)));  // 2(1 + 1/9)

  CHECK_THROWS_AS(gen_star(3, Rat(1, 2)), std::invalid_argument);  // epsilon too small
  CHECK_THROWS_AS(gen_star(1, Rat(1)), std::invalid_argument);
}

TEST_CASE("gen_star optimum is n for small n") {
  for (int n = 2; n <= 6; ++n) {
    PcstInstance star = gen_star(n, Rat(2, n - 1));
    CHECK(refs::pcst_by_edge_subsets(star) == Rat(n));
  }
}

TEST_CASE("gen_random is deterministic and valid") {
  PcstInstance a = gen_random(8, Rat(1, 2), 10, 10, 4242);
  PcstInstance b = gen_random(8, Rat(1, 2), 10, 10, 4242);
  CHECK(a == b);

  PcstInstance c = gen_random(8, Rat(1, 2), 10, 10, 4243);
  CHECK_FALSE(a == c);

  for (const PcstInstance& inst : refs::corpus(40)) {
    CHECK_NOTHROW(inst.validate());
    CHECK(inst.root == 1);
    for (const Edge& e : inst.edges) {
      CHECK(denominator(e.weight) == 1);
      CHECK(e.weight <= 10);
    }
  }

  PcstInstance lone = gen_random(1, Rat(1, 2), 10, 10, 7);
  CHECK(lone.vertex_count == 1);
  CHECK(lone.edges.empty());

  CHECK_THROWS_AS(gen_random(0, Rat(1, 2), 10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_random(3, Rat(3, 2), 10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_random(3, Rat(1, 2), -1, 10, 1), std::invalid_argument);
}

TEST_CASE("gen_random edge probability bounds the density") {
  PcstInstance sparse = gen_random(10, Rat(0), 5, 5, 99);
  CHECK(sparse.edges.size() == 9);  // spanning tree only

  PcstInstance dense = gen_random(10, Rat(1), 5, 5, 99);
  CHECK(dense.edges.size() == 45);  // complete graph
}

TEST_CASE("scale_penalties divides finite penalties only") {
  PcstInstance inst = triangle();
  PcstInstance scaled = scale_penalties(inst, Rat(313, 250));
  CHECK(scaled.penalties[1].infinite);
  CHECK(scaled.penalties[2].value == Rat(5) * Rat(250, 313));
  CHECK(scaled.penalties[3].value == Rat(3) * Rat(250, 313));
  CHECK(scaled.edges == inst.edges);

  CHECK_THROWS_AS(scale_penalties(inst, Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(scale_penalties(inst, Rat(-1)), std::invalid_argument);
}

TEST_CASE("augment_with_root_edges appends marked zero edges") {
  PcstInstance inst = triangle();
  PcstInstance aug = augment_with_root_edges(inst, {3, 2});
  REQUIRE(aug.edges.size() == 5);
  CHECK(aug.edges[3] == Edge{1, 3, Rat(0), true});
  CHECK(aug.edges[4] == Edge{1, 2, Rat(0), true});
  CHECK_NOTHROW(aug.validate());  // parallel pair is allowed via the marker

  CHECK_THROWS_AS(augment_with_root_edges(inst, {1}), std::invalid_argument);
  CHECK_THROWS_AS(augment_with_root_edges(inst, {4}), std::invalid_argument);
}

TEST_CASE("evaluate_cost sums weights and excluded penalties") {
  PcstInstance inst = triangle();

  Solution sol = evaluate_cost({1}, {3, 1}, inst);  // unsorted on purpose
  CHECK(sol.tree_edges == std::vector<int>{1});
  CHECK(sol.tree_vertices == std::vector<int>{1, 3});
  CHECK(sol.edge_cost == Rat(1));
  CHECK(sol.penalty_cost == Rat(5));
  CHECK(sol.total_cost == Rat(6));

  Solution whole = evaluate_cost({1, 2}, {1, 2, 3}, inst);
  CHECK(whole.total_cost == Rat(3));

  Solution alone = evaluate_cost({}, {1}, inst);
  CHECK(alone.total_cost == Rat(8));

  CHECK_THROWS_AS(evaluate_cost({1}, {3}, inst), std::invalid_argument);  // no root

  // Against a different penalty map than the instance's own.
  std::vector<Penalty> zeroed(4, Penalty::fin(Rat(0)));
  zeroed[1] = Penalty::inf();
  CHECK(evaluate_cost({}, {1}, inst, zeroed).total_cost == Rat(0));
}
