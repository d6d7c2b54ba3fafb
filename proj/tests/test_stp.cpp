#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include <pcst/pcst.hpp>

using namespace pcst;

TEST_CASE("parse_instance reads the documented grammar") {
  const char* text =
      "SECTION Graph\n"
      "Nodes 3\n"
      "Edges 3\n"
      "E 1 2 4\n"
      "E 1 3 1\n"
      "E 2 3 2\n"
      "END\n"
      "SECTION Terminals\n"
      "Root 1\n"
      "TP 2 5\n"
      "TP 3 3\n"
      "END\n"
      "EOF\n";
  PcstInstance inst = parse_instance(text);
  CHECK(inst.vertex_count == 3);
  CHECK(inst.root == 1);
  REQUIRE(inst.edges.size() == 3);
  CHECK(inst.edges[0] == Edge{1, 2, Rat(4), false});
  CHECK(inst.penalties[2] == Penalty::fin(Rat(5)));
  CHECK(inst.penalties[3] == Penalty::fin(Rat(3)));
}

TEST_CASE("parser tolerates case, blank lines, and rational weights") {
  const char* text =
      "\n"
      "section graph\n"
      "nodes 2\n"
      "\n"
      "edges 1\n"
      "e 1 2 7/4\n"
      "end\n"
      "SECTION terminals\n"
      "root 2\n"
      "Tp 1 0.5\n"
      "end\n"
      "eof\n";
  PcstInstance inst = parse_instance(text);
  CHECK(inst.root == 2);
  CHECK(inst.edges[0].weight == Rat(7, 4));
  CHECK(inst.penalties[1] == Penalty::fin(Rat(1, 2)));
}

TEST_CASE("unknown sections are skipped with a warning") {
  const char* text =
      "SECTION Comment\n"
      "Name \"whatever\"\n"
      "Creator nobody\n"
      "END\n"
      "SECTION Graph\n"
      "Nodes 2\n"
      "Edges 1\n"
      "E 1 2 1\n"
      "END\n"
      "SECTION Terminals\n"
      "Root 1\n"
      "END\n"
      "EOF\n";
  std::vector<std::string> warnings;
  PcstInstance inst = parse_instance(text, &warnings);
  CHECK(inst.vertex_count == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("Comment") != std::string::npos);
}

TEST_CASE("parser reports the offending line") {
  auto line_of = [](const char* text) {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };

  CHECK(line_of("SECTION Graph\n"
                "Nodes 2\n"
                "Edges 1\n"
                "E 1 x 1\n") == 4);
  CHECK(line_of("garbage\n") == 1);
  CHECK(line_of("SECTION Graph\n"
                "Edges 1\n") == 2);
}

TEST_CASE("parser rejects structural mistakes") {
  CHECK_THROWS_AS(parse_instance("EOF\n"), ParseError);  // no sections
  CHECK_THROWS_AS(parse_instance("SECTION Terminals\nRoot 1\nEND\nEOF\n"), ParseError);

  const char* graph_only =
      "SECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\nEND\n";
  CHECK_THROWS_AS(parse_instance(std::string(graph_only) + "EOF\n"), ParseError);

  std::string base = graph_only;
  CHECK_THROWS_AS(
      parse_instance(base + "SECTION Terminals\nRoot 1\nTP 1 2\nEND\nEOF\n"),
      ParseError);  // TP for the root
  CHECK_THROWS_AS(
      parse_instance(base + "SECTION Terminals\nRoot 1\nTP 2 1\nTP 2 2\nEND\nEOF\n"),
      ParseError);  // duplicate TP
  CHECK_THROWS_AS(
      parse_instance(base + "SECTION Terminals\nRoot 9\nEND\nEOF\n"),
      ParseError);  // root out of range
  CHECK_THROWS_AS(
      parse_instance(base + "SECTION Terminals\nRoot 1\nTP 9 1\nEND\nEOF\n"),
      ParseError);  // TP vertex out of range
  CHECK_THROWS_AS(
      parse_instance(base + "SECTION Terminals\nRoot 1\nTP 2 -1\nEND\nEOF\n"),
      ParseError);  // negative penalty
  CHECK_THROWS_AS(
      parse_instance(base + base + "SECTION Terminals\nRoot 1\nEND\nEOF\n"),
      ParseError);  // duplicate Graph section
  CHECK_THROWS_AS(parse_instance(base + "SECTION Unknown\nnever closed\n"), ParseError);

  // Semantic failure surfaces as line 0: vertex 2 is disconnected.
  try {
    parse_instance(
        "SECTION Graph\nNodes 2\nEdges 0\nEND\n"
        "SECTION Terminals\nRoot 1\nEND\nEOF\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 0);
  }
}

TEST_CASE("serialize and parse are inverse on generated instances") {
  for (const PcstInstance& inst : refs::corpus(25)) {
    PcstInstance again = parse_instance(serialize_instance(inst));
    CHECK(again == inst);
  }
  PcstInstance star = gen_star(5, Rat(1, 2));
  CHECK(parse_instance(serialize_instance(star)) == star);
}

TEST_CASE("fingerprints are stable, hex, and penalty-sensitive") {
  PcstInstance a = gen_random(6, Rat(1, 2), 10, 10, 31);
  std::string fp = fingerprint(a);
  CHECK(fp.size() == 16);
  CHECK(fp.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(fingerprint(a) == fp);

  PcstInstance b = a;
  b.penalties[2].value += 1;
  CHECK(fingerprint(b) != fp);

  // The graph fingerprint ignores penalties, so scaling keeps it fixed.
  CHECK(fingerprint_graph(scale_penalties(a, Rat(313, 250))) == fingerprint_graph(a));
  CHECK(fingerprint_graph(b) == fingerprint_graph(a));

  PcstInstance c = a;
  c.edges[0].weight += 1;
  CHECK(fingerprint_graph(c) != fingerprint_graph(a));
}
