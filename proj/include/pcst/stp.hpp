#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pcst/instance.hpp"
#include "pcst/rational.hpp"

namespace pcst {

/** Syntax error with the 1-based line it was detected on (0 = whole file). */
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline int parse_vertex(const std::string& t, int line) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected vertex id, got '" + t + "'");
  }
}

}  // namespace detail

/** Reads the line-oriented instance format:
 *
 *    SECTION Graph
 *    Nodes <n>
 *    Edges <m>
 *    E <u> <v> <weight>
 *    END
 *    SECTION Terminals
 *    Root <r>
 *    TP <v> <penalty>
 *    END
 *    EOF
 *
 *  Keywords are case-insensitive. Vertices omitted from TP lines have penalty
 *  zero; the root must not carry a TP line. Unrecognized sections are skipped
 *  and reported through the optional warning sink. */
inline PcstInstance parse_instance(std::istream& in,
                                   std::vector<std::string>* warnings = nullptr) {
  PcstInstance inst;
  int lineno = 0;
  bool graph_seen = false, terminals_seen = false;
  std::map<int, Rat> tp;

  std::string raw;
  auto next_tokens = [&](std::vector<std::string>& out) -> bool {
    while (std::getline(in, raw)) {
      ++lineno;
      out = detail::tokens(raw);
      if (!out.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> tok;
  while (next_tokens(tok)) {
    std::string kw = detail::lower(tok[0]);
    if (kw == "eof") break;
    if (kw != "section" || tok.size() != 2)
      throw ParseError(lineno, "expected SECTION or EOF, got '" + tok[0] + "'");

    std::string section = detail::lower(tok[1]);
    if (section == "graph") {
      if (graph_seen) throw ParseError(lineno, "duplicate Graph section");
      graph_seen = true;
      if (!next_tokens(tok) || detail::lower(tok[0]) != "nodes" || tok.size() != 2)
        throw ParseError(lineno, "expected Nodes <n>");
      inst.vertex_count = detail::parse_vertex(tok[1], lineno);
      if (inst.vertex_count < 1) throw ParseError(lineno, "node count must be positive");
      if (!next_tokens(tok) || detail::lower(tok[0]) != "edges" || tok.size() != 2)
        throw ParseError(lineno, "expected Edges <m>");
      int m = detail::parse_vertex(tok[1], lineno);
      if (m < 0) throw ParseError(lineno, "edge count must be nonnegative");
      for (int i = 0; i < m; ++i) {
        if (!next_tokens(tok) || detail::lower(tok[0]) != "e" || tok.size() != 4)
          throw ParseError(lineno, "expected E <u> <v> <weight>");
        Edge e;
        e.u = detail::parse_vertex(tok[1], lineno);
        e.v = detail::parse_vertex(tok[2], lineno);
        try {
          e.weight = parse_rat(tok[3]);
        } catch (const std::invalid_argument& ex) {
          throw ParseError(lineno, ex.what());
        }
        if (e.weight < 0) throw ParseError(lineno, "negative edge weight");
        inst.edges.push_back(e);
      }
      if (!next_tokens(tok) || detail::lower(tok[0]) != "end")
        throw ParseError(lineno, "expected END");
    } else if (section == "terminals") {
      if (terminals_seen) throw ParseError(lineno, "duplicate Terminals section");
      terminals_seen = true;
      if (!next_tokens(tok) || detail::lower(tok[0]) != "root" || tok.size() != 2)
        throw ParseError(lineno, "expected Root <r>");
      inst.root = detail::parse_vertex(tok[1], lineno);
      while (true) {
        if (!next_tokens(tok)) throw ParseError(lineno, "expected TP or END");
        std::string kw2 = detail::lower(tok[0]);
        if (kw2 == "end") break;
        if (kw2 != "tp" || tok.size() != 3)
          throw ParseError(lineno, "expected TP <v> <penalty> or END");
        int v = detail::parse_vertex(tok[1], lineno);
        if (v == inst.root) throw ParseError(lineno, "root must not carry a TP line");
        Rat p;
        try {
          p = parse_rat(tok[2]);
        } catch (const std::invalid_argument& ex) {
          throw ParseError(lineno, ex.what());
        }
        if (p < 0) throw ParseError(lineno, "negative penalty");
        if (!tp.emplace(v, p).second)
          throw ParseError(lineno, "duplicate TP line for vertex " + std::to_string(v));
      }
    } else {
      if (warnings)
        warnings->push_back("skipping unrecognized section '" + tok[1] + "'");
      bool closed = false;
      while (next_tokens(tok)) {
        if (detail::lower(tok[0]) == "end") {
          closed = true;
          break;
        }
      }
      if (!closed) throw ParseError(lineno, "unterminated section");
    }
  }

  if (!graph_seen) throw ParseError(lineno, "missing Graph section");
  if (!terminals_seen) throw ParseError(lineno, "missing Terminals section");
  if (inst.root < 1 || inst.root > inst.vertex_count)
    throw ParseError(lineno, "root out of range");

  inst.penalties.assign(inst.vertex_count + 1, Penalty::fin(Rat(0)));
  inst.penalties[inst.root] = Penalty::inf();
  for (const auto& [v, p] : tp) {
    if (v < 1 || v > inst.vertex_count) throw ParseError(lineno, "TP vertex out of range");
    inst.penalties[v] = Penalty::fin(p);
  }
  try {
    inst.validate();
  } catch (const std::invalid_argument& ex) {
    throw ParseError(0, ex.what());
  }
  return inst;
}

inline PcstInstance parse_instance(const std::string& text,
                                   std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  return parse_instance(in, warnings);
}

/** Canonical text form; parse_instance(serialize_instance(i)) == i. */
inline std::string serialize_instance(const PcstInstance& inst) {
  std::ostringstream out;
  out << "SECTION Graph\n";
  out << "Nodes " << inst.vertex_count << "\n";
  out << "Edges " << inst.edges.size() << "\n";
  for (const Edge& e : inst.edges)
    out << "E " << e.u << " " << e.v << " " << rat_str(e.weight) << "\n";
  out << "END\n";
  out << "SECTION Terminals\n";
  out << "Root " << inst.root << "\n";
  for (int v = 1; v <= inst.vertex_count; ++v) {
    if (v == inst.root || inst.penalties[v].value == 0) continue;
    out << "TP " << v << " " << rat_str(inst.penalties[v].value) << "\n";
  }
  out << "END\n";
  out << "EOF\n";
  return out.str();
}

/** FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits. */
inline std::string fingerprint(const PcstInstance& inst) {
  std::string text = serialize_instance(inst);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

/** Hash of the graph part only (edges and root), penalties excluded; used to
 *  tie a scaled moat run back to its unscaled source instance. */
inline std::string fingerprint_graph(const PcstInstance& inst) {
  PcstInstance bare = inst;
  for (int v = 1; v <= bare.vertex_count; ++v)
    if (v != bare.root) bare.penalties[v] = Penalty::fin(Rat(0));
  return fingerprint(bare);
}

}  // namespace pcst
