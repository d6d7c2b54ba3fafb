#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace pcst {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

namespace detail {

/** Optionally signed run of decimal digits; no hex/octal prefixes, which the
 *  bignum string constructor would otherwise happily accept. */
inline bool plain_int(const std::string& s) {
  std::size_t i = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace detail

/** Parses "42", "-3", "3.25", or "7/4" into an exact rational. */
inline Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto bad = [&] { throw std::invalid_argument("bad rational literal: " + text); };

  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!detail::plain_int(num) || !detail::plain_int(den)) bad();
    Int n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rat(n, d);
  }

  std::size_t dot = text.find('.');
  if (dot != std::string::npos) {
    std::string head = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) bad();
    for (char c : frac)
      if (c < '0' || c > '9') bad();
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head == "+") head += "0";
    if (head.empty()) head = "0";
    if (!detail::plain_int(head)) bad();
    Int whole(head);
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int n = whole * scale;
    Int f(frac);
    n += neg ? -f : f;
    return Rat(n, scale);
  }

  if (!detail::plain_int(text)) bad();
  return Rat(Int(text));
}

/** Canonical text form: "n" when integral, otherwise "n/d" in lowest terms. */
inline std::string rat_str(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace pcst
