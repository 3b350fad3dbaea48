#pragma once

// Point-set text format:
//
//   # comment lines start with '#'
//   n d
//   x_11 ... x_1d
//   ...
//   x_n1 ... x_nd
//
// Blank lines are ignored.  Values are whitespace separated decimals.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hsdepth/core.hpp"

namespace hsdepth {

namespace detail {

inline bool is_blank_or_comment(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

inline double parse_number(const std::string& token, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line_no) + ": not a number: '" + token + "'");
  }
}

}  // namespace detail

inline PointSet parse_point_set(std::istream& in) {
  PointSet ps;
  std::string line;
  int line_no = 0;
  long expected = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank_or_comment(line)) continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);

    if (expected < 0) {
      if (tokens.size() != 2) {
        throw InputError("line " + std::to_string(line_no) + ": header must be 'n d'");
      }
      const double n = detail::parse_number(tokens[0], line_no);
      const double d = detail::parse_number(tokens[1], line_no);
      if (n < 0 || d < 1 || n != static_cast<long>(n) || d != static_cast<long>(d)) {
        throw InputError("line " + std::to_string(line_no) + ": invalid header values");
      }
      expected = static_cast<long>(n);
      ps.dim = static_cast<int>(d);
      continue;
    }
    if (static_cast<int>(tokens.size()) != ps.dim) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(ps.dim) + " coordinates, found " +
                       std::to_string(tokens.size()));
    }
    if (static_cast<long>(ps.points.size()) == expected) {
      throw InputError("line " + std::to_string(line_no) + ": more points than declared");
    }
    Vector p;
    p.reserve(tokens.size());
    for (const auto& t : tokens) p.push_back(detail::parse_number(t, line_no));
    ps.points.push_back(std::move(p));
  }
  if (expected < 0) throw InputError("missing 'n d' header");
  if (static_cast<long>(ps.points.size()) != expected) {
    throw InputError("declared " + std::to_string(expected) + " points, found " +
                     std::to_string(ps.points.size()));
  }
  return ps;
}

inline PointSet read_point_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_point_set(in);
}

/// Writes with 17 significant digits so that parsing reproduces the values.
inline void write_point_set(std::ostream& out, const PointSet& ps) {
  out << ps.points.size() << ' ' << ps.dim << '\n';
  char buf[32];
  for (const auto& p : ps.points) {
    for (int k = 0; k < ps.dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

/// Parses "c1,c2,...,cd".
inline Vector parse_point_literal(const std::string& text) {
  Vector v;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw InputError("empty coordinate in '" + text + "'");
    v.push_back(detail::parse_number(token.substr(first, last - first + 1), 0));
  }
  if (v.empty()) throw InputError("empty point literal");
  return v;
}

}  // namespace hsdepth
