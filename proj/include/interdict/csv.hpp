#ifndef INTERDICT_CSV_HPP
#define INTERDICT_CSV_HPP

// Minimal CSV reading/writing for the library's own flat schemas (no quoting,
// no embedded commas).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "interdict/errors.hpp"

namespace interdict::csv {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

/// Reads a CSV file whose header must equal `expected` exactly.
inline Table read(const std::string& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Table t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      if (t.header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw ParseError(path + ": expected header '" + want + "'");
      }
      continue;
    }
    if (fields.size() != expected.size())
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(expected.size()) +
                       " fields, got " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  if (t.header.empty()) throw ParseError(path + ": empty file");
  return t;
}

inline double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ParseError(where + ": not a number: '" + s + "'");
  return v;
}

inline int to_int(const std::string& s, const std::string& where) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(where + ": not an integer: '" + s + "'");
  return v;
}

/// Six significant digits, the fixed precision of every exported result file.
inline std::string fmt6(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Shortest representation that parses back to the same double.
inline std::string fmt_exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline double round6(double v) { return to_double(fmt6(v), "round6"); }

}  // namespace interdict::csv

#endif
