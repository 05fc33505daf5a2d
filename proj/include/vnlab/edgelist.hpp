#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vnlab/graph.hpp"

namespace vnlab {

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

template <class... T>
bool parse_exact(const std::string& line, T&... out) {
  std::istringstream ss(line);
  ((ss >> out), ...);
  if (ss.fail()) return false;
  std::string rest;
  return !(ss >> rest);
}

}  // namespace detail

/// "n e" then e lines "u v", 1 <= u < v <= n.
inline LabeledGraph read_edgelist(std::istream& in, Namespace ns = Namespace::V1) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError(1, "missing header");
  long long n = 0, e = 0;
  if (!detail::parse_exact(line, n, e) || n < 0 || e < 0) throw ParseError(lineno, "header must be 'n e'");
  AdjacencyBits adj(static_cast<std::size_t>(n));
  for (long long k = 0; k < e; ++k) {
    if (!detail::next_content_line(in, line, lineno)) throw ParseError(lineno + 1, "expected " + std::to_string(e) + " edges");
    long long u = 0, v = 0;
    if (!detail::parse_exact(line, u, v)) throw ParseError(lineno, "edge line must be 'u v'");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (u < 1 || v < 1 || u > n || v > n) throw ParseError(lineno, "endpoint out of range");
    if (u > v) throw ParseError(lineno, "edge must satisfy u < v");
    if (adj.test(u - 1, v - 1)) throw ParseError(lineno, "duplicate edge");
    adj.set(u - 1, v - 1);
  }
  if (detail::next_content_line(in, line, lineno)) throw ParseError(lineno, "trailing content after edges");
  return LabeledGraph(sequential_labels(static_cast<std::size_t>(n), ns), std::move(adj));
}

/// Writes edges in sorted (u, v) order. Vertices are numbered by position.
inline void write_edgelist(const LabeledGraph& g, std::ostream& out) {
  out << g.order() << ' ' << g.edge_count() << '\n';
  for (std::size_t u = 0; u < g.order(); ++u)
    for (std::size_t v = u + 1; v < g.order(); ++v)
      if (g.has_edge(u, v)) out << u + 1 << ' ' << v + 1 << '\n';
}

/// "n d_f" header then n rows of d_f reals.
inline std::vector<FeatureRow> read_features(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError(1, "missing feature header");
  long long n = 0, d = 0;
  if (!detail::parse_exact(line, n, d) || n < 0 || d < 0) throw ParseError(lineno, "feature header must be 'n d_f'");
  std::vector<FeatureRow> rows;
  for (long long i = 0; i < n; ++i) {
    if (!detail::next_content_line(in, line, lineno)) throw ParseError(lineno + 1, "missing feature row");
    std::istringstream ss(line);
    FeatureRow row(static_cast<std::size_t>(d));
    for (auto& x : row)
      if (!(ss >> x)) throw ParseError(lineno, "expected " + std::to_string(d) + " reals");
    std::string rest;
    if (ss >> rest) throw ParseError(lineno, "too many values in feature row");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_features(const LabeledGraph& g, std::ostream& out) {
  out << g.order() << ' ' << g.feature_dim() << '\n';
  out.precision(17);
  for (const auto& row : g.features()) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

inline LabeledGraph read_edgelist(const std::string& path, Namespace ns = Namespace::V1) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_edgelist(in, ns);
}

inline void write_edgelist(const LabeledGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_edgelist(g, out);
}

}  // namespace vnlab
