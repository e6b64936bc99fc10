#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/trips_csv.hpp"

// Graph file layout:
//
//   digraph <n>
//   <id_0>,<id_1>,...,<id_{n-1}>
//   <src_id>,<dst_id>,<weight>,<count>     one line per nonzero edge
//
// Edges are sorted by (src, dst) in node order and weights are written as the
// shortest decimal that round-trips.

namespace dgclust {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw DomainError("cannot format number");
  return std::string(buf, ptr);
}

inline void write_graph(const WeightedDigraph& g, std::ostream& out) {
  const std::size_t n = g.size();
  out << "digraph " << n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << g.node_ids[i];
  out << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (g.weights(i, j) == 0.0 && g.counts(i, j) == 0) continue;
      out << g.node_ids[i] << ',' << g.node_ids[j] << ',' << format_double(g.weights(i, j)) << ','
          << g.counts(i, j) << '\n';
    }
}

inline void write_graph_file(const WeightedDigraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_graph(g, out);
  if (!out) throw IoError("error while writing '" + path + "'");
}

namespace detail {

template <typename Int>
Int parse_int(std::string_view s, std::size_t line, const char* what) {
  s = trim(s);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

inline WeightedDigraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing 'digraph <n>' header");
  std::string_view head = detail::trim(line);
  if (head.substr(0, 8) != "digraph ") throw ParseError(1, "expected 'digraph <n>'");
  const auto n = detail::parse_int<std::size_t>(head.substr(8), 1, "node count");

  WeightedDigraph g{{}, DenseMatrix(n, n), CountMatrix(n)};
  ++lineno;
  if (!std::getline(in, line)) {
    if (n == 0) return g;
    throw ParseError(2, "missing node id line");
  }
  if (!detail::trim(line).empty()) {
    for (const auto& f : detail::split_csv_line(line)) g.node_ids.push_back(detail::parse_int<std::int64_t>(f, 2, "node id"));
  }
  if (g.node_ids.size() != n)
    throw ParseError(2, "expected " + std::to_string(n) + " node ids, found " + std::to_string(g.node_ids.size()));
  if (std::set<std::int64_t>(g.node_ids.begin(), g.node_ids.end()).size() != n) throw ParseError(2, "duplicate node id");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4) throw ParseError(lineno, "expected 'src,dst,weight,count'");
    const auto src = g.index_of(detail::parse_int<std::int64_t>(f[0], lineno, "source id"));
    const auto dst = g.index_of(detail::parse_int<std::int64_t>(f[1], lineno, "target id"));
    if (!src || !dst) throw ParseError(lineno, "edge references an undeclared node");
    const auto weight = detail::parse_double(f[2]);
    if (!weight || *weight < 0.0) throw ParseError(lineno, "invalid weight '" + f[2] + "'");
    const auto count = detail::parse_int<std::uint64_t>(f[3], lineno, "count");
    if (!seen.insert({*src, *dst}).second) throw ParseError(lineno, "duplicate edge " + f[0] + "," + f[1]);
    g.weights(*src, *dst) = *weight;
    g.counts(*src, *dst) = count;
  }
  if (in.bad()) throw IoError("error while reading graph file");
  return g;
}

inline WeightedDigraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

}  // namespace dgclust
