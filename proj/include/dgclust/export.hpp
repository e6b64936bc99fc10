#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/graph_io.hpp"
#include "dgclust/partition.hpp"

namespace dgclust {

// Assignments CSV: header `node_id,cluster`, one row per node in graph order.
struct Assignments {
  std::vector<std::int64_t> node_ids;
  std::vector<int> clusters;
};

inline void write_assignments(const std::vector<std::int64_t>& node_ids, const Partition& p, std::ostream& out) {
  if (node_ids.size() != p.size()) throw DomainError("write_assignments: size mismatch");
  out << "node_id,cluster\n";
  for (std::size_t i = 0; i < node_ids.size(); ++i) out << node_ids[i] << ',' << p.labels[i] << '\n';
}

inline Assignments read_assignments(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "node_id,cluster") throw ParseError(1, "expected header 'node_id,cluster'");
  Assignments a;
  std::set<std::int64_t> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 2) throw ParseError(lineno, "expected 'node_id,cluster'");
    const auto id = detail::parse_int<std::int64_t>(f[0], lineno, "node id");
    const auto c = detail::parse_int<int>(f[1], lineno, "cluster");
    if (c < Partition::kExcluded) throw ParseError(lineno, "cluster labels must be >= -1");
    if (!seen.insert(id).second) throw ParseError(lineno, "duplicate node id " + f[0]);
    a.node_ids.push_back(id);
    a.clusters.push_back(c);
  }
  return a;
}

inline Assignments read_assignments_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open assignments file '" + path + "'");
  return read_assignments(in);
}

/// Lines both assignment files up on node id. The node sets must match.
inline std::pair<Partition, Partition> align_assignments(const Assignments& a, const Assignments& b) {
  if (std::set<std::int64_t>(a.node_ids.begin(), a.node_ids.end()) !=
      std::set<std::int64_t>(b.node_ids.begin(), b.node_ids.end()))
    throw DomainError("assignment files cover different node sets");
  std::vector<int> lb(a.node_ids.size());
  for (std::size_t i = 0; i < a.node_ids.size(); ++i) {
    const auto it = std::find(b.node_ids.begin(), b.node_ids.end(), a.node_ids[i]);
    lb[i] = b.clusters[static_cast<std::size_t>(it - b.node_ids.begin())];
  }
  return {Partition::canonical(a.clusters), Partition::canonical(lb)};
}

// Categorical palette; excluded nodes are grey.
inline constexpr std::array<std::string_view, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

inline std::string_view cluster_color(int label) {
  if (label < 0) return "#cccccc";
  return kPalette[static_cast<std::size_t>(label) % kPalette.size()];
}

/// Edge width 1..4: weight quartile among all edges (by rank).
inline std::vector<int> weight_quartiles(const WeightedDigraph& g) {
  std::vector<double> all;
  for (double w : g.weights.data())
    if (w != 0.0) all.push_back(w);
  std::sort(all.begin(), all.end());
  std::vector<int> out(g.size() * g.size(), 0);
  const double m = static_cast<double>(all.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = g.weights(i, j);
      if (w == 0.0) continue;
      const auto below = static_cast<double>(std::lower_bound(all.begin(), all.end(), w) - all.begin());
      out[i * g.size() + j] = std::min(4, 1 + static_cast<int>(4.0 * below / m));
    }
  return out;
}

inline void write_dot(const WeightedDigraph& g, const Partition& p, std::ostream& out) {
  if (p.size() != g.size()) throw DomainError("write_dot: partition size does not match graph");
  const auto width = weight_quartiles(g);
  out << "digraph clusters {\n";
  out << "  node [shape=circle, style=filled];\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out << "  \"" << g.node_ids[i] << "\" [label=\"" << g.node_ids[i] << "\", cluster=" << p.labels[i] << ", fillcolor=\""
        << cluster_color(p.labels[i]) << "\"];\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = g.weights(i, j);
      if (w == 0.0) continue;
      out << "  \"" << g.node_ids[i] << "\" -> \"" << g.node_ids[j] << "\" [weight=" << format_double(w)
          << ", penwidth=" << width[i * g.size() + j] << "];\n";
    }
  out << "}\n";
}

inline void write_graphml(const WeightedDigraph& g, const Partition& p, std::ostream& out) {
  if (p.size() != g.size()) throw DomainError("write_graphml: partition size does not match graph");
  const auto width = weight_quartiles(g);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n"
      << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <key id=\"count\" for=\"edge\" attr.name=\"count\" attr.type=\"long\"/>\n"
      << "  <key id=\"width\" for=\"edge\" attr.name=\"width\" attr.type=\"int\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out << "    <node id=\"n" << g.node_ids[i] << "\"><data key=\"cluster\">" << p.labels[i]
        << "</data><data key=\"color\">" << cluster_color(p.labels[i]) << "</data></node>\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = g.weights(i, j);
      if (w == 0.0) continue;
      out << "    <edge source=\"n" << g.node_ids[i] << "\" target=\"n" << g.node_ids[j] << "\"><data key=\"weight\">"
          << format_double(w) << "</data><data key=\"count\">" << g.counts(i, j) << "</data><data key=\"width\">"
          << width[i * g.size() + j] << "</data></edge>\n";
    }
  out << "  </graph>\n</graphml>\n";
}

}  // namespace dgclust
