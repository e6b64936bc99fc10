#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"

namespace dgclust {

struct TripRecord {
  std::int64_t pickup_area = 0;
  std::int64_t dropoff_area = 0;
  double duration_seconds = 0.0;
};

enum class WeightMode { mean_travel_time, trip_count, inverse_mean_time };

inline std::string_view to_string(WeightMode m) {
  switch (m) {
    case WeightMode::mean_travel_time: return "mean_travel_time";
    case WeightMode::trip_count: return "trip_count";
    case WeightMode::inverse_mean_time: return "inverse_mean_time";
  }
  return "mean_travel_time";
}

inline WeightMode parse_weight_mode(std::string_view s) {
  if (s == "mean_travel_time" || s == "mean-travel-time") return WeightMode::mean_travel_time;
  if (s == "trip_count" || s == "trip-count") return WeightMode::trip_count;
  if (s == "inverse_mean_time" || s == "inverse-mean-time") return WeightMode::inverse_mean_time;
  throw ConfigError("unknown weight mode '" + std::string(s) + "'");
}

// Square count table stored row-major.
class CountMatrix {
 public:
  CountMatrix() = default;
  explicit CountMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::uint64_t& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> data_;
};

// Weighted directed graph over community areas. weights(i, j) is the weight
// of the edge node_ids[i] -> node_ids[j]; counts(i, j) the trips observed.
struct WeightedDigraph {
  std::vector<std::int64_t> node_ids;
  DenseMatrix weights;
  CountMatrix counts;

  std::size_t size() const noexcept { return node_ids.size(); }

  std::optional<std::size_t> index_of(std::int64_t id) const {
    auto it = std::lower_bound(node_ids.begin(), node_ids.end(), id);
    if (it != node_ids.end() && *it == id) return static_cast<std::size_t>(it - node_ids.begin());
    // node_ids need not be sorted in general
    for (std::size_t i = 0; i < node_ids.size(); ++i)
      if (node_ids[i] == id) return i;
    return std::nullopt;
  }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (double w : weights.data())
      if (w != 0.0) ++e;
    return e;
  }

  friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;
};

/// Aggregates trips into a digraph over the sorted distinct area ids.
inline WeightedDigraph build_graph(const std::vector<TripRecord>& records, WeightMode mode = WeightMode::mean_travel_time) {
  if (records.empty()) throw DomainError("build_graph: no trip records");
  std::vector<std::int64_t> ids;
  ids.reserve(records.size() * 2);
  for (const auto& r : records) {
    ids.push_back(r.pickup_area);
    ids.push_back(r.dropoff_area);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const std::size_t n = ids.size();
  auto idx = [&](std::int64_t id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  CountMatrix counts(n);
  std::vector<double> sums(n * n, 0.0);
  for (const auto& r : records) {
    const std::size_t i = idx(r.pickup_area), j = idx(r.dropoff_area);
    ++counts(i, j);
    sums[i * n + j] += r.duration_seconds;
  }

  DenseMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = counts(i, j);
      if (c == 0) continue;
      const double mean = sums[i * n + j] / static_cast<double>(c);
      switch (mode) {
        case WeightMode::mean_travel_time: w(i, j) = mean; break;
        case WeightMode::trip_count: w(i, j) = static_cast<double>(c); break;
        case WeightMode::inverse_mean_time: w(i, j) = mean > 0.0 ? 1.0 / mean : 0.0; break;
      }
    }
  }
  return {std::move(ids), std::move(w), std::move(counts)};
}

/// W + W^T; counts are summed the same way.
inline WeightedDigraph simple_symmetrize(const WeightedDigraph& g) {
  const std::size_t n = g.size();
  WeightedDigraph out{g.node_ids, DenseMatrix(n, n), CountMatrix(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.weights(i, j) = g.weights(i, j) + g.weights(j, i);
      out.counts(i, j) = g.counts(i, j) + g.counts(j, i);
    }
  return out;
}

inline DenseMatrix bibliometric_matrix(const DenseMatrix& w) {
  const DenseMatrix wt = w.transpose();
  const DenseMatrix cocited = wt * w;
  const DenseMatrix coupled = w * wt;
  const std::size_t n = w.rows();
  DenseMatrix out(n, n);
  // Summed symmetrically so the result is exactly symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double a = 0.5 * ((cocited(i, j) + cocited(j, i)) + (coupled(i, j) + coupled(j, i)));
      out(i, j) = out(j, i) = a;
    }
  return out;
}

/// W^T W + W W^T. Counts hold the number of shared in- plus out-neighbours.
inline WeightedDigraph bibliometric_symmetrize(const WeightedDigraph& g) {
  const std::size_t n = g.size();
  WeightedDigraph out{g.node_ids, bibliometric_matrix(g.weights), CountMatrix(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t shared = 0;
      for (std::size_t l = 0; l < n; ++l) {
        if (g.weights(l, i) != 0.0 && g.weights(l, j) != 0.0) ++shared;
        if (g.weights(i, l) != 0.0 && g.weights(j, l) != 0.0) ++shared;
      }
      out.counts(i, j) = shared;
    }
  return out;
}

struct DegreeInfo {
  DenseVector out_degree;
  DenseVector in_degree;

  DenseMatrix diagonal() const { return DenseMatrix::diagonal(out_degree); }
};

inline DegreeInfo degrees(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  DegreeInfo d{DenseVector(n, 0.0), DenseVector(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      d.out_degree[i] += w(i, j);
      d.in_degree[j] += w(i, j);
    }
  return d;
}

inline DegreeInfo degrees(const WeightedDigraph& g) { return degrees(g.weights); }

/// Nodes with no incident edge in either direction, ignoring self-loops.
inline std::vector<std::size_t> isolated_nodes(const DenseMatrix& w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    bool touched = false;
    for (std::size_t j = 0; j < w.cols() && !touched; ++j)
      if (j != i && (w(i, j) != 0.0 || w(j, i) != 0.0)) touched = true;
    if (!touched) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> isolated_nodes(const WeightedDigraph& g) { return isolated_nodes(g.weights); }

// Component id per node, ids numbered in order of each component's smallest node.
struct Components {
  std::vector<std::size_t> id;
  std::size_t count = 0;

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s(count, 0);
    for (auto c : id) ++s[c];
    return s;
  }
};

namespace detail {

inline Components renumber(std::vector<std::size_t> raw) {
  std::map<std::size_t, std::size_t> remap;
  for (auto& c : raw) {
    auto [it, _] = remap.try_emplace(c, remap.size());
    c = it->second;
  }
  return {std::move(raw), remap.size()};
}

}  // namespace detail

inline Components weakly_connected_components(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (w(i, j) != 0.0) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::size_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = find(i);
  return detail::renumber(std::move(raw));
}

/// Tarjan's algorithm, iterative.
inline Components strongly_connected_components(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnseen), low(n, 0), comp(n, kUnseen), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0, ncomp = 0;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next neighbour)
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnseen) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < n) {
        const std::size_t u = next++;
        if (u == v || w(v, u) == 0.0) continue;
        if (index[u] == kUnseen) {
          index[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = true;
          call.push_back({u, 0});
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], index[u]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = false;
          comp[x] = ncomp;
        } while (x != done);
        ++ncomp;
      }
    }
  }
  return detail::renumber(std::move(comp));
}

/// Period of a strongly connected digraph (gcd of cycle lengths), computed
/// from BFS levels. Self-loops are ignored. Returns 0 for a single node
/// without edges.
inline std::size_t period(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  if (n == 0) return 0;
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(n, kUnseen), queue{0};
  level[0] = 0;
  std::size_t g = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v || w(v, u) == 0.0) continue;
      if (level[u] == kUnseen) {
        level[u] = level[v] + 1;
        queue.push_back(u);
      } else {
        const auto diff = static_cast<std::size_t>(
            std::abs(static_cast<long long>(level[v]) + 1 - static_cast<long long>(level[u])));
        g = std::gcd(g, diff);
      }
    }
  }
  return g;
}

inline bool is_strongly_connected(const DenseMatrix& w) { return strongly_connected_components(w).count <= 1; }

inline bool is_aperiodic(const DenseMatrix& w) { return period(w) == 1; }

struct Subgraph {
  WeightedDigraph graph;
  // original index of each node in the subgraph
  std::vector<std::size_t> index_map;
};

inline Subgraph induced_subgraph(const WeightedDigraph& g, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  Subgraph s;
  s.graph.node_ids.reserve(keep.size());
  for (auto i : keep) s.graph.node_ids.push_back(g.node_ids[i]);
  s.graph.weights = principal_submatrix(g.weights, keep);
  s.graph.counts = CountMatrix(keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b) s.graph.counts(a, b) = g.counts(keep[a], keep[b]);
  s.index_map = std::move(keep);
  return s;
}

/// Largest strongly (directed) or weakly connected component; ties go to the
/// component containing the smallest node index.
inline Subgraph largest_connected_component(const WeightedDigraph& g, bool directed) {
  const Components c = directed ? strongly_connected_components(g.weights) : weakly_connected_components(g.weights);
  const auto sizes = c.sizes();
  std::size_t best = 0;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] > sizes[best]) best = i;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (c.id[i] == best) keep.push_back(i);
  return induced_subgraph(g, std::move(keep));
}

}  // namespace dgclust
