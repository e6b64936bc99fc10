#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/random.hpp"

namespace dgclust {

// Constant Potts Model on an undirected weighted graph:
//   H = sum_c [ e_c - gamma * C(n_c, 2) ]
// with e_c the total weight of edges inside c (each unordered pair once) and
// n_c the number of nodes in c.

/// Mean edge weight over all node pairs; 1 when the graph has no edges.
inline double default_resolution(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  if (n < 2) return 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += w(i, j);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return total > 0.0 ? total / pairs : 1.0;
}

/// Nodes labelled Partition::kExcluded are ignored.
inline double cpm_quality(const DenseMatrix& w, const Partition& p, double gamma) {
  if (p.size() != w.rows()) throw DomainError("cpm_quality: partition size does not match graph");
  double h = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = i + 1; j < w.rows(); ++j)
      if (p.labels[i] != Partition::kExcluded && p.labels[i] == p.labels[j]) h += w(i, j);
  std::map<int, double> sizes;
  for (int l : p.labels)
    if (l != Partition::kExcluded) sizes[l] += 1.0;
  for (const auto& [_, nc] : sizes) h -= gamma * 0.5 * nc * (nc - 1.0);
  return h;
}

struct LeidenConfig {
  std::optional<double> gamma;  // nullopt selects default_resolution
  int max_levels = 20;
  std::uint64_t seed = 0;
};

struct LeidenResult {
  Partition partition;
  double gamma = 0.0;
  double quality = 0.0;
  // H of the node-level partition after every local-moving phase, starting
  // with the singleton partition.
  std::vector<double> quality_trace;
  int levels = 0;
};

namespace detail {

// Aggregate graph: dense symmetric links between aggregate nodes (zero
// diagonal), plus per-node internal weight and node count.
struct CpmGraph {
  DenseMatrix links;
  std::vector<double> internal;
  std::vector<double> size;

  std::size_t nodes() const { return size.size(); }
};

class CpmMover {
 public:
  CpmMover(const CpmGraph& g, double gamma, std::vector<std::size_t> community)
      : g_(g), gamma_(gamma), comm_(std::move(community)), csize_(g.nodes(), 0.0), to_comm_(g.nodes(), 0.0) {
    for (std::size_t v = 0; v < g_.nodes(); ++v) csize_[comm_[v]] += g_.size[v];
  }

  const std::vector<std::size_t>& communities() const { return comm_; }

  // Fast local moving: nodes are queued in the given order; whenever a node
  // moves, its neighbours outside the target community are re-queued.
  // Returns true if any node moved.
  bool move_nodes(std::vector<std::size_t> order) {
    const std::size_t n = g_.nodes();
    std::vector<bool> queued(n, true);
    std::size_t head = 0;
    bool any = false;
    while (head < order.size()) {
      const std::size_t v = order[head++];
      queued[v] = false;
      const auto target = best_move(v);
      if (!target) continue;
      relocate(v, *target);
      any = true;
      for (std::size_t u = 0; u < n; ++u) {
        if (u == v || g_.links(v, u) == 0.0 || queued[u] || comm_[u] == *target) continue;
        queued[u] = true;
        order.push_back(u);
      }
    }
    return any;
  }

  // Community maximizing the CPM gain for v, if the gain exceeds 1e-12.
  // An empty community is a candidate as well.
  std::optional<std::size_t> best_move(std::size_t v) {
    const std::size_t n = g_.nodes();
    const std::size_t own = comm_[v];
    std::vector<std::size_t> touched;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v || g_.links(v, u) == 0.0) continue;
      if (to_comm_[comm_[u]] == 0.0) touched.push_back(comm_[u]);
      to_comm_[comm_[u]] += g_.links(v, u);
    }
    const double sv = g_.size[v];
    const double stay_links = to_comm_[own];
    const double rest_own = csize_[own] - sv;

    std::optional<std::size_t> best;
    double best_gain = 1e-12;
    std::sort(touched.begin(), touched.end());
    for (std::size_t c : touched) {
      if (c == own) continue;
      const double gain = to_comm_[c] - stay_links - gamma_ * sv * (csize_[c] - rest_own);
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (rest_own > 0.0) {
      const double gain = -stay_links + gamma_ * sv * rest_own;
      if (gain > best_gain) {
        best_gain = gain;
        best = empty_community();
      }
    }
    for (std::size_t c : touched) to_comm_[c] = 0.0;
    return best;
  }

  void relocate(std::size_t v, std::size_t c) {
    csize_[comm_[v]] -= g_.size[v];
    csize_[c] += g_.size[v];
    comm_[v] = c;
  }

 private:
  std::size_t empty_community() const {
    for (std::size_t c = 0; c < csize_.size(); ++c)
      if (csize_[c] == 0.0) return c;
    return csize_.size();  // unreachable while some community has >= 2 nodes
  }

  const CpmGraph& g_;
  double gamma_;
  std::vector<std::size_t> comm_;
  std::vector<double> csize_;
  std::vector<double> to_comm_;
};

// Within each community, singletons greedily join the connected
// sub-community with the best positive CPM gain, visiting nodes in index order.
inline std::vector<std::size_t> refine(const CpmGraph& g, double gamma, const std::vector<std::size_t>& comm) {
  const std::size_t n = g.nodes();
  std::vector<std::size_t> sub(n);
  std::vector<double> sub_size(g.size);
  std::vector<bool> singleton(n, true);
  for (std::size_t v = 0; v < n; ++v) sub[v] = v;
  std::vector<double> to_sub(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!singleton[v]) continue;
    std::vector<std::size_t> touched;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v || comm[u] != comm[v] || g.links(v, u) == 0.0) continue;
      if (to_sub[sub[u]] == 0.0) touched.push_back(sub[u]);
      to_sub[sub[u]] += g.links(v, u);
    }
    std::sort(touched.begin(), touched.end());
    std::optional<std::size_t> best;
    double best_gain = 1e-12;
    for (std::size_t s : touched) {
      const double gain = to_sub[s] - gamma * g.size[v] * sub_size[s];
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    for (std::size_t s : touched) to_sub[s] = 0.0;
    if (!best) continue;
    sub_size[sub[v]] -= g.size[v];
    sub[v] = *best;
    sub_size[*best] += g.size[v];
    singleton[v] = false;
    singleton[*best] = false;
  }
  return sub;
}

// Dense renumbering of arbitrary community ids in order of first appearance.
inline std::size_t compact(std::vector<std::size_t>& ids) {
  std::map<std::size_t, std::size_t> remap;
  for (auto& c : ids) {
    auto [it, _] = remap.try_emplace(c, remap.size());
    c = it->second;
  }
  return remap.size();
}

inline CpmGraph aggregate(const CpmGraph& g, const std::vector<std::size_t>& group, std::size_t groups) {
  CpmGraph out{DenseMatrix(groups, groups), std::vector<double>(groups, 0.0), std::vector<double>(groups, 0.0)};
  for (std::size_t v = 0; v < g.nodes(); ++v) {
    out.internal[group[v]] += g.internal[v];
    out.size[group[v]] += g.size[v];
    for (std::size_t u = v + 1; u < g.nodes(); ++u) {
      const double x = g.links(v, u);
      if (x == 0.0) continue;
      if (group[u] == group[v]) {
        out.internal[group[v]] += x;
      } else {
        out.links(group[v], group[u]) += x;
        out.links(group[u], group[v]) += x;
      }
    }
  }
  return out;
}

inline std::vector<std::size_t> shuffled_nodes(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

}  // namespace detail

/// Leiden optimisation of the CPM: local moving, refinement, aggregation over
/// the refined partition, repeated until local moving leaves every aggregate
/// node in its own community. A final local-moving pass on the original nodes
/// makes the result a local optimum with respect to single-node moves.
inline LeidenResult leiden(const DenseMatrix& w, const LeidenConfig& cfg = {}) {
  if (!is_symmetric(w, 1e-12 * std::max(1.0, max_abs(w)))) throw DomainError("leiden: matrix is not symmetric");
  for (double x : w.data())
    if (x < 0.0) throw DomainError("leiden: negative weight");
  const double gamma = cfg.gamma ? *cfg.gamma : default_resolution(w);
  if (!(gamma > 0.0)) throw ConfigError("leiden: resolution gamma must be positive");

  const std::size_t n = w.rows();
  LeidenResult res;
  res.gamma = gamma;
  detail::CpmGraph g{with_zero_diagonal(w), std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
  const DenseMatrix base = g.links;
  Rng rng(cfg.seed);

  std::vector<std::size_t> node_to_agg(n);
  for (std::size_t i = 0; i < n; ++i) node_to_agg[i] = i;
  std::vector<std::size_t> comm(n);
  for (std::size_t i = 0; i < n; ++i) comm[i] = i;

  auto flatten = [&](const std::vector<std::size_t>& agg_comm) {
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<int>(agg_comm[node_to_agg[i]]);
    return Partition::canonical(raw);
  };
  res.quality_trace.push_back(cpm_quality(base, Partition::singletons(n), gamma));

  for (int level = 0; level < cfg.max_levels && n > 0; ++level) {
    detail::CpmMover mover(g, gamma, comm);
    mover.move_nodes(detail::shuffled_nodes(g.nodes(), rng));
    comm = mover.communities();
    const std::size_t ncomm = detail::compact(comm);
    res.quality_trace.push_back(cpm_quality(base, flatten(comm), gamma));
    res.levels = level + 1;
    if (ncomm == g.nodes()) break;

    std::vector<std::size_t> sub = detail::refine(g, gamma, comm);
    std::size_t nsub = detail::compact(sub);
    // A refinement that merged nothing would stall; aggregate whole communities.
    if (nsub == g.nodes()) {
      sub = comm;
      nsub = ncomm;
    }
    std::vector<std::size_t> next_comm(nsub);
    for (std::size_t v = 0; v < g.nodes(); ++v) next_comm[sub[v]] = comm[v];
    g = detail::aggregate(g, sub, nsub);
    for (auto& a : node_to_agg) a = sub[a];
    comm = std::move(next_comm);
  }

  // Final polish at node level.
  detail::CpmGraph flat{base, std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
  std::vector<std::size_t> node_comm(n);
  for (std::size_t i = 0; i < n; ++i) node_comm[i] = comm[node_to_agg[i]];
  detail::CpmMover polish(flat, gamma, node_comm);
  if (polish.move_nodes(detail::shuffled_nodes(n, rng))) {
    node_comm = polish.communities();
    std::vector<int> raw(node_comm.begin(), node_comm.end());
    res.partition = Partition::canonical(raw);
    res.quality_trace.push_back(cpm_quality(base, res.partition, gamma));
  } else {
    std::vector<int> raw(node_comm.begin(), node_comm.end());
    res.partition = Partition::canonical(raw);
  }
  res.quality = cpm_quality(base, res.partition, gamma);
  return res;
}

}  // namespace dgclust
