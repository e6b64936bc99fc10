#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"

namespace dgclust {

struct WalktrapConfig {
  int walk_length = 4;
  std::optional<std::size_t> k;  // nullopt cuts at maximum modularity
};

// Merge step: clusters `a` and `b` form cluster n + step. Leaves are 0..n-1.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;  // increase of the mean squared walk distance
  bool adjacent = true;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;
};

struct WalktrapResult {
  Partition partition;
  Dendrogram dendrogram;
  // modularity[m] is the modularity after the first m merges
  std::vector<double> modularity;
  std::size_t merges_applied = 0;
};

namespace detail {

// Rows of P^t scaled by D^{-1/2}: r_ij is the Euclidean distance of rows i, j.
inline DenseMatrix walk_profiles(const DenseMatrix& w, int t) {
  if (t < 1) throw ConfigError("walktrap: walk length must be at least 1");
  const std::size_t n = w.rows();
  DenseVector d = degrees(w).out_degree;
  for (std::size_t i = 0; i < n; ++i)
    if (!(d[i] > 0.0)) throw DomainError("walktrap: node " + std::to_string(i) + " is isolated");
  DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = w(i, j) / d[i];
  DenseMatrix pt = p;
  for (int step = 1; step < t; ++step) pt = pt * p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) pt(i, k) /= std::sqrt(d[k]);
  return pt;
}

inline double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace detail

/// r_ij = sqrt( sum_k (P^t_ik - P^t_jk)^2 / d_k ), P = D^{-1} W.
inline double walktrap_distance(const DenseMatrix& w, int t, std::size_t i, std::size_t j) {
  const DenseMatrix x = detail::walk_profiles(with_zero_diagonal(w), t);
  return std::sqrt(detail::sq_distance(x.row(i), x.row(j)));
}

/// Agglomerative walk-distance clustering. Starting from singletons, the
/// adjacent pair of clusters with the smallest increase
///   (1/n) |C1||C2| / (|C1|+|C2|) * r^2(C1, C2)
/// is merged, where a cluster's profile is the mean of its members' profiles.
/// Disconnected inputs finish by merging non-adjacent clusters the same way.
inline WalktrapResult walktrap(const DenseMatrix& weights, const WalktrapConfig& cfg = {}) {
  if (!is_symmetric(weights, 1e-12 * std::max(1.0, max_abs(weights)))) throw DomainError("walktrap: matrix is not symmetric");
  const DenseMatrix w = with_zero_diagonal(weights);
  const std::size_t n = w.rows();
  if (cfg.k && (*cfg.k < 1 || *cfg.k > n)) throw ConfigError("walktrap: k must satisfy 1 <= k <= n");

  WalktrapResult res;
  res.dendrogram.leaves = n;
  if (n == 0) return res;

  DenseMatrix profile = detail::walk_profiles(w, cfg.walk_length);
  const DenseVector deg = degrees(w).out_degree;
  double total = 0.0;
  for (double x : deg) total += x;
  const double two_m = total;  // sum of degrees = 2m

  // Slot s holds a live cluster; slots are reused by the merged cluster.
  std::vector<std::size_t> id(n), size(n, 1);
  std::vector<bool> alive(n, true);
  std::vector<double> cdeg(deg);
  DenseMatrix between = w;  // inter-cluster weight, by slot
  for (std::size_t i = 0; i < n; ++i) id[i] = i;

  const double inv_n = 1.0 / static_cast<double>(n);
  auto delta = [&](std::size_t a, std::size_t b) {
    const double sa = static_cast<double>(size[a]), sb = static_cast<double>(size[b]);
    return inv_n * sa * sb / (sa + sb) * detail::sq_distance(profile.row(a), profile.row(b));
  };
  DenseMatrix cost(n, n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) cost(a, b) = cost(b, a) = delta(a, b);

  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) q -= (deg[i] / two_m) * (deg[i] / two_m);
  res.modularity.push_back(q);

  std::vector<std::size_t> slot_of_step;
  std::vector<std::pair<std::size_t, std::size_t>> merged_slots;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t ba = n, bb = n;
    bool adjacent = true;
    for (int pass = 0; pass < 2 && ba == n; ++pass) {
      adjacent = pass == 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < n; ++a) {
        if (!alive[a]) continue;
        for (std::size_t b = a + 1; b < n; ++b) {
          if (!alive[b] || (adjacent && between(a, b) == 0.0)) continue;
          const double c = cost(a, b);
          const auto key_new = std::minmax(id[a], id[b]);
          if (c < best || (c == best && key_new < std::minmax(id[ba], id[bb]))) {
            best = c;
            ba = a;
            bb = b;
          }
        }
      }
    }

    const double height = cost(ba, bb);
    res.dendrogram.merges.push_back({std::min(id[ba], id[bb]), std::max(id[ba], id[bb]), height, adjacent});
    q += between(ba, bb) / (0.5 * two_m) - 2.0 * (cdeg[ba] / two_m) * (cdeg[bb] / two_m);
    res.modularity.push_back(q);

    // Merge bb into ba.
    const double sa = static_cast<double>(size[ba]), sb = static_cast<double>(size[bb]);
    for (std::size_t k = 0; k < n; ++k) profile(ba, k) = (sa * profile(ba, k) + sb * profile(bb, k)) / (sa + sb);
    size[ba] += size[bb];
    cdeg[ba] += cdeg[bb];
    alive[bb] = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == ba || c == bb) continue;
      between(ba, c) = between(c, ba) = between(ba, c) + between(bb, c);
    }
    id[ba] = n + step;
    for (std::size_t c = 0; c < n; ++c)
      if (alive[c] && c != ba) cost(ba, c) = cost(c, ba) = delta(ba, c);
    merged_slots.push_back({ba, bb});
  }

  std::size_t apply = 0;
  if (cfg.k) {
    apply = n - *cfg.k;
  } else {
    for (std::size_t m = 1; m < res.modularity.size(); ++m)
      if (res.modularity[m] > res.modularity[apply] + 1e-12) apply = m;
  }
  res.merges_applied = apply;

  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Slot ba always represents the merged cluster, so union by slot suffices.
  for (std::size_t m = 0; m < apply; ++m) {
    const auto [a, b] = merged_slots[m];
    parent[find(b)] = find(a);
  }
  std::vector<int> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<int>(find(i));
  res.partition = Partition::canonical(raw);
  return res;
}

}  // namespace dgclust
