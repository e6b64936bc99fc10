#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/random.hpp"

namespace dgclust {

struct KMeansOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iterations = 300;
};

struct KMeansResult {
  Partition partition;
  DenseMatrix centroids;
  double inertia = 0.0;
  int iterations = 0;
  int empty_repairs = 0;
  // Inertia after each Lloyd iteration of the winning run.
  std::vector<double> inertia_trace;
};

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline DenseMatrix kmeanspp_seed(const DenseMatrix& x, std::size_t k, Rng& rng) {
  const std::size_t m = x.rows(), dim = x.cols();
  DenseMatrix c(k, dim);
  std::size_t first = rng.below(m);
  std::copy(x.row(first).begin(), x.row(first).end(), c.row(0).begin());
  std::vector<double> d2(m);
  for (std::size_t i = 0; i < m; ++i) d2[i] = sq_dist(x.row(i), c.row(0));
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.below(m);
    } else {
      double r = rng.uniform() * total;
      pick = m - 1;
      for (std::size_t i = 0; i < m; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    }
    std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(j).begin());
    for (std::size_t i = 0; i < m; ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), c.row(j)));
  }
  return c;
}

inline KMeansResult lloyd(const DenseMatrix& x, DenseMatrix centroids, int max_iterations) {
  const std::size_t m = x.rows(), dim = x.cols(), k = centroids.rows();
  std::vector<int> assign(m, -1);
  std::vector<double> cost(m);
  KMeansResult res;
  for (int it = 1; it <= max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      // ties keep the current cluster
      int best = assign[i] < 0 ? 0 : assign[i];
      double bd = assign[i] < 0 ? std::numeric_limits<double>::infinity()
                                : sq_dist(x.row(i), centroids.row(static_cast<std::size_t>(assign[i])));
      for (std::size_t j = 0; j < k; ++j) {
        const double d = sq_dist(x.row(i), centroids.row(j));
        if (d < bd) {
          bd = d;
          best = static_cast<int>(j);
        }
      }
      if (assign[i] != best) changed = true;
      assign[i] = best;
      cost[i] = bd;
    }

    // Empty clusters take the point farthest from its centroid among
    // clusters that can spare one.
    std::vector<std::size_t> counts(k, 0);
    for (int a : assign) ++counts[static_cast<std::size_t>(a)];
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t far = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (counts[static_cast<std::size_t>(assign[i])] < 2) continue;
        if (far == m || cost[i] > cost[far]) far = i;
      }
      if (far == m) break;
      --counts[static_cast<std::size_t>(assign[far])];
      assign[far] = static_cast<int>(j);
      cost[far] = 0.0;
      ++counts[j];
      ++res.empty_repairs;
      changed = true;
    }

    DenseMatrix next(k, dim);
    for (std::size_t i = 0; i < m; ++i) {
      auto row = next.row(static_cast<std::size_t>(assign[i]));
      for (std::size_t d = 0; d < dim; ++d) row[d] += x(i, d);
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        std::copy(centroids.row(j).begin(), centroids.row(j).end(), next.row(j).begin());
        continue;
      }
      for (double& v : next.row(j)) v /= static_cast<double>(counts[j]);
    }
    centroids = std::move(next);

    double inertia = 0.0;
    for (std::size_t i = 0; i < m; ++i) inertia += sq_dist(x.row(i), centroids.row(static_cast<std::size_t>(assign[i])));
    res.inertia_trace.push_back(inertia);
    res.iterations = it;
    if (!changed && it > 1) break;
  }
  res.inertia = res.inertia_trace.empty() ? 0.0 : res.inertia_trace.back();
  res.partition = Partition::canonical(assign);
  res.centroids = DenseMatrix(k, dim);
  std::vector<bool> placed(k, false);
  for (std::size_t i = 0; i < m; ++i) {
    const auto from = static_cast<std::size_t>(assign[i]);
    const auto to = static_cast<std::size_t>(res.partition.labels[i]);
    if (placed[to]) continue;
    placed[to] = true;
    std::copy(centroids.row(from).begin(), centroids.row(from).end(), res.centroids.row(to).begin());
  }
  return res;
}

}  // namespace detail

/// k-means on the rows of `points`: k-means++ seeding, Lloyd iterations until
/// assignments are stable (or max_iterations), best of `restarts` by inertia.
/// Deterministic for a fixed (points, seed, restarts).
inline KMeansResult kmeans(const DenseMatrix& points, const KMeansOptions& opt) {
  const std::size_t m = points.rows();
  if (opt.k < 1) throw ConfigError("kmeans: k must be at least 1");
  if (opt.k > m) throw ConfigError("kmeans: k exceeds the number of points");
  if (opt.restarts < 1) throw ConfigError("kmeans: restarts must be at least 1");

  KMeansResult best;
  bool have = false;
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng(Rng::derive(opt.seed, static_cast<std::uint64_t>(r)));
    KMeansResult run = detail::lloyd(points, detail::kmeanspp_seed(points, opt.k, rng), opt.max_iterations);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

}  // namespace dgclust
