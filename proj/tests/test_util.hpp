#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing in
// here calls into the numerics of the library under test.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/random.hpp"

namespace dgclust::test {

inline Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = 0.0, double hi = 1.0) {
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline DenseMatrix random_symmetric(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(lo, hi);
  return m;
}

// Symmetric nonnegative weights with zero diagonal, edges kept with
// probability `density`, plus a Hamiltonian path so the graph is connected.
inline DenseMatrix random_connected_weights(std::size_t n, Rng& rng, double density = 0.4) {
  DenseMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < density) w(i, j) = w(j, i) = rng.uniform(0.1, 2.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (w(i, i + 1) == 0.0) w(i, i + 1) = w(i + 1, i) = rng.uniform(0.1, 2.0);
  return w;
}

inline DenseMatrix two_triangles(double bridge = 0.0) {
  DenseMatrix w(6, 6);
  auto link = [&](std::size_t a, std::size_t b, double x) { w(a, b) = w(b, a) = x; };
  link(0, 1, 1);
  link(1, 2, 1);
  link(0, 2, 1);
  link(3, 4, 1);
  link(4, 5, 1);
  link(3, 5, 1);
  if (bridge > 0.0) link(2, 3, bridge);
  return w;
}

// Calls `visit` with every set partition of {0..n-1} (restricted growth strings).
inline void for_each_set_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> a(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_label) {
    if (i == n) {
      visit(a);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      a[i] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) {
    visit(a);
    return;
  }
  a[0] = 0;
  rec(1, 0);
}

// ARI by explicit enumeration of all node pairs.
inline double pair_counting_ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) ++both;
      else if (sa) ++only_a;
      else if (sb) ++only_b;
      else ++neither;
    }
  const double pairs = both + only_a + only_b + neither;
  const double same_a = both + only_a, same_b = both + only_b;
  const double expected = same_a * same_b / pairs;
  const double max_index = 0.5 * (same_a + same_b);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

}  // namespace dgclust::test
