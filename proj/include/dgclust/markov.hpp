#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dgclust/eigen.hpp"
#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"

namespace dgclust {

/// Random-walk transition matrix P = (1 - teleport) D^{-1} W + teleport J / n,
/// where D holds the row sums of W. With teleport = 0 a zero row is an error.
inline DenseMatrix transition_matrix(const DenseMatrix& w, double teleport = 0.0) {
  if (!w.square()) throw DomainError("transition_matrix: weight matrix is not square");
  if (!(teleport >= 0.0 && teleport < 1.0)) throw ConfigError("transition_matrix: teleport must lie in [0, 1)");
  const std::size_t n = w.rows();
  DenseMatrix p(n, n);
  const double jump = n == 0 ? 0.0 : teleport / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (double x : w.row(i)) d += x;
    if (d <= 0.0) {
      if (teleport == 0.0) throw NumericError("transition_matrix: node " + std::to_string(i) + " has zero out-degree");
      // Dangling rows jump uniformly.
      for (std::size_t j = 0; j < n; ++j) p(i, j) = 1.0 / static_cast<double>(n);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) p(i, j) = (1.0 - teleport) * w(i, j) / d + jump;
  }
  return p;
}

struct StationaryDistribution {
  DenseVector pi;
  int iterations = 0;
};

/// Left power iteration pi <- pi P from the uniform vector until the L1 step
/// falls to `tol` or `max_iterations` is reached (ConvergenceError).
inline StationaryDistribution stationary(const DenseMatrix& p, double tol = 1e-12, int max_iterations = 100000) {
  if (!p.square()) throw DomainError("stationary: matrix is not square");
  const std::size_t n = p.rows();
  if (n == 0) return {};
  DenseVector pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (int it = 1; it <= max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double pii = pi[i];
      if (pii == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) next[j] += pii * p(i, j);
    }
    double total = 0.0;
    for (double x : next) total += x;
    double delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] /= total;
      delta += std::abs(next[j] - pi[j]);
    }
    pi.swap(next);
    if (delta <= tol) return {std::move(pi), it};
  }
  throw ConvergenceError("stationary: power iteration did not converge in " + std::to_string(max_iterations) +
                         " iterations");
}

struct SecondEigenpair {
  ComplexEigenPair pair;
  Complex leading_value;
  // |lambda_2| is within 1e-12 of |lambda_1|; the second vector is not unique.
  bool degenerate = false;
};

/// Eigenpair at position 1 of the spectrum of P ordered by modulus
/// descending, then real part descending, then nonnegative imaginary part.
inline SecondEigenpair second_eigenpair(const DenseMatrix& p) {
  if (p.rows() < 2) throw DomainError("second_eigenpair: need at least two states");
  auto pairs = general_eigenpairs(p, 2);
  SecondEigenpair out;
  out.leading_value = pairs[0].value;
  out.pair = std::move(pairs[1]);
  out.degenerate = std::abs(out.pair.value) >= std::abs(out.leading_value) - 1e-12;
  return out;
}

}  // namespace dgclust
