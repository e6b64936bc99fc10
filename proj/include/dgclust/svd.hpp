#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dgclust/eigen.hpp"
#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"

namespace dgclust {

// A = U diag(singular_values) V^T with U (m x m) and V (n x n) orthogonal and
// singular values in decreasing order.
struct SvdResult {
  DenseMatrix u;
  DenseVector singular_values;
  DenseMatrix v;
};

namespace detail {

// Fills columns [from, m) of `u` with an orthonormal completion of the
// columns before them (modified Gram-Schmidt over the standard basis).
inline void complete_orthonormal(DenseMatrix& u, std::size_t from) {
  const std::size_t m = u.rows();
  std::size_t filled = from;
  for (std::size_t e = 0; e < m && filled < u.cols(); ++e) {
    DenseVector c(m, 0.0);
    c[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < filled; ++j) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += u(i, j) * c[i];
        for (std::size_t i = 0; i < m; ++i) c[i] -= proj * u(i, j);
      }
    }
    const double nc = norm2(c);
    if (nc < 1e-8) continue;
    for (std::size_t i = 0; i < m; ++i) u(i, filled) = c[i] / nc;
    ++filled;
  }
}

// One-sided (Hestenes) Jacobi SVD for rows >= cols.
inline SvdResult jacobi_svd_tall(const DenseMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  DenseMatrix g = a;
  DenseMatrix v = DenseMatrix::identity(n);

  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += g(i, p) * g(i, p);
          beta += g(i, q) * g(i, q);
          gamma += g(i, p) * g(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double gp = g(i, p), gq = g(i, q);
          g(i, p) = c * gp - s * gq;
          g(i, q) = s * gp + c * gq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  DenseVector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(g.col(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out{DenseMatrix(m, m), DenseVector(n), DenseMatrix(n, n)};
  const double smax = n == 0 ? 0.0 : sigma[order[0]];
  const double cutoff = static_cast<double>(std::max(m, n)) * kEps * smax;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.singular_values[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
    if (sigma[src] > cutoff && sigma[src] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = g(i, src) / sigma[src];
      ++rank;
    }
  }
  complete_orthonormal(out.u, rank);

  // Sign rule: first clearly nonzero entry of each right singular vector is
  // positive; the paired left vector flips with it.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(out.v(i, j)) > 1e-10) {
        if (out.v(i, j) < 0.0) {
          for (std::size_t r = 0; r < n; ++r) out.v(r, j) = -out.v(r, j);
          for (std::size_t r = 0; r < m; ++r) out.u(r, j) = -out.u(r, j);
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Full SVD of a finite dense matrix. For rows < cols the factorization of the
/// transpose is computed and swapped; singular_values has min(rows, cols)
/// entries in decreasing order.
inline SvdResult svd(const DenseMatrix& a) {
  if (!a.all_finite()) throw DomainError("svd: non-finite entries");
  if (a.rows() >= a.cols()) return detail::jacobi_svd_tall(a);
  SvdResult t = detail::jacobi_svd_tall(a.transpose());
  return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

}  // namespace dgclust
