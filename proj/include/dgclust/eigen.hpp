#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"

namespace dgclust {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Full symmetric spectrum: values ascending, column j of `vectors` is the unit
// eigenvector of values[j] with its first nonzero component positive.
struct EigenPairs {
  DenseVector values;
  DenseMatrix vectors;
};

struct ComplexEigenPair {
  Complex value;
  ComplexVector vector;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// First component with magnitude above `tol` is made positive.
inline void canonicalize_column_sign(DenseMatrix& v, std::size_t j, double tol = 1e-10) {
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double x = v(i, j);
    if (std::abs(x) > tol) {
      if (x < 0.0)
        for (std::size_t r = 0; r < v.rows(); ++r) v(r, j) = -v(r, j);
      return;
    }
  }
}

}  // namespace detail

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Throws DomainError when the input is not symmetric to 1e-10 relative.
inline EigenPairs eigh_symmetric(const DenseMatrix& input) {
  if (!input.square()) throw DomainError("eigh_symmetric: matrix is not square");
  if (!input.all_finite()) throw DomainError("eigh_symmetric: non-finite entries");
  const std::size_t n = input.rows();
  const double scale = inf_norm(input);
  if (!is_symmetric(input, 1e-10 * scale)) throw DomainError("eigh_symmetric: matrix is not symmetric");

  DenseMatrix a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (input(i, j) + input(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double fro = frobenius_norm(a);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= detail::kEps * fro * 1e-2 || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        if (std::abs(apq) < detail::kEps * 1e-3 * (std::abs(a(p, p)) + std::abs(a(q, q))) &&
            sweep > 3) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenPairs out{DenseVector(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    detail::canonicalize_column_sign(out.vectors, j);
  }
  return out;
}

namespace detail {

// Householder reduction to upper Hessenberg form (similarity transform).
inline DenseMatrix hessenberg(DenseMatrix a) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0.0) alpha = -alpha;
    DenseVector u(n, 0.0);
    u[k + 1] = a(k + 1, k) - alpha;
    for (std::size_t i = k + 2; i < n; ++i) u[i] = a(i, k);
    const double unorm2 = dot(u, u);
    if (unorm2 == 0.0) continue;
    // A <- H A H with H = I - 2 u u^T / (u^T u)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += u[i] * a(i, j);
      s = 2.0 * s / unorm2;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * u[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * u[j];
      s = 2.0 * s / unorm2;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * u[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return a;
}

// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
// Wilkinson shifts and deflation.
inline ComplexVector hessenberg_qr_eigenvalues(const DenseMatrix& hess) {
  const std::size_t n = hess.rows();
  std::vector<ComplexVector> h(n, ComplexVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i][j] = hess(i, j);

  const double anorm = std::max(max_abs(hess), std::numeric_limits<double>::min());
  std::vector<Complex> cs(n), sn(n);
  std::size_t hi = n == 0 ? 0 : n - 1;
  int iter = 0;
  const int max_iter = 100 * static_cast<int>(std::max<std::size_t>(n, 10));
  int total = 0;
  while (n > 0 && hi > 0) {
    std::size_t lo = hi;
    while (lo > 0) {
      double s = std::abs(h[lo - 1][lo - 1]) + std::abs(h[lo][lo]);
      if (s == 0.0) s = anorm;
      if (std::abs(h[lo][lo - 1]) <= kEps * s) break;
      --lo;
    }
    if (lo > 0) h[lo][lo - 1] = 0.0;
    if (lo == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (++total > max_iter) throw NumericError("general eigensolver: QR iteration did not converge");

    Complex mu;
    if (iter > 0 && iter % 10 == 0) {
      mu = h[hi][hi] + Complex(0.75 * std::abs(h[hi][hi - 1]), 0.4 * std::abs(h[hi][hi - 1]));
    } else {
      const Complex a = h[hi - 1][hi - 1], b = h[hi - 1][hi], c = h[hi][hi - 1], d = h[hi][hi];
      const Complex half_tr = 0.5 * (a + d);
      const Complex disc = std::sqrt(half_tr * half_tr - (a * d - b * c));
      const Complex m1 = half_tr + disc, m2 = half_tr - disc;
      mu = std::abs(m1 - d) <= std::abs(m2 - d) ? m1 : m2;
    }
    ++iter;

    for (std::size_t k = lo; k <= hi; ++k) h[k][k] -= mu;
    for (std::size_t k = lo; k < hi; ++k) {
      const Complex x = h[k][k], y = h[k + 1][k];
      const double r = std::hypot(std::abs(x), std::abs(y));
      Complex c = 1.0, s = 0.0;
      if (r != 0.0) {
        c = x / r;
        s = y / r;
      }
      cs[k] = c;
      sn[k] = s;
      for (std::size_t j = k; j <= hi; ++j) {
        const Complex hk = h[k][j], hk1 = h[k + 1][j];
        h[k][j] = std::conj(c) * hk + std::conj(s) * hk1;
        h[k + 1][j] = -s * hk + c * hk1;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Complex c = cs[k], s = sn[k];
      for (std::size_t i = lo; i <= std::min(k + 1, hi); ++i) {
        const Complex hk = h[i][k], hk1 = h[i][k + 1];
        h[i][k] = hk * c + hk1 * s;
        h[i][k + 1] = -hk * std::conj(s) + hk1 * std::conj(c);
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h[k][k] += mu;
  }

  ComplexVector values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = h[i][i];
  return values;
}

// Ordering for general spectra: modulus descending, then real part
// descending, then nonnegative imaginary part first.
inline bool spectral_order(Complex a, Complex b, double tol) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (std::abs(ma - mb) > tol) return ma > mb;
  if (std::abs(a.real() - b.real()) > tol) return a.real() > b.real();
  const bool a_up = a.imag() >= -tol, b_up = b.imag() >= -tol;
  if (a_up != b_up) return a_up;
  return a.imag() > b.imag() + tol;
}

// Solves (A - mu I) x = b by LU with partial pivoting; exactly singular
// pivots are replaced by a tiny multiple of the matrix scale.
inline ComplexVector shifted_solve(const DenseMatrix& a, Complex mu, ComplexVector b) {
  const std::size_t n = a.rows();
  std::vector<ComplexVector> m(n, ComplexVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j) - (i == j ? mu : Complex(0.0));
  const double tiny = kEps * std::max(1.0, inf_norm(a));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    std::swap(m[k], m[piv]);
    std::swap(b[k], b[piv]);
    if (std::abs(m[k][k]) < tiny) m[k][k] = tiny;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = m[i][k] / m[k][k];
      if (f == Complex(0.0)) continue;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      b[i] -= f * b[k];
    }
  }
  ComplexVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

inline double cnorm(const ComplexVector& x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

inline Complex cdot(const ComplexVector& a, const ComplexVector& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace detail

/// All eigenvalues of a general real matrix in spectral order (modulus
/// descending, real part descending, nonnegative imaginary part first).
/// Values whose imaginary part is below 1e-12 relative are snapped to real.
inline ComplexVector general_eigenvalues(const DenseMatrix& a) {
  if (!a.square()) throw DomainError("general_eigenvalues: matrix is not square");
  if (!a.all_finite()) throw DomainError("general_eigenvalues: non-finite entries");
  ComplexVector values = detail::hessenberg_qr_eigenvalues(detail::hessenberg(a));
  const double scale = std::max(1.0, inf_norm(a));
  for (auto& z : values)
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
  std::stable_sort(values.begin(), values.end(),
                   [&](Complex x, Complex y) { return detail::spectral_order(x, y, 1e-9 * scale); });
  return values;
}

/// Leading `count` eigenpairs of a general real matrix in spectral order.
/// Vectors come from shifted inverse iteration; inside a cluster of equal
/// eigenvalues later vectors are kept orthogonal to earlier ones. Each vector
/// has unit norm and its largest-modulus component has zero phase.
inline std::vector<ComplexEigenPair> general_eigenpairs(const DenseMatrix& a, std::size_t count) {
  const ComplexVector values = general_eigenvalues(a);
  const std::size_t n = a.rows();
  count = std::min(count, n);
  const double scale = std::max(1.0, inf_norm(a));

  std::vector<ComplexEigenPair> out;
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Complex lambda = values[idx];
    std::vector<const ComplexVector*> cluster;
    for (std::size_t prev = 0; prev < idx; ++prev)
      if (std::abs(values[prev] - lambda) <= 1e-8 * scale) cluster.push_back(&out[prev].vector);

    const Complex mu = lambda + Complex(1e-10 * scale, 0.0);
    ComplexVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    for (int it = 0; it < 6; ++it) {
      x = detail::shifted_solve(a, mu, x);
      for (int pass = 0; pass < 2; ++pass)
        for (const ComplexVector* u : cluster) {
          const Complex proj = detail::cdot(*u, x);
          for (std::size_t i = 0; i < n; ++i) x[i] -= proj * (*u)[i];
        }
      const double nx = detail::cnorm(x);
      if (nx == 0.0 || !std::isfinite(nx)) throw NumericError("general_eigenpairs: inverse iteration broke down");
      for (auto& z : x) z /= nx;
    }

    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(x[i]) > std::abs(x[big]) * (1.0 + 1e-9)) big = i;
    const Complex phase = std::conj(x[big]) / std::abs(x[big]);
    for (auto& z : x) z *= phase;

    // Rayleigh quotient minimizes the residual for the computed vector.
    ComplexVector ax(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ax[i] += a(i, j) * x[j];
    Complex value = detail::cdot(x, ax);
    if (lambda.imag() == 0.0) value = Complex(value.real(), 0.0);
    out.push_back({value, std::move(x)});
  }
  return out;
}

}  // namespace dgclust
