#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dgclust/eigen.hpp"
#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/kmeans.hpp"
#include "dgclust/markov.hpp"
#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/svd.hpp"

namespace dgclust {

enum class LaplacianVariant { unnormalized, normalized };

// Teleport used when the directed graph violates the irreducibility or
// aperiodicity that the stationary distribution needs.
inline constexpr double kFallbackTeleport = 0.15;

struct SpectralConfig {
  std::size_t k = 2;
  LaplacianVariant variant = LaplacianVariant::normalized;
  std::uint64_t seed = 0;
  int restarts = 10;
};

struct CdlConfig {
  std::size_t k = 2;
  // 0 means: use the plain walk, falling back to kFallbackTeleport when the
  // graph is not strongly connected and aperiodic.
  double teleport = 0.0;
  std::uint64_t seed = 0;
  int restarts = 10;
};

struct SvdConfig {
  std::optional<std::size_t> d;  // nullopt selects auto_latent_dim
  std::size_t k = 2;
  std::uint64_t seed = 0;
  int restarts = 10;
};

// How the components of the second eigenvector are mapped before k-means.
//   density: exp(-(v - mean)^2 / (2 sd^2))
//   cdf:     standard normal CDF of (v - mean) / sd
enum class KernelKind { density, cdf };

struct RandWalkConfig {
  std::size_t k = 2;
  double teleport = 0.0;
  std::uint64_t seed = 0;
  int restarts = 10;
  KernelKind kernel = KernelKind::cdf;
};

namespace detail {

inline void require_symmetric_nonnegative(const DenseMatrix& w, const char* who) {
  if (!w.square()) throw DomainError(std::string(who) + ": matrix is not square");
  if (!is_symmetric(w, 1e-12 * std::max(1.0, max_abs(w)))) throw DomainError(std::string(who) + ": matrix is not symmetric");
  for (double x : w.data())
    if (x < 0.0) throw DomainError(std::string(who) + ": negative weight");
  for (std::size_t i = 0; i < w.rows(); ++i)
    if (w(i, i) != 0.0) throw DomainError(std::string(who) + ": nonzero diagonal (zero self-loops first)");
}

inline DenseVector positive_degrees(const DenseMatrix& w, const char* who) {
  DenseVector d = degrees(w).out_degree;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw DomainError(std::string(who) + ": node " + std::to_string(i) + " has zero degree");
  return d;
}

inline void check_k(std::size_t k, std::size_t n) {
  if (k < 2 || k > n) throw ConfigError("k must satisfy 2 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
}

}  // namespace detail

/// Unnormalized: D - W. Normalized: the random-walk Laplacian I - D^{-1} W.
inline DenseMatrix laplacian(const DenseMatrix& w, LaplacianVariant variant) {
  detail::require_symmetric_nonnegative(w, "laplacian");
  const std::size_t n = w.rows();
  DenseMatrix l(n, n);
  if (variant == LaplacianVariant::unnormalized) {
    const DenseVector d = degrees(w).out_degree;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) l(i, j) = (i == j ? d[i] : 0.0) - w(i, j);
    return l;
  }
  const DenseVector d = detail::positive_degrees(w, "laplacian");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) l(i, j) = (i == j ? 1.0 : 0.0) - w(i, j) / d[i];
  return l;
}

/// I - D^{-1/2} W D^{-1/2}, similar to the random-walk Laplacian.
inline DenseMatrix symmetric_normalized_laplacian(const DenseMatrix& w) {
  detail::require_symmetric_nonnegative(w, "laplacian");
  const DenseVector d = detail::positive_degrees(w, "laplacian");
  const std::size_t n = w.rows();
  DenseMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = (i == j ? 1.0 : 0.0) - w(i, j) / std::sqrt(d[i] * d[j]);
      l(i, j) = l(j, i) = v;
    }
  return l;
}

/// Spectrum of the chosen Laplacian, ascending. For the normalized variant
/// the eigenvectors are those of I - D^{-1} W, obtained as D^{-1/2} times the
/// eigenvectors of the symmetric form and rescaled to unit norm.
inline EigenPairs laplacian_eigenpairs(const DenseMatrix& w, LaplacianVariant variant) {
  if (variant == LaplacianVariant::unnormalized) return eigh_symmetric(laplacian(w, variant));
  const DenseVector d = detail::positive_degrees(w, "laplacian");
  EigenPairs e = eigh_symmetric(symmetric_normalized_laplacian(w));
  const std::size_t n = w.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e.vectors(i, j) /= std::sqrt(d[i]);
      s += e.vectors(i, j) * e.vectors(i, j);
    }
    s = std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) e.vectors(i, j) /= s;
    detail::canonicalize_column_sign(e.vectors, j);
  }
  return e;
}

inline Partition cluster_embedding(const DenseMatrix& embedding, std::size_t k, std::uint64_t seed, int restarts) {
  return kmeans(embedding, {.k = k, .seed = seed, .restarts = restarts}).partition;
}

/// k smallest Laplacian eigenvectors as columns, rows clustered by k-means.
inline Partition spectral_cluster(const DenseMatrix& w, const SpectralConfig& cfg) {
  detail::check_k(cfg.k, w.rows());
  const EigenPairs e = laplacian_eigenpairs(w, cfg.variant);
  return cluster_embedding(leading_columns(e.vectors, cfg.k), cfg.k, cfg.seed, cfg.restarts);
}

struct CdlLaplacian {
  DenseMatrix laplacian;
  DenseVector stationary;
};

/// Directed Laplacian I - (Pi^{1/2} P Pi^{-1/2} + Pi^{-1/2} P^T Pi^{1/2}) / 2
/// with P the teleporting transition matrix and Pi its stationary distribution.
inline CdlLaplacian cdl_laplacian_parts(const DenseMatrix& w, double teleport = 0.0) {
  const DenseMatrix p = transition_matrix(w, teleport);
  DenseVector pi = stationary(p).pi;
  const std::size_t n = w.rows();
  DenseVector root(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pi[i] > 0.0)) throw NumericError("cdl_laplacian: stationary probability of node " + std::to_string(i) + " is zero");
    root[i] = std::sqrt(pi[i]);
  }
  DenseMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double fwd = root[i] * p(i, j) / root[j];
      const double bwd = root[j] * p(j, i) / root[i];
      const double v = (i == j ? 1.0 : 0.0) - 0.5 * (fwd + bwd);
      l(i, j) = l(j, i) = v;
    }
  return {std::move(l), std::move(pi)};
}

inline DenseMatrix cdl_laplacian(const DenseMatrix& w, double teleport = 0.0) {
  return cdl_laplacian_parts(w, teleport).laplacian;
}

/// Whether the plain random walk on `w` (self-loops ignored) is irreducible
/// and aperiodic.
inline bool walk_is_ergodic(const DenseMatrix& w) {
  const DenseMatrix z = with_zero_diagonal(w);
  return is_strongly_connected(z) && is_aperiodic(z);
}

struct CdlResult {
  Partition partition;
  double teleport = 0.0;
  bool teleport_applied = false;
};

inline CdlResult cdl_cluster(const DenseMatrix& weights, const CdlConfig& cfg) {
  detail::check_k(cfg.k, weights.rows());
  const DenseMatrix w = with_zero_diagonal(weights);
  CdlResult out;
  out.teleport = cfg.teleport;
  if (cfg.teleport == 0.0 && !walk_is_ergodic(w)) {
    out.teleport = kFallbackTeleport;
    out.teleport_applied = true;
  }
  const EigenPairs e = eigh_symmetric(cdl_laplacian(w, out.teleport));
  out.partition = cluster_embedding(leading_columns(e.vectors, cfg.k), cfg.k, cfg.seed, cfg.restarts);
  return out;
}

/// Index of the largest relative gap S[i-1] / max(S[i], 1e-12 S[0]) over
/// i in 1..ceil(n/2); at least 1.
inline std::size_t auto_latent_dim(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0 || !(s[0] > 0.0)) return 1;
  const double floor = 1e-12 * s[0];
  std::size_t best = 1;
  double best_ratio = -1.0;
  for (std::size_t i = 1; i <= (n + 1) / 2; ++i) {
    const double next = i < n ? s[i] : 0.0;
    const double ratio = s[i - 1] / std::max(next, floor);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return best;
}

/// Rows of [U_d S_d^{1/2} | V_d S_d^{1/2}].
inline DenseMatrix svd_embedding(const SvdResult& f, std::size_t d) {
  const std::size_t n = f.u.rows();
  DenseMatrix z(n, 2 * d);
  for (std::size_t j = 0; j < d; ++j) {
    const double r = std::sqrt(f.singular_values[j]);
    for (std::size_t i = 0; i < n; ++i) {
      z(i, j) = f.u(i, j) * r;
      z(i, d + j) = f.v(i, j) * r;
    }
  }
  return z;
}

struct SvdClusterResult {
  Partition partition;
  std::size_t d = 0;
  DenseVector singular_values;
};

inline SvdClusterResult svd_cluster(const DenseMatrix& w, const SvdConfig& cfg) {
  if (!w.square()) throw DomainError("svd_cluster: weight matrix is not square");
  detail::check_k(cfg.k, w.rows());
  SvdResult f = svd(w);
  const std::size_t d = cfg.d ? *cfg.d : auto_latent_dim(f.singular_values);
  if (d < 1 || d > w.rows()) throw ConfigError("svd_cluster: latent dimension d must satisfy 1 <= d <= n");
  SvdClusterResult out;
  out.partition = cluster_embedding(svd_embedding(f, d), cfg.k, cfg.seed, cfg.restarts);
  out.d = d;
  out.singular_values = std::move(f.singular_values);
  return out;
}

struct KernelOutput {
  DenseVector w;
  bool degenerate = false;
};

namespace detail {

inline std::pair<double, double> mean_and_sample_sd(std::span<const double> v) {
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd};
}

}  // namespace detail

/// w_i = exp(-(v_i - mean)^2 / (2 sd^2)) with the sample mean and standard
/// deviation of v. A spread below 1e-14 yields all ones and the degenerate flag.
inline KernelOutput gaussian_kernel(std::span<const double> v) {
  KernelOutput out{DenseVector(v.size(), 1.0), false};
  const auto [mean, sd] = detail::mean_and_sample_sd(v);
  if (sd <= 1e-14) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double z = v[i] - mean;
    out.w[i] = std::exp(-z * z / (2.0 * sd * sd));
  }
  return out;
}

/// w_i = Phi((v_i - mean) / sd), Phi the standard normal CDF.
inline KernelOutput gaussian_cdf_kernel(std::span<const double> v) {
  KernelOutput out{DenseVector(v.size(), 1.0), false};
  const auto [mean, sd] = detail::mean_and_sample_sd(v);
  if (sd <= 1e-14) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out.w[i] = 0.5 * std::erfc(-(v[i] - mean) / (sd * std::sqrt(2.0)));
  return out;
}

struct RandWalkResult {
  Partition partition;
  Complex eigenvalue;
  // second eigenvalue ties the leading one in modulus
  bool degenerate = false;
  bool kernel_degenerate = false;
  double teleport = 0.0;
  bool teleport_applied = false;
  DenseVector kernel_values;
};

/// Second eigenvector u of P, v_i = Re(u_i) + Im(u_i), kernel-mapped, then
/// one-dimensional k-means on the mapped values.
inline RandWalkResult randwalk_cluster(const DenseMatrix& weights, const RandWalkConfig& cfg) {
  detail::check_k(cfg.k, weights.rows());
  const DenseMatrix w = with_zero_diagonal(weights);
  RandWalkResult out;
  out.teleport = cfg.teleport;
  if (cfg.teleport == 0.0) {
    const DenseVector d = degrees(w).out_degree;
    for (double x : d)
      if (!(x > 0.0)) {
        out.teleport = kFallbackTeleport;
        out.teleport_applied = true;
        break;
      }
  }
  const DenseMatrix p = transition_matrix(w, out.teleport);
  const SecondEigenpair second = second_eigenpair(p);
  out.eigenvalue = second.pair.value;
  out.degenerate = second.degenerate;

  const std::size_t n = w.rows();
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = second.pair.vector[i].real() + second.pair.vector[i].imag();
  const KernelOutput k = cfg.kernel == KernelKind::cdf ? gaussian_cdf_kernel(v) : gaussian_kernel(v);
  out.kernel_degenerate = k.degenerate;
  out.partition = cluster_embedding(DenseMatrix(n, 1, k.w), cfg.k, cfg.seed, cfg.restarts);
  out.kernel_values = k.w;
  return out;
}

}  // namespace dgclust
