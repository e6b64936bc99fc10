#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/leiden.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/spectral.hpp"
#include "dgclust/walktrap.hpp"

namespace dgclust {

enum class Algorithm {
  spectral_unnorm,
  spectral_norm,
  leiden,
  walktrap,
  simple_sym,
  bibliometric,
  cdl,
  svd,
  randwalk,
};

inline constexpr std::array<std::pair<Algorithm, std::string_view>, 9> kAlgorithmNames{{
    {Algorithm::spectral_unnorm, "spectral-unnorm"},
    {Algorithm::spectral_norm, "spectral-norm"},
    {Algorithm::leiden, "leiden"},
    {Algorithm::walktrap, "walktrap"},
    {Algorithm::simple_sym, "simple-sym"},
    {Algorithm::bibliometric, "bibliometric"},
    {Algorithm::cdl, "cdl"},
    {Algorithm::svd, "svd"},
    {Algorithm::randwalk, "randwalk"},
}};

inline std::string_view to_string(Algorithm a) {
  for (const auto& [alg, name] : kAlgorithmNames)
    if (alg == a) return name;
  return "unknown";
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kAlgorithmNames)
    if (n == name) return alg;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

// Algorithms that run on the undirected graph W + W^T.
inline bool uses_undirected_graph(Algorithm a) {
  return a == Algorithm::spectral_unnorm || a == Algorithm::spectral_norm || a == Algorithm::leiden ||
         a == Algorithm::walktrap || a == Algorithm::simple_sym;
}

struct ClusterRequest {
  Algorithm algorithm = Algorithm::spectral_norm;
  // Required by every algorithm except leiden; optional for walktrap.
  std::optional<std::size_t> k = 2;
  std::optional<std::size_t> d;
  std::optional<double> gamma;
  int walk_length = 4;
  double teleport = 0.0;
  std::uint64_t seed = 0;
  int restarts = 10;
  KernelKind kernel = KernelKind::cdf;
};

struct ClusterOutcome {
  Partition partition;  // over all graph nodes, -1 for excluded nodes
  std::vector<std::size_t> excluded;
  std::optional<std::size_t> d;
  std::optional<double> gamma;
  std::optional<double> teleport;
  bool teleport_applied = false;
  bool degenerate = false;
  bool kernel_degenerate = false;
  std::optional<std::complex<double>> eigenvalue;
  std::optional<double> quality;
};

/// Matrix an algorithm clusters: self-loops removed, then symmetrized as the
/// algorithm requires.
inline DenseMatrix analysis_matrix(const WeightedDigraph& g, Algorithm a) {
  const DenseMatrix w = with_zero_diagonal(g.weights);
  if (uses_undirected_graph(a)) return w + w.transpose();
  if (a == Algorithm::bibliometric) return with_zero_diagonal(bibliometric_matrix(w));
  return w;
}

/// Runs one clustering path end to end on a graph. Nodes without edges in
/// the analysis matrix are left out and labelled -1.
inline ClusterOutcome run_cluster(const WeightedDigraph& g, const ClusterRequest& req) {
  const DenseMatrix m = analysis_matrix(g, req.algorithm);
  ClusterOutcome out;
  out.excluded = isolated_nodes(m);
  std::vector<std::size_t> keep;
  {
    std::size_t e = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (e < out.excluded.size() && out.excluded[e] == i) {
        ++e;
        continue;
      }
      keep.push_back(i);
    }
  }
  const DenseMatrix sub = principal_submatrix(m, keep);
  const std::size_t n = keep.size();

  auto need_k = [&]() -> std::size_t {
    if (!req.k) throw ConfigError(std::string(to_string(req.algorithm)) + " requires k");
    if (*req.k < 2 || *req.k > n)
      throw ConfigError("k must satisfy 2 <= k <= " + std::to_string(n) + " (clusterable nodes), got " + std::to_string(*req.k));
    return *req.k;
  };

  Partition p;
  switch (req.algorithm) {
    case Algorithm::spectral_unnorm:
    case Algorithm::spectral_norm:
    case Algorithm::simple_sym:
    case Algorithm::bibliometric: {
      const auto variant = req.algorithm == Algorithm::spectral_unnorm ? LaplacianVariant::unnormalized
                                                                       : LaplacianVariant::normalized;
      p = spectral_cluster(sub, {.k = need_k(), .variant = variant, .seed = req.seed, .restarts = req.restarts});
      break;
    }
    case Algorithm::cdl: {
      const CdlResult r = cdl_cluster(sub, {.k = need_k(), .teleport = req.teleport, .seed = req.seed, .restarts = req.restarts});
      p = r.partition;
      out.teleport = r.teleport;
      out.teleport_applied = r.teleport_applied;
      break;
    }
    case Algorithm::svd: {
      const SvdClusterResult r = svd_cluster(sub, {.d = req.d, .k = need_k(), .seed = req.seed, .restarts = req.restarts});
      p = r.partition;
      out.d = r.d;
      break;
    }
    case Algorithm::randwalk: {
      const RandWalkResult r = randwalk_cluster(
          sub, {.k = need_k(), .teleport = req.teleport, .seed = req.seed, .restarts = req.restarts, .kernel = req.kernel});
      p = r.partition;
      out.teleport = r.teleport;
      out.teleport_applied = r.teleport_applied;
      out.degenerate = r.degenerate;
      out.kernel_degenerate = r.kernel_degenerate;
      out.eigenvalue = r.eigenvalue;
      break;
    }
    case Algorithm::leiden: {
      const LeidenResult r = leiden(sub, {.gamma = req.gamma, .max_levels = 20, .seed = req.seed});
      p = r.partition;
      out.gamma = r.gamma;
      out.quality = r.quality;
      break;
    }
    case Algorithm::walktrap: {
      std::optional<std::size_t> k;
      if (req.k) {
        if (*req.k < 1 || *req.k > n) throw ConfigError("k must satisfy 1 <= k <= " + std::to_string(n));
        k = req.k;
      }
      const WalktrapResult r = walktrap(sub, {.walk_length = req.walk_length, .k = k});
      p = r.partition;
      out.quality = r.modularity[r.merges_applied];
      break;
    }
  }
  out.partition = expand_partition(p, keep, g.size());
  return out;
}

}  // namespace dgclust
