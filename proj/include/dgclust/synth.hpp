#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/random.hpp"

namespace dgclust {

struct WeightRange {
  double lo = 1.0;
  double hi = 1.0;
};

// Directed weighted stochastic block model.
struct SbmSpec {
  std::vector<std::size_t> block_sizes{40, 40};
  double p_in = 0.5;
  double p_out = 0.05;
  WeightRange w_in{};
  WeightRange w_out{};
  std::uint64_t seed = 0;
};

struct PlantedGraph {
  WeightedDigraph graph;
  Partition truth;
};

/// Every ordered pair i != j gets an edge with probability p_in (same block)
/// or p_out, weighted uniformly in the matching range. Node ids are 1..n and
/// each edge has count 1.
inline PlantedGraph generate_sbm(const SbmSpec& spec) {
  auto valid_p = [](double p) { return p >= 0.0 && p <= 1.0; };
  auto valid_w = [](WeightRange r) { return r.lo > 0.0 && r.lo <= r.hi; };
  if (!valid_p(spec.p_in) || !valid_p(spec.p_out)) throw ConfigError("sbm: probabilities must lie in [0, 1]");
  if (!valid_w(spec.w_in) || !valid_w(spec.w_out)) throw ConfigError("sbm: weight ranges need 0 < lo <= hi");
  std::vector<int> block;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    if (spec.block_sizes[b] == 0) throw ConfigError("sbm: block sizes must be positive");
    block.insert(block.end(), spec.block_sizes[b], static_cast<int>(b));
  }
  const std::size_t n = block.size();
  if (n == 0) throw ConfigError("sbm: total node count is zero");

  PlantedGraph out;
  out.graph.node_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.graph.node_ids[i] = static_cast<std::int64_t>(i + 1);
  out.graph.weights = DenseMatrix(n, n);
  out.graph.counts = CountMatrix(n);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool same = block[i] == block[j];
      const double draw = rng.uniform();
      const WeightRange r = same ? spec.w_in : spec.w_out;
      const double weight = rng.uniform(r.lo, r.hi);
      if (draw >= (same ? spec.p_in : spec.p_out)) continue;
      out.graph.weights(i, j) = weight;
      out.graph.counts(i, j) = 1;
    }
  out.truth = Partition::canonical(block);
  return out;
}

}  // namespace dgclust
