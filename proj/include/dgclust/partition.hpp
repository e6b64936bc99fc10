#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "dgclust/error.hpp"

namespace dgclust {

// Node -> cluster assignment. Labels are 0..k-1; the reserved label -1 marks
// nodes that were excluded from clustering (isolated nodes).
struct Partition {
  static constexpr int kExcluded = -1;

  std::vector<int> labels;
  int k = 0;

  std::size_t size() const noexcept { return labels.size(); }

  // Relabels clusters in order of first appearance and recounts k.
  static Partition canonical(const std::vector<int>& raw) {
    Partition p;
    p.labels.resize(raw.size());
    std::map<int, int> remap;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == kExcluded) {
        p.labels[i] = kExcluded;
        continue;
      }
      auto [it, inserted] = remap.try_emplace(raw[i], static_cast<int>(remap.size()));
      p.labels[i] = it->second;
    }
    p.k = static_cast<int>(remap.size());
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<int>(i);
    return canonical(raw);
  }

  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] != kExcluded) out[static_cast<std::size_t>(labels[i])].push_back(i);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Places a partition of the kept nodes back onto the full node set; every
// other node receives the excluded label.
inline Partition expand_partition(const Partition& sub, const std::vector<std::size_t>& kept, std::size_t n) {
  if (sub.size() != kept.size()) throw DomainError("expand_partition: size mismatch");
  std::vector<int> raw(n, Partition::kExcluded);
  for (std::size_t i = 0; i < kept.size(); ++i) raw[kept[i]] = sub.labels[i];
  return Partition::canonical(raw);
}

}  // namespace dgclust
