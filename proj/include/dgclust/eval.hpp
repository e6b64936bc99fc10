#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"

namespace dgclust {

struct AgreementReport {
  double ari = 0.0;
  double nmi = 0.0;
  // rows: clusters of the first partition, columns: of the second
  std::vector<std::vector<std::size_t>> contingency;
  std::size_t compared = 0;
  std::size_t excluded = 0;
};

namespace detail {

inline double choose2(double x) { return 0.5 * x * (x - 1.0); }

struct Table {
  std::vector<std::vector<std::size_t>> cells;
  std::vector<double> rows, cols;
  std::size_t n = 0, excluded = 0;
};

inline Table contingency(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw DomainError("partitions have different node counts");
  std::vector<int> la, lb;
  Table t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.labels[i] == Partition::kExcluded || b.labels[i] == Partition::kExcluded) {
      ++t.excluded;
      continue;
    }
    la.push_back(a.labels[i]);
    lb.push_back(b.labels[i]);
  }
  const Partition ca = Partition::canonical(la), cb = Partition::canonical(lb);
  t.n = la.size();
  t.cells.assign(static_cast<std::size_t>(ca.k), std::vector<std::size_t>(static_cast<std::size_t>(cb.k), 0));
  t.rows.assign(static_cast<std::size_t>(ca.k), 0.0);
  t.cols.assign(static_cast<std::size_t>(cb.k), 0.0);
  for (std::size_t i = 0; i < t.n; ++i) {
    const auto r = static_cast<std::size_t>(ca.labels[i]), c = static_cast<std::size_t>(cb.labels[i]);
    ++t.cells[r][c];
    t.rows[r] += 1.0;
    t.cols[c] += 1.0;
  }
  return t;
}

inline double ari_from(const Table& t) {
  if (t.n < 2) return 1.0;
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& row : t.cells)
    for (auto x : row) index += choose2(static_cast<double>(x));
  for (double x : t.rows) sa += choose2(x);
  for (double x : t.cols) sb += choose2(x);
  const double expected = sa * sb / choose2(static_cast<double>(t.n));
  const double max_index = 0.5 * (sa + sb);
  // Both partitions trivial in the same way (all-in-one or all-singletons).
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

inline double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts)
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  return h;
}

inline double nmi_from(const Table& t) {
  if (t.n == 0) return 1.0;
  const double n = static_cast<double>(t.n);
  const double ha = entropy(t.rows, n), hb = entropy(t.cols, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (std::size_t r = 0; r < t.cells.size(); ++r)
    for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
      const double x = static_cast<double>(t.cells[r][c]);
      if (x > 0.0) mi += (x / n) * std::log(x * n / (t.rows[r] * t.cols[c]));
    }
  return std::max(0.0, mi / (0.5 * (ha + hb)));
}

}  // namespace detail

/// Adjusted Rand index over nodes labelled in both partitions.
inline double adjusted_rand_index(const Partition& a, const Partition& b) {
  return detail::ari_from(detail::contingency(a, b));
}

/// Mutual information normalized by the arithmetic mean of the entropies;
/// 1 when both partitions have zero entropy.
inline double normalized_mutual_information(const Partition& a, const Partition& b) {
  return detail::nmi_from(detail::contingency(a, b));
}

inline AgreementReport agreement(const Partition& a, const Partition& b) {
  const detail::Table t = detail::contingency(a, b);
  return {detail::ari_from(t), detail::nmi_from(t), t.cells, t.n, t.excluded};
}

struct AgreementMatrix {
  std::vector<std::string> names;
  DenseMatrix ari;
};

/// Pairwise ARI table with unit diagonal.
inline AgreementMatrix agreement_matrix(const std::vector<std::pair<std::string, Partition>>& partitions) {
  const std::size_t m = partitions.size();
  AgreementMatrix out{{}, DenseMatrix(m, m)};
  for (const auto& [name, _] : partitions) out.names.push_back(name);
  for (std::size_t i = 0; i < m; ++i) {
    out.ari(i, i) = 1.0;
    for (std::size_t j = i + 1; j < m; ++j)
      out.ari(i, j) = out.ari(j, i) = adjusted_rand_index(partitions[i].second, partitions[j].second);
  }
  return out;
}

}  // namespace dgclust
