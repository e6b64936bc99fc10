#include <gtest/gtest.h>

#include "dgclust/eval.hpp"
#include "test_util.hpp"

namespace dgclust {
namespace {

Partition p(std::vector<int> labels) { return Partition::canonical(labels); }

TEST(Ari, Examples) {
  EXPECT_EQ(adjusted_rand_index(p({0, 0, 1, 1}), p({1, 1, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(p({0, 0, 1, 1}), p({0, 1, 0, 1})), -0.5);
  EXPECT_EQ(adjusted_rand_index(p({0, 0, 0}), p({0, 0, 0})), 1.0);
  EXPECT_THROW(adjusted_rand_index(p({0, 1}), p({0, 1, 1})), DomainError);
}

TEST(Ari, MatchesPairCountingOnAllPartitionsOfSmallSets) {
  Rng rng(1);
  test::for_each_set_partition(7, [&](const std::vector<int>& a) {
    std::vector<int> b(7);
    for (int& x : b) x = static_cast<int>(rng.below(3));
    EXPECT_NEAR(adjusted_rand_index(p(a), p(b)), test::pair_counting_ari(a, b), 1e-12);
  });
}

TEST(Ari, MatchesPairCountingAtTwelve) {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> a(12), b(12);
    const std::size_t ka = 1 + rng.below(6), kb = 1 + rng.below(6);
    for (int& x : a) x = static_cast<int>(rng.below(ka));
    for (int& x : b) x = static_cast<int>(rng.below(kb));
    EXPECT_NEAR(adjusted_rand_index(p(a), p(b)), test::pair_counting_ari(a, b), 1e-12);
  }
}

TEST(Ari, PermutationInvariant) {
  Rng rng(3);
  std::vector<int> a(30), b(30);
  for (int& x : a) x = static_cast<int>(rng.below(4));
  for (int& x : b) x = static_cast<int>(rng.below(3));
  std::vector<int> relabelled(a);
  for (int& x : relabelled) x = 10 - x;
  EXPECT_NEAR(adjusted_rand_index(p(a), p(b)), adjusted_rand_index(p(relabelled), p(b)), 1e-14);
  EXPECT_NEAR(adjusted_rand_index(p(a), p(b)), adjusted_rand_index(p(b), p(a)), 1e-14);
}

TEST(Ari, ExcludedNodesAreSkipped) {
  const AgreementReport r = agreement(p({0, 0, 1, 1, -1}), p({0, 0, 1, 1, 0}));
  EXPECT_EQ(r.ari, 1.0);
  EXPECT_EQ(r.compared, 4u);
  EXPECT_EQ(r.excluded, 1u);
}

TEST(Nmi, Examples) {
  EXPECT_NEAR(normalized_mutual_information(p({0, 0, 1, 1}), p({1, 1, 0, 0})), 1.0, 1e-15);
  EXPECT_NEAR(normalized_mutual_information(p({0, 0, 1, 1}), p({0, 1, 0, 1})), 0.0, 1e-15);
  EXPECT_EQ(normalized_mutual_information(p({0, 0, 0}), p({0, 0, 0})), 1.0);
  // H(a) = ln 2, H(b) = 0, I = 0
  EXPECT_NEAR(normalized_mutual_information(p({0, 0, 1, 1}), p({0, 0, 0, 0})), 0.0, 1e-15);
}

TEST(Nmi, BoundedAndSymmetric) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(40), b(40);
    for (int& x : a) x = static_cast<int>(rng.below(5));
    for (int& x : b) x = static_cast<int>(rng.below(5));
    const double ab = normalized_mutual_information(p(a), p(b));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(ab, normalized_mutual_information(p(b), p(a)), 1e-14);
  }
}

TEST(Agreement, IndependentLabelsAreNearZero) {
  Rng rng(10000);
  std::vector<int> a(10000), b(10000);
  for (int& x : a) x = static_cast<int>(rng.below(3));
  for (int& x : b) x = static_cast<int>(rng.below(3));
  const AgreementReport r = agreement(p(a), p(b));
  EXPECT_LT(std::abs(r.ari), 0.05);
  EXPECT_LT(r.nmi, 0.05);
  std::size_t total = 0;
  for (const auto& row : r.contingency)
    for (std::size_t c : row) total += c;
  EXPECT_EQ(total, 10000u);
}

TEST(Agreement, MatrixHasUnitDiagonalAndIsSymmetric) {
  const AgreementMatrix m = agreement_matrix({{"a", p({0, 0, 1, 1})}, {"b", p({0, 1, 0, 1})}, {"c", p({1, 1, 0, 0})}});
  EXPECT_EQ(m.names, (std::vector<std::string>{"a", "b", "c"}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(m.ari(i, i), 1.0);
  EXPECT_TRUE(is_symmetric(m.ari, 0.0));
  EXPECT_EQ(m.ari(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(m.ari(0, 1), -0.5);
}

}  // namespace
}  // namespace dgclust
