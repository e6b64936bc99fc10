#include <gtest/gtest.h>

#include "dgclust/eval.hpp"
#include "dgclust/kmeans.hpp"
#include "test_util.hpp"

namespace dgclust {
namespace {

TEST(KMeans, PerfectlySeparatedPoints) {
  const DenseMatrix x(4, 1, {0, 0, 10, 10});
  const KMeansResult r = kmeans(x, {.k = 2, .seed = 1});
  EXPECT_EQ(r.partition.labels, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(r.inertia, 0.0);
}

TEST(KMeans, SingleClusterInertiaIsTotalScatter) {
  const DenseMatrix x(5, 2, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const KMeansResult r = kmeans(x, {.k = 1});
  EXPECT_EQ(r.partition.k, 1);
  // mean (5, 6); squared deviations per coordinate 16+4+0+4+16 = 40, twice
  EXPECT_NEAR(r.inertia, 80.0, 1e-12);
}

TEST(KMeans, RejectsBadK) {
  const DenseMatrix x(3, 1, {1, 2, 3});
  EXPECT_THROW(kmeans(x, {.k = 4}), ConfigError);
  EXPECT_THROW(kmeans(x, {.k = 0}), ConfigError);
}

TEST(KMeans, InertiaNeverIncreasesAcrossLloydIterations) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 5 + rng.below(40), dim = 1 + rng.below(3);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(m, 6));
    const DenseMatrix x = test::random_matrix(m, dim, rng);
    const KMeansResult r = kmeans(x, {.k = k, .seed = static_cast<std::uint64_t>(trial), .restarts = 1});
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
      ASSERT_LE(r.inertia_trace[i], r.inertia_trace[i - 1] * (1 + 1e-12) + 1e-15);
  }
}

TEST(KMeans, DeterministicForSeed) {
  Rng rng(1);
  const DenseMatrix x = test::random_matrix(50, 3, rng);
  const KMeansResult a = kmeans(x, {.k = 4, .seed = 17, .restarts = 5});
  const KMeansResult b = kmeans(x, {.k = 4, .seed = 17, .restarts = 5});
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeans, IdenticalPointsRepairEmptyCluster) {
  const DenseMatrix x(3, 1, {0.5, 0.5, 0.5});
  const KMeansResult r = kmeans(x, {.k = 2, .restarts = 1});
  EXPECT_EQ(r.partition.k, 2);
  EXPECT_GE(r.empty_repairs, 1);
  EXPECT_EQ(r.inertia, 0.0);
}

TEST(KMeans, RecoversSeparatedBlobs) {
  const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(1000 + seed);
    DenseMatrix x(90, 2);
    std::vector<int> truth(90);
    for (std::size_t i = 0; i < 90; ++i) {
      const std::size_t b = i % 3;
      truth[i] = static_cast<int>(b);
      // Box-Muller with sigma 0.1
      const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
      const double r = 0.1 * std::sqrt(-2.0 * std::log(u1));
      x(i, 0) = centers[b][0] + r * std::cos(2 * M_PI * u2);
      x(i, 1) = centers[b][1] + r * std::sin(2 * M_PI * u2);
    }
    const KMeansResult res = kmeans(x, {.k = 3, .seed = seed});
    EXPECT_EQ(adjusted_rand_index(res.partition, Partition::canonical(truth)), 1.0) << "seed " << seed;
  }
}

}  // namespace
}  // namespace dgclust
