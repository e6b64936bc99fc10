#include <gtest/gtest.h>

#include <sstream>

#include "dgclust/graph.hpp"
#include "dgclust/trips_csv.hpp"
#include "test_util.hpp"

namespace dgclust {
namespace {

TEST(IngestTrips, DropsRowsWithMissingFields) {
  std::istringstream in(
      "pickup_community_area,dropoff_community_area,trip_seconds\n"
      "8,32,300\n"
      "8,32,600\n"
      ",5,100\n");
  const TripIngest r = ingest_trips(in);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.dropped, 1u);
  EXPECT_EQ(r.rows_read, 3u);
  EXPECT_EQ(r.records[1].duration_seconds, 600.0);
}

TEST(IngestTrips, HeaderOnlyIsEmpty) {
  std::istringstream in("pickup_community_area,dropoff_community_area,trip_seconds\n");
  const TripIngest r = ingest_trips(in);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.dropped, 0u);
}

TEST(IngestTrips, CustomColumnsQuotesAndFloatIds) {
  std::istringstream in(
      "id,\"to\",from,secs,extra\r\n"
      "x,\"32.0\",8.0,\"300\",\"a,b\"\r\n"
      "y,5,7,-3,\r\n"
      "z,5,,10,\r\n");
  const TripIngest r = ingest_trips(in, {"from", "to", "secs"});
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].pickup_area, 8);
  EXPECT_EQ(r.records[0].dropoff_area, 32);
  EXPECT_EQ(r.dropped, 2u);
}

TEST(IngestTrips, MissingColumnIsNamed) {
  std::istringstream in("pickup_community_area,trip_seconds\n8,300\n");
  try {
    ingest_trips(in);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dropoff_community_area"), std::string::npos);
  }
  EXPECT_THROW(ingest_trips_file("/nonexistent/trips.csv"), IoError);
}

TEST(BuildGraph, MeanTravelTime) {
  const WeightedDigraph g = build_graph({{8, 32, 300}, {8, 32, 600}});
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.node_ids, (std::vector<std::int64_t>{8, 32}));
  EXPECT_EQ(g.weights(0, 1), 450.0);
  EXPECT_EQ(g.counts(0, 1), 2u);
  EXPECT_EQ(g.weights(1, 0), 0.0);
}

TEST(BuildGraph, SelfLoopRetained) {
  const WeightedDigraph g = build_graph({{5, 5, 120}});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.weights(0, 0), 120.0);
}

TEST(BuildGraph, WeightModes) {
  const std::vector<TripRecord> trips{{1, 2, 100}, {1, 2, 300}, {2, 1, 50}};
  EXPECT_EQ(build_graph(trips, WeightMode::trip_count).weights(0, 1), 2.0);
  EXPECT_EQ(build_graph(trips, WeightMode::inverse_mean_time).weights(0, 1), 1.0 / 200.0);
  EXPECT_EQ(build_graph(trips, WeightMode::inverse_mean_time).weights(1, 0), 1.0 / 50.0);
  EXPECT_THROW(build_graph({}), DomainError);
  EXPECT_THROW(parse_weight_mode("median"), ConfigError);
}

TEST(BuildGraph, WeightTimesCountIsDurationSum) {
  Rng rng(12);
  std::vector<TripRecord> trips;
  std::map<std::pair<int, int>, double> sums;
  for (int i = 0; i < 2000; ++i) {
    const int a = 1 + static_cast<int>(rng.below(9)), b = 1 + static_cast<int>(rng.below(9));
    const double t = rng.uniform(0, 3600);
    trips.push_back({a, b, t});
    sums[{a, b}] += t;
  }
  const WeightedDigraph g = build_graph(trips);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_EQ(g.weights(i, j) > 0.0, g.counts(i, j) > 0);
      if (g.counts(i, j) == 0) continue;
      const double expected = sums[{static_cast<int>(g.node_ids[i]), static_cast<int>(g.node_ids[j])}];
      EXPECT_NEAR(g.weights(i, j) * static_cast<double>(g.counts(i, j)), expected, 1e-9 * expected);
    }
}

WeightedDigraph from_matrix(const DenseMatrix& w) {
  WeightedDigraph g;
  for (std::size_t i = 0; i < w.rows(); ++i) g.node_ids.push_back(static_cast<std::int64_t>(i + 1));
  g.weights = w;
  g.counts = CountMatrix(w.rows());
  return g;
}

TEST(Symmetrize, SimpleExamples) {
  EXPECT_EQ(simple_symmetrize(from_matrix({{0, 2}, {1, 0}})).weights, (DenseMatrix{{0, 3}, {3, 0}}));
  const DenseMatrix s{{1, 2}, {2, 5}};
  EXPECT_EQ(simple_symmetrize(from_matrix(s)).weights, 2.0 * s);
  EXPECT_EQ(simple_symmetrize(from_matrix(DenseMatrix(3, 3))).weights, DenseMatrix(3, 3));
}

TEST(Symmetrize, BibliometricExamples) {
  EXPECT_EQ(bibliometric_symmetrize(from_matrix({{0, 1}, {0, 0}})).weights, (DenseMatrix{{1, 0}, {0, 1}}));
  EXPECT_EQ(bibliometric_symmetrize(from_matrix(DenseMatrix(2, 2))).weights, DenseMatrix(2, 2));
}

TEST(Symmetrize, BibliometricIsSymmetricPsdAgainstDirectMultiply) {
  Rng rng(5);
  const DenseMatrix w = test::random_matrix(5, 5, rng);
  const DenseMatrix b = bibliometric_symmetrize(from_matrix(w)).weights;
  EXPECT_TRUE(is_symmetric(b));
  const Eigen::MatrixXd e = test::to_eigen(w);
  const Eigen::MatrixXd direct = e.transpose() * e + e * e.transpose();
  EXPECT_LE((direct - test::to_eigen(b)).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(direct);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(Symmetrize, SharedNeighbourCounts) {
  // 0 -> 2, 1 -> 2: nodes 0 and 1 share one out-neighbour.
  const WeightedDigraph g = bibliometric_symmetrize(from_matrix({{0, 0, 1}, {0, 0, 1}, {0, 0, 0}}));
  EXPECT_EQ(g.counts(0, 1), 1u);
  EXPECT_EQ(g.counts(0, 0), 1u);
  EXPECT_EQ(g.counts(2, 2), 2u);
}

TEST(Degrees, RowAndColumnSums) {
  const DegreeInfo d = degrees(DenseMatrix{{0, 1, 2}, {3, 0, 0}, {0, 0, 0}});
  EXPECT_EQ(d.out_degree, (DenseVector{3, 3, 0}));
  EXPECT_EQ(d.in_degree, (DenseVector{3, 1, 2}));
  EXPECT_EQ(d.diagonal()(0, 0), 3.0);
}

TEST(Components, IsolatedIgnoresSelfLoops) {
  const DenseMatrix w{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 7, 0}, {0, 0, 0, 0}};
  EXPECT_EQ(isolated_nodes(w), (std::vector<std::size_t>{2, 3}));
}

TEST(Components, StronglyConnected) {
  const Components cycle = strongly_connected_components({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  EXPECT_EQ(cycle.count, 1u);
  const Components pair = strongly_connected_components({{0, 1}, {0, 0}});
  EXPECT_EQ(pair.count, 2u);
  EXPECT_NE(pair.id[0], pair.id[1]);
  EXPECT_EQ(weakly_connected_components({{0, 1}, {0, 0}}).count, 1u);
}

TEST(Components, StronglyConnectedMatchesReachabilityOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(12);
    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && rng.uniform() < 0.15) w(i, j) = 1.0;
    // Warshall closure
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      reach[i][i] = true;
      for (std::size_t j = 0; j < n; ++j)
        if (w(i, j) != 0.0) reach[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    const Components c = strongly_connected_components(w);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(c.id[i] == c.id[j], reach[i][j] && reach[j][i]);
  }
}

TEST(Components, Period) {
  EXPECT_EQ(period({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}), 3u);
  EXPECT_EQ(period({{0, 1}, {1, 0}}), 2u);
  EXPECT_EQ(period({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), 1u);
}

TEST(Components, LargestComponentSubgraph) {
  WeightedDigraph g = from_matrix({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  g.weights(1, 2) = 1.0;  // weakly joins the two pairs
  const Subgraph weak = largest_connected_component(g, false);
  EXPECT_EQ(weak.graph.size(), 4u);
  const Subgraph strong = largest_connected_component(g, true);
  EXPECT_EQ(strong.index_map, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(strong.graph.node_ids, (std::vector<std::int64_t>{1, 2}));
}

}  // namespace
}  // namespace dgclust
