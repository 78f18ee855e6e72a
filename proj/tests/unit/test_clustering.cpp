#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ips/clustering.hpp"
#include "ips/error.hpp"
#include "ips/random.hpp"
#include "oracles.hpp"

using ips::ClusterAlgorithm;
using ips::CountRule;

namespace {

std::vector<double> blobs(std::uint64_t seed, std::size_t per_blob, std::size_t dim) {
  ips::Rng rng(seed);
  std::vector<double> pts;
  for (int b = 0; b < 3; ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (std::size_t d = 0; d < dim; ++d) pts.push_back(20.0 * b + rng.normal(0.0, 1.0));
    }
  }
  return pts;
}

void expect_partition(const ips::Partition& p, std::size_t n) {
  ASSERT_EQ(p.labels.size(), n);
  ASSERT_FALSE(p.centers.empty());
  std::vector<std::size_t> sizes(p.centers.size(), 0);
  for (auto l : p.labels) {
    ASSERT_LT(l, p.centers.size());
    ++sizes[l];
  }
  for (auto s : sizes) EXPECT_GT(s, 0u);
}

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(CountRule, Examples) {
  EXPECT_EQ(ips::cluster_count(CountRule::Rfp1(), 100), 10u);
  EXPECT_EQ(ips::cluster_count(CountRule::Rfp2(), 1000), 40u);
  EXPECT_EQ(ips::cluster_count(CountRule::Rfp1(), 150), 12u);
  EXPECT_EQ(ips::cluster_count(CountRule::Rfp2(), 10), 1u);
  EXPECT_EQ(ips::cluster_count(CountRule::Fixed(25), 7), 7u);
}

TEST(CountRule, ParseAndPrint) {
  EXPECT_EQ(ips::parse_count_rule("rfp1"), CountRule::Rfp1());
  EXPECT_EQ(ips::parse_count_rule("fixed:9"), CountRule::Fixed(9));
  EXPECT_EQ(ips::to_string(CountRule::Fixed(9)), "fixed:9");
  EXPECT_THROW(ips::parse_count_rule("fixed:0"), ips::ConfigError);
  EXPECT_THROW(ips::parse_count_rule("half"), ips::ConfigError);
  EXPECT_THROW(ips::parse_cluster_algorithm("spectral"), ips::ConfigError);
}

TEST(KMeans, OneDimensionalTwoGroupsMatchesExhaustiveOptimum) {
  const std::vector<double> pts = {0.0, 0.1, 10.0, 10.1};
  const auto p = ips::kmeans(pts, 1, 2, 100, 1e-9, 42);
  EXPECT_EQ(p.labels[0], p.labels[1]);
  EXPECT_EQ(p.labels[2], p.labels[3]);
  EXPECT_NE(p.labels[0], p.labels[2]);
  std::vector<int> labels(p.labels.begin(), p.labels.end());
  const std::vector<double> w(4, 1.0);
  EXPECT_NEAR(oracle::sse_of_labels(pts, w, labels, 2), oracle::min_sse_any_partition(pts, w, 2), 1e-12);
}

TEST(KMeans, SingleClusterCenterIsTheMean) {
  const std::vector<double> pts = {0, 0, 2, 0, 4, 6};
  const auto p = ips::kmeans(pts, 2, 1, 100, 1e-9, 1);
  ASSERT_EQ(p.centers.size(), 1u);
  EXPECT_DOUBLE_EQ(p.centers[0][0], 2.0);
  EXPECT_DOUBLE_EQ(p.centers[0][1], 2.0);
}

TEST(KMeans, IdenticalPointsCollapseToOneCluster) {
  const std::vector<double> pts(20, 3.0);
  const auto p = ips::kmeans(pts, 2, 4, 100, 1e-9, 5);
  EXPECT_EQ(p.centers.size(), 1u);
  expect_partition(p, 10);
}

TEST(KMeansPlusPlus, PicksDistinctIndices) {
  const auto pts = blobs(3, 10, 2);
  const auto idx = ips::kmeans_plus_plus(pts, 2, 3, 9);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 3u);
}

TEST(KMedoids, EveryMedoidMinimizesItsClusterCost) {
  const auto pts = blobs(4, 8, 2);
  const std::size_t n = pts.size() / 2;
  const auto p = ips::kmedoids(pts, 2, 3, 100, 7);
  expect_partition(p, n);
  const auto row = [&](std::size_t i) { return std::span<const double>(pts.data() + 2 * i, 2); };
  for (std::size_t c = 0; c < p.centers.size(); ++c) {
    double medoid_cost = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (p.labels[i] != c) continue;
      double cost = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (p.labels[j] == c) cost += euclid(row(i), row(j));
      }
      best = std::min(best, cost);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (p.labels[j] == c) medoid_cost += euclid(p.centers[c], row(j));
    }
    EXPECT_NEAR(medoid_cost, best, 1e-9);
  }
}

TEST(CMeans, SeparatesBlobs) {
  const auto pts = blobs(5, 15, 3);
  const auto p = ips::cmeans(pts, 3, 3, 2.0, 100, 1e-6, 3);
  expect_partition(p, 45);
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t i = 1; i < 15; ++i) EXPECT_EQ(p.labels[b * 15 + i], p.labels[b * 15]);
  }
}

TEST(AffinityPropagation, ProducesAPartition) {
  const auto pts = blobs(6, 10, 2);
  const auto p = ips::affinity_propagation(pts, 2, 0.9, 200, 15, 1);
  expect_partition(p, 30);
  EXPECT_GE(p.centers.size(), 3u);
}

TEST(Dbscan, NoiseBecomesSingletons) {
  // two dense groups and one far outlier
  std::vector<double> pts = {0, 0.1, 0.2, 0.3, 0.4, 10, 10.1, 10.2, 10.3, 10.4, 50};
  const auto p = ips::dbscan(pts, 1, 0.5, 3);
  expect_partition(p, pts.size());
  EXPECT_EQ(p.centers.size(), 3u);
  const auto outlier = p.labels.back();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) EXPECT_NE(p.labels[i], outlier);
  EXPECT_DOUBLE_EQ(p.centers[outlier][0], 50.0);
  EXPECT_THROW(ips::dbscan(pts, 1, 0.0, 3), ips::ConfigError);
}

TEST(MedianKnnDistance, EvenlySpacedLine) {
  const std::vector<double> pts = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  // interior points reach their second neighbour at 1, the two ends at 2
  EXPECT_DOUBLE_EQ(ips::median_knn_distance(pts, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(ips::median_knn_distance(pts, 1, 3), 2.0);
}

TEST(ClusterSpec, Validation) {
  ips::ClusterSpec s;
  s.fuzz_m = 1.0;
  EXPECT_THROW(ips::validate(s), ips::ConfigError);
  s = {};
  s.damping = 0.3;
  EXPECT_THROW(ips::validate(s), ips::ConfigError);
  s = {};
  s.count_rule = CountRule::Fixed(0);
  EXPECT_THROW(ips::validate(s), ips::ConfigError);
}

class EveryAlgorithm : public ::testing::TestWithParam<ClusterAlgorithm> {};

TEST_P(EveryAlgorithm, BuildsADeterministicPartitionOfTheRadioMap) {
  ips::SyntheticConfig c;
  c.seed = 31;
  c.train_count = 120;
  c.test_count = 10;
  const auto ds = ips::generate_synthetic(c);
  ips::ClusterSpec spec;
  spec.algo = GetParam();
  const auto a = ips::build_clusters(ds, ips::RepresentationParams{}, spec);
  const auto b = ips::build_clusters(ds, ips::RepresentationParams{}, spec);
  std::vector<std::size_t> seen(ds.train.size(), 0);
  for (const auto& cl : a.clusters) {
    EXPECT_FALSE(cl.members.empty());
    EXPECT_EQ(cl.representative.size(), ds.ap_count);
    for (auto m : cl.members) ++seen[m];
  }
  for (auto s : seen) EXPECT_EQ(s, 1u);
  ASSERT_EQ(a.clusters.size(), b.clusters.size());
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    EXPECT_EQ(a.clusters[i].members, b.clusters[i].members);
    EXPECT_EQ(a.clusters[i].representative, b.clusters[i].representative);
  }
}

INSTANTIATE_TEST_SUITE_P(Clustering, EveryAlgorithm,
                         ::testing::Values(ClusterAlgorithm::KMeans, ClusterAlgorithm::KMedoids,
                                           ClusterAlgorithm::CMeans, ClusterAlgorithm::AffinityPropagation,
                                           ClusterAlgorithm::Dbscan),
                         [](const auto& info) { return std::string(ips::to_string(info.param)); });
