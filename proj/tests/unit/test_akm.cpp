#include <gtest/gtest.h>

#include <set>

#include "ips/akm.hpp"
#include "ips/error.hpp"
#include "ips/random.hpp"
#include "oracles.hpp"

namespace {

std::vector<double> rss_values(std::uint64_t seed, std::size_t n, bool integer) {
  ips::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = rng.uniform(-100.0, -30.0);
    if (integer) x = std::round(x);
    if (rng.uniform() < 0.1) x = ips::kNotDetected;
  }
  return v;
}

ips::Dataset synth(std::uint64_t seed) {
  ips::SyntheticConfig c;
  c.seed = seed;
  c.train_count = 150;
  c.test_count = 30;
  c.ap_count = 20;
  return ips::generate_synthetic(c);
}

}  // namespace

TEST(AkmStage1, TwoGroupsOfFourValues) {
  const std::vector<double> v = {1, 2, 9, 10};
  const auto cb = ips::akm_stage1(v, 2);
  ASSERT_EQ(cb.centroids.size(), 2u);
  EXPECT_DOUBLE_EQ(cb.centroids[0], 1.5);
  EXPECT_DOUBLE_EQ(cb.centroids[1], 9.5);
  EXPECT_DOUBLE_EQ(oracle::min_sse_contiguous(v, 2), 1.0);
  EXPECT_FALSE(cb.reduced);
}

TEST(AkmStage1, KEqualToDistinctCountReproducesValues) {
  const std::vector<double> v = {-40, -70, -40, -55, ips::kNotDetected, -70};
  const auto cb = ips::akm_stage1(v, 3);
  EXPECT_EQ(cb.centroids, (std::vector<double>{-70, -55, -40}));
  EXPECT_EQ(ips::akm_reconstruct_mse(v, cb.centroids), 0.0);
}

TEST(AkmStage1, IdenticalValuesGiveOneCentroid) {
  const std::vector<double> v(30, -61.0);
  const auto cb = ips::akm_stage1(v, 15);
  EXPECT_EQ(cb.centroids, std::vector<double>{-61.0});
  EXPECT_TRUE(cb.reduced);
  EXPECT_EQ(ips::akm_reconstruct_mse(v, cb.centroids), 0.0);
}

TEST(AkmStage1, NothingDetectedThrows) {
  const std::vector<double> v(5, ips::kNotDetected);
  EXPECT_THROW(ips::akm_stage1(v, 2), ips::ConfigError);
}

TEST(AkmStage1, MatchesExhaustivePartitionOracle) {
  ips::Rng rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t distinct = 3 + rng.below(6);  // up to 8 keeps the set-partition count small
    std::vector<double> levels(distinct);
    for (auto& l : levels) l = std::round(rng.uniform(-100, -30));
    std::set<double> uniq(levels.begin(), levels.end());
    std::vector<double> values;
    std::vector<double> u(uniq.begin(), uniq.end());
    std::vector<double> w;
    for (double x : u) {
      const auto mult = 1 + rng.below(4);
      for (std::uint64_t m = 0; m < mult; ++m) values.push_back(x);
      w.push_back(static_cast<double>(mult));
    }
    const std::size_t k = 1 + rng.below(u.size());
    const auto cb = ips::akm_stage1(values, k);
    const double got = ips::akm_reconstruct_mse(values, cb.centroids) * static_cast<double>(values.size());
    EXPECT_NEAR(got, oracle::min_sse_any_partition(u, w, static_cast<int>(k)), 1e-9);
  }
}

TEST(AkmReconstruct, Examples) {
  EXPECT_DOUBLE_EQ(ips::akm_reconstruct_mse(std::vector<double>{0, 2}, std::vector<double>{1}), 1.0);
  EXPECT_DOUBLE_EQ(ips::akm_reconstruct_mse(std::vector<double>{-3, -5}, std::vector<double>{-5, -4, -3}), 0.0);
  EXPECT_EQ(ips::akm_reconstruct_mse(std::vector<double>{ips::kNotDetected}, std::vector<double>{1}), 0.0);
}

TEST(AkmReconstruct, MatchesElementwiseOracle) {
  const auto train = rss_values(1, 400, false);
  const auto test = rss_values(2, 200, false);
  const auto cb = ips::akm_stage1(train, 3);
  EXPECT_NEAR(ips::akm_reconstruct_mse(test, cb.centroids), oracle::reconstruct_mse(test, cb.centroids), 1e-9);
}

TEST(NearestCentroid, TieGoesToLowerCentroid) {
  const std::vector<double> c = {1.0, 3.0};
  EXPECT_EQ(ips::nearest_centroid(c, 2.0), 0u);
  EXPECT_EQ(ips::nearest_centroid(c, 2.5), 1u);
}

TEST(AkmStage2, Examples) {
  ips::AkmCodebook cb;
  cb.centroids = {5.0};
  cb.counts = {1};
  cb.sums = {5.0};
  EXPECT_EQ(ips::akm_stage2_adapt(cb, std::vector<double>{}), cb.centroids);
  EXPECT_DOUBLE_EQ(ips::akm_stage2_adapt(cb, std::vector<double>{7.0})[0], 6.0);
}

TEST(AkmStage2, MatchesSinglePassOracle) {
  const auto train = rss_values(3, 500, false);
  const auto test = rss_values(4, 120, false);
  const auto cb = ips::akm_stage1(train, 6);
  const auto got = ips::akm_stage2_adapt(cb, test);
  const auto expected = oracle::stage2(cb.centroids, train, test);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-9);
}

TEST(AkmQuantize, PreservesSentinel) {
  const std::vector<double> v = {-40, ips::kNotDetected, -71};
  const std::vector<double> s1 = {-70, -41};
  const std::vector<double> codes = {-69, -42};
  EXPECT_EQ(ips::akm_quantize(v, s1, codes), (std::vector<double>{-42, ips::kNotDetected, -69}));
}

TEST(CompressionRatio, ClosedForm) {
  const auto cr = [](std::size_t k) { return ips::compression_ratio({k, 7}); };
  EXPECT_EQ(cr(2), 7.0);
  EXPECT_EQ(cr(4), 3.5);
  EXPECT_EQ(cr(15), 1.75);
  EXPECT_EQ(cr(35), 7.0 / 6.0);
  EXPECT_EQ(ips::bits_for_levels(16), 4u);
  EXPECT_EQ(ips::bits_for_levels(17), 5u);
  EXPECT_THROW(ips::validate(ips::AkmConfig{1, 7}), ips::ConfigError);
}

TEST(AkmEvaluate, StageOneErrorNeverGrowsWithK) {
  const auto ds = synth(5);
  ips::KnnConfig knn;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k : {2, 4, 7, 15, 25, 35}) {
    const auto r = ips::akm_evaluate(ds, {k, 7}, knn);
    EXPECT_LE(r.mse_s1, prev + 1e-12) << "K=" << k;
    prev = r.mse_s1;
    EXPECT_EQ(r.cr, ips::compression_ratio({k, 7}));
  }
}

TEST(AkmEvaluate, LosslessCodebookMatchesUncompressedSearch) {
  auto ds = synth(6);
  // test scans reuse training fingerprints at their own positions, so no value is unseen
  for (std::size_t i = 0; i < ds.test.size(); ++i) ds.test[i].fingerprint = ds.train[(7 * i + 3) % ds.train.size()].fingerprint;
  std::set<double> distinct;
  for (const auto& s : ds.train) {
    for (double v : s.fingerprint.rss) {
      if (ips::is_detected(v)) distinct.insert(v);
    }
  }
  ips::KnnConfig knn;
  const auto compressed = ips::akm_compress(ds, {distinct.size(), 7});
  // every detected value is its own centroid, so the compressed copy is the original
  EXPECT_FALSE(compressed.result.reduced);
  EXPECT_EQ(compressed.compressed.train, ds.train);
  EXPECT_EQ(compressed.compressed.test, ds.test);
  const auto r = ips::akm_evaluate(ds, {distinct.size(), 7}, knn);
  double mean = 0.0;
  for (const auto& s : ds.test) mean += ips::distance_3d(ips::knn_estimate(s.fingerprint, ds, knn), s.position);
  mean /= static_cast<double>(ds.test.size());
  EXPECT_NEAR(r.epsilon_3d, mean, 1e-12);
  // centroids are means of equal values, exact up to summation rounding
  EXPECT_NEAR(r.mse_s1, 0.0, 1e-20);
}
