#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ips/dataset.hpp"
#include "ips/distance.hpp"
#include "ips/error.hpp"
#include "ips/random.hpp"

using ips::DistanceKind;

namespace {

double dist(DistanceKind kind, std::vector<double> u, std::vector<double> v) {
  return ips::distance(u, v, ips::make_distance_spec(kind));
}

std::vector<double> random_positive(ips::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(0.1, 60.0);
  return v;
}

}  // namespace

TEST(Distance, MinkowskiExamples) {
  EXPECT_DOUBLE_EQ(dist(DistanceKind::CityBlock, {0, 0}, {3, 4}), 7.0);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Euclidean, {0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::SquaredEuclidean, {0, 0}, {3, 4}), 25.0);
}

TEST(Distance, SorensenDirectEvaluation) {
  // sum|u - v| / sum(u + v) = 2 / 8
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Sorensen, {1, 2}, {3, 2}), 0.25);
}

TEST(Distance, RatioFamilyClosedForms) {
  const std::vector<double> u = {1, 5, 2};
  const std::vector<double> v = {3, 1, 2};
  // sum|u-v| = 6, sum min = 4, sum max = 10, sum(u+v) = 14
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Soergel, u, v), 0.6);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::KulczynskiD, u, v), 1.5);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::KulczynskiS, u, v), 1.5);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Motyka, u, v), 10.0 / 14.0);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Ruzicka, u, v), 0.6);
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Tanimoto, u, v), 0.6);
  // (1-3)^2/1 + (5-1)^2/5 + 0
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Neyman, u, v), 4.0 + 16.0 / 5.0);
}

TEST(Distance, NeymanSkipsZeroQuerySlots) {
  EXPECT_DOUBLE_EQ(dist(DistanceKind::Neyman, {0, 2}, {5, 4}), 2.0);
}

TEST(Distance, IdenticalVectorsScoreTheirMinimum) {
  const std::vector<double> u = {3, 9, 27};
  for (auto kind : ips::kAllDistanceKinds) {
    if (ips::uses_raw_rss(kind)) continue;
    // sum max / sum(u + v) bottoms out at one half
    const double floor = kind == DistanceKind::Motyka ? 0.5 : 0.0;
    EXPECT_EQ(ips::distance(u, u, ips::make_distance_spec(kind)), floor) << ips::to_string(kind);
  }
}

TEST(Distance, SparseVectorsStayFinite) {
  const std::vector<double> zero = {0, 0, 0};
  for (auto kind : ips::kAllDistanceKinds) {
    const double d = ips::distance(zero, zero, ips::make_distance_spec(kind));
    EXPECT_TRUE(std::isfinite(d)) << ips::to_string(kind);
    EXPECT_GE(d, 0.0);
  }
}

TEST(Distance, LogGaussianOnRawRss) {
  auto spec = ips::make_distance_spec(DistanceKind::LGD);
  const double norm = 1.0 / (6.0 * std::sqrt(2.0 * std::numbers::pi));
  const std::vector<double> u = {-60, -70, ips::kNotDetected, ips::kNotDetected};
  const std::vector<double> v = {-66, -70, -80, ips::kNotDetected};
  const double expected =
      -std::log(norm * std::exp(-36.0 / 72.0) + 1e-12) - std::log(norm + 1e-12);
  EXPECT_NEAR(ips::distance(u, v, spec), expected, 1e-12);
  // the AP heard in only one fingerprint costs the penalty
  EXPECT_NEAR(ips::distance(u, v, ips::make_distance_spec(DistanceKind::PLGD10)), expected + 10.0, 1e-12);
  EXPECT_NEAR(ips::distance(u, v, ips::make_distance_spec(DistanceKind::PLGD40)), expected + 40.0, 1e-12);
}

TEST(Distance, LogGaussianMinimumAtEqualVectors) {
  const std::vector<double> u = {-60, -70, -80};
  const auto spec = ips::make_distance_spec(DistanceKind::LGD);
  const double self = ips::distance(u, u, spec);
  EXPECT_GT(self, 0.0);
  for (double shift = -10; shift <= 10; shift += 0.5) {
    if (shift == 0) continue;
    std::vector<double> v = u;
    v[1] += shift;
    EXPECT_GT(ips::distance(u, v, spec), self);
  }
}

TEST(Distance, DimensionMismatchThrows) {
  EXPECT_THROW(dist(DistanceKind::CityBlock, {1, 2}, {1}), ips::DimensionError);
}

TEST(Distance, SpecValidationAndNames) {
  ips::DistanceSpec s;
  s.sigma = 0.0;
  EXPECT_THROW(ips::validate(s), ips::ConfigError);
  s = {};
  s.penalty = -1.0;
  EXPECT_THROW(ips::validate(s), ips::ConfigError);
  for (auto kind : ips::kAllDistanceKinds) EXPECT_EQ(ips::parse_distance_kind(ips::to_string(kind)), kind);
  EXPECT_THROW(ips::parse_distance_kind("hamming"), ips::ConfigError);
}

TEST(RankReferences, SelfMatchComesFirst) {
  const std::vector<double> refs = {1, 1, 5, 5, 9, 2, 3, 3, 7, 7};
  const std::vector<double> q = {3, 3};
  const auto order = ips::rank_references(q, refs, 2, ips::make_distance_spec(DistanceKind::CityBlock));
  EXPECT_EQ(order.front(), 3u);
}

TEST(RankReferences, TiesGoToLowerIndex) {
  const std::vector<double> refs = {9, 9, 2, 2, 2, 2, 8, 8};
  const std::vector<double> q = {2, 2};
  const auto order = ips::rank_references(q, refs, 2, ips::make_distance_spec(DistanceKind::Euclidean));
  EXPECT_EQ(order[0], 1u);
  EXPECT_EQ(order[1], 2u);
}

TEST(RankReferences, EmptyOrMismatchedInputsThrow) {
  const std::vector<double> q = {1, 2};
  EXPECT_THROW(ips::rank_references(q, {}, 2, {}), ips::DimensionError);
  const std::vector<double> refs = {1, 2, 3};
  EXPECT_THROW(ips::rank_references(q, refs, 2, {}), ips::DimensionError);
}

TEST(DistanceProperty, EuclideanAndSquaredRankIdentically) {
  ips::Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + rng.below(20);
    const std::size_t n = 5 + rng.below(40);
    const auto q = random_positive(rng, dim);
    const auto refs = random_positive(rng, dim * n);
    EXPECT_EQ(ips::rank_references(q, refs, dim, ips::make_distance_spec(DistanceKind::Euclidean)),
              ips::rank_references(q, refs, dim, ips::make_distance_spec(DistanceKind::SquaredEuclidean)));
  }
}

TEST(DistanceProperty, SorensenFamilyRanksIdentically) {
  ips::Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + rng.below(20);
    const std::size_t n = 5 + rng.below(40);
    auto q = random_positive(rng, dim);
    auto refs = random_positive(rng, dim * n);
    // integer-valued features create exact ties the family must order the same way
    if (trial % 2 == 0) {
      for (auto& x : q) x = std::round(x);
      for (auto& x : refs) x = std::round(x) + 1.0;
    }
    const auto expected = ips::rank_references(q, refs, dim, ips::make_distance_spec(DistanceKind::Sorensen));
    for (auto kind : ips::kSorensenFamily) {
      EXPECT_EQ(ips::rank_references(q, refs, dim, ips::make_distance_spec(kind)), expected) << ips::to_string(kind);
    }
  }
}

TEST(DistanceProperty, SymmetricMembers) {
  ips::Rng rng(5);
  const DistanceKind symmetric[] = {DistanceKind::CityBlock, DistanceKind::Euclidean, DistanceKind::SquaredEuclidean,
                                    DistanceKind::Sorensen,  DistanceKind::Soergel,   DistanceKind::Motyka,
                                    DistanceKind::Ruzicka,   DistanceKind::Tanimoto};
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_positive(rng, 12);
    const auto v = random_positive(rng, 12);
    for (auto kind : symmetric) {
      const auto spec = ips::make_distance_spec(kind);
      EXPECT_EQ(ips::distance(u, v, spec), ips::distance(v, u, spec)) << ips::to_string(kind);
    }
  }
}

TEST(DistanceProperty, NonNegative) {
  ips::Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    auto u = random_positive(rng, 8);
    auto v = random_positive(rng, 8);
    u[trial % 8] = 0.0;
    for (auto kind : ips::kAllDistanceKinds) {
      EXPECT_GE(ips::distance(u, v, ips::make_distance_spec(kind)), 0.0) << ips::to_string(kind);
    }
  }
}
