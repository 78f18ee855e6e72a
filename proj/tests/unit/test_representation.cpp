#include <gtest/gtest.h>

#include <cmath>

#include "ips/error.hpp"
#include "ips/random.hpp"
#include "ips/representation.hpp"

using ips::RepresentationKind;
using ips::RepresentationParams;

namespace {

RepresentationParams params(RepresentationKind kind) {
  RepresentationParams p;
  p.kind = kind;
  return p;
}

}  // namespace

TEST(Representation, PositiveShiftsByMin) {
  const auto p = params(RepresentationKind::Positive);
  EXPECT_EQ(ips::represent_value(-104.0, p), 0.0);
  EXPECT_EQ(ips::represent_value(-54.0, p), 50.0);
}

TEST(Representation, PowedEndpoints) {
  const auto p = params(RepresentationKind::Powed);
  EXPECT_EQ(ips::represent_value(-104.0, p), 0.0);
  EXPECT_DOUBLE_EQ(ips::represent_value(0.0, p), 1.0);
}

TEST(Representation, ExponentialEndpointAndClosedForm) {
  const auto p = params(RepresentationKind::Exponential);
  EXPECT_DOUBLE_EQ(ips::represent_value(0.0, p), 1.0);
  // exp((rss - min)/alpha) / exp(-min/alpha) evaluated directly
  const double rss = -70.0;
  const double direct = std::exp((rss + 104.0) / 24.0) / std::exp(104.0 / 24.0);
  EXPECT_NEAR(ips::represent_value(rss, p), direct, 1e-15);
}

TEST(Representation, NotDetectedIsExactlyZero) {
  for (auto kind : {RepresentationKind::Positive, RepresentationKind::Exponential, RepresentationKind::Powed}) {
    EXPECT_EQ(ips::represent_value(ips::kNotDetected, params(kind)), 0.0);
  }
}

TEST(Representation, BelowMinNamesTheSlot) {
  const auto p = params(RepresentationKind::Positive);
  const std::vector<double> rss = {-50.0, -60.0, -110.0};
  try {
    ips::apply_representation(rss, p);
    FAIL() << "expected RangeError";
  } catch (const ips::RangeError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(Representation, InvalidParamsAreRejected) {
  auto p = params(RepresentationKind::Positive);
  p.min_rss = 0.0;
  EXPECT_THROW(ips::validate(p), ips::ConfigError);
  p = params(RepresentationKind::Powed);
  p.beta = 0.0;
  EXPECT_THROW(ips::validate(p), ips::ConfigError);
  EXPECT_THROW(ips::parse_representation_kind("linear"), ips::ConfigError);
}

TEST(RepresentationProperty, StrictlyMonotoneAndInRange) {
  ips::Rng rng(99);
  for (auto kind : {RepresentationKind::Positive, RepresentationKind::Exponential, RepresentationKind::Powed}) {
    const auto p = params(kind);
    for (int i = 0; i < 2000; ++i) {
      const double a = rng.uniform(-104.0, 0.0);
      const double b = rng.uniform(-104.0, 0.0);
      if (a == b) continue;
      const double va = ips::represent_value(std::min(a, b), p);
      const double vb = ips::represent_value(std::max(a, b), p);
      EXPECT_LT(va, vb);
      EXPECT_GE(va, 0.0);
      if (kind == RepresentationKind::Positive) {
        EXPECT_LE(vb, 104.0);
      } else {
        EXPECT_LE(vb, 1.0);
      }
    }
  }
}

TEST(RepresentationProperty, OutputLengthMatchesInput) {
  const std::vector<double> rss = {-50.0, ips::kNotDetected, -90.0, -104.0};
  const auto out = ips::apply_representation(rss, params(RepresentationKind::Powed));
  ASSERT_EQ(out.size(), rss.size());
  EXPECT_EQ(out[1], 0.0);
  EXPECT_EQ(out[3], 0.0);
}
