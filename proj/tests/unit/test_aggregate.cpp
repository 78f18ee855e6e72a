#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ips/aggregate.hpp"
#include "ips/error.hpp"
#include "ips/random.hpp"
#include "ips/reference_data.hpp"
#include "ips/report.hpp"
#include "oracles.hpp"

namespace {

ips::MetricTable two_method_table() {
  ips::MetricTable t;
  for (std::size_t trial = 1; trial <= 3; ++trial) {
    ips::record(t, "epsilon_3d", "base", "A", trial, 2.0);
    ips::record(t, "epsilon_3d", "base", "B", trial, 4.0);
    ips::record(t, "epsilon_3d", "sub", "A", trial, 1.0 + trial);
    ips::record(t, "epsilon_3d", "sub", "B", trial, 3.0);
  }
  return t;
}

}  // namespace

TEST(ErrorStats, Examples) {
  const std::vector<double> two = {3, 4};
  const auto s = ips::error_stats(two);
  EXPECT_DOUBLE_EQ(s.mean, 3.5);
  EXPECT_DOUBLE_EQ(s.rmse, std::sqrt(12.5));
  const std::vector<double> four = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(ips::error_stats(four).p75, 3.25);
  EXPECT_DOUBLE_EQ(ips::error_stats(four).median, 2.5);
  const auto f = ips::error_stats(four, std::vector<bool>{true, true, false, true});
  EXPECT_DOUBLE_EQ(*f.floor_hit_rate, 0.75);
  EXPECT_FALSE(ips::error_stats(four).floor_hit_rate.has_value());
  EXPECT_THROW(ips::error_stats(std::vector<double>{}), ips::ConfigError);
}

TEST(ErrorStats, QuantileMatchesOrderStatisticOracle) {
  ips::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(1 + rng.below(50));
    for (auto& v : x) v = rng.uniform(0, 20);
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      EXPECT_NEAR(ips::quantile_linear(x, p), oracle::quantile(x, p), 1e-12);
    }
  }
}

TEST(AggregateTrials, Examples) {
  const std::vector<double> man1 = {2.85, 2.89, 2.82, 2.88, 2.95, 2.84, 2.97, 2.84, 2.94, 2.82};
  EXPECT_NEAR(ips::aggregate_trials(man1), 2.88, 0.005);
  EXPECT_EQ(ips::aggregate_trials(std::vector<double>{1.7}), 1.7);
  EXPECT_EQ(ips::aggregate_trials(std::vector<double>(7, 0.3)), 0.3);
  EXPECT_THROW(ips::aggregate_trials(std::vector<double>{}), ips::ConfigError);
}

TEST(NormalizeToBaseline, Examples) {
  EXPECT_NEAR(ips::normalize_to_baseline(2.88, 2.82), 1.0213, 1e-4);
  EXPECT_EQ(ips::normalize_to_baseline(3.3, 3.3), 1.0);
  EXPECT_THROW(ips::normalize_to_baseline(1.0, 0.0), ips::NormalizationError);
  EXPECT_THROW(ips::normalize_to_baseline(1.0, -2.0), ips::NormalizationError);
}

TEST(AggregateScenarios, Examples) {
  const std::vector<double> eps = {1.04, 1.02, 1.04, 1.02, 1.02, 1.01, 1.03, 1.03,
                                   0.99, 1.04, 1.04, 1.06, 1.13, 1.07, 1.19, 1.06};
  const auto r = ips::aggregate_scenarios(eps);
  EXPECT_NEAR(r.mean, 1.05, 0.005);
  EXPECT_NEAR(r.std, 0.05, 0.005);
  const auto one = ips::aggregate_scenarios(std::vector<double>{1.3});
  EXPECT_EQ(one.mean, 1.3);
  EXPECT_EQ(one.std, 0.0);
  const auto ones = ips::aggregate_scenarios(std::vector<double>(16, 1.0));
  EXPECT_EQ(ones.mean, 1.0);
  EXPECT_EQ(ones.std, 0.0);
}

TEST(WeightedCombine, AkmRows) {
  const auto w = ips::akm_weighted_score();
  const std::map<std::string, double> k25 = {{"mse_s1", 0.003}, {"mse_s2", 0.003}, {"epsilon_3d", 0.79}, {"cr", 0.20}};
  EXPECT_NEAR(ips::weighted_combine(k25, w), 0.722, 0.0005);
  const std::map<std::string, double> k2 = {{"mse_s1", 1}, {"mse_s2", 1}, {"epsilon_3d", 1}, {"cr", 1}};
  EXPECT_DOUBLE_EQ(ips::weighted_combine(k2, w), 1.0);
  std::map<std::string, double> missing = k2;
  missing.erase("cr");
  EXPECT_THROW(ips::weighted_combine(missing, w), ips::ConfigError);
}

TEST(WeightedCombine, SingleIdentityWeightProjects) {
  ips::WeightedScore w;
  w.weights = {{"epsilon_3d", 1.0}, {"tau_db", 0.0}};
  EXPECT_EQ(ips::weighted_combine({{"epsilon_3d", 0.83}, {"tau_db", 5.0}}, w), 0.83);
  EXPECT_EQ(ips::parse_transform(ips::to_string(ips::Transform::OneMinus)), ips::Transform::OneMinus);
}

TEST(AggregateMetric, BaselineRowsAreExactlyOne) {
  const auto agg = ips::aggregate_metric(two_method_table()["epsilon_3d"], "base");
  const auto& b = agg.by_method.at("base");
  EXPECT_EQ(b.cross_scenario_mean, 1.0);
  EXPECT_EQ(b.cross_scenario_std, 0.0);
  const auto& s = agg.by_method.at("sub");
  EXPECT_DOUBLE_EQ(s.per_scenario_normalized.at("A"), 1.5);
  EXPECT_DOUBLE_EQ(s.per_scenario_normalized.at("B"), 0.75);
  EXPECT_DOUBLE_EQ(s.cross_scenario_mean, 1.125);
  EXPECT_TRUE(agg.warnings.empty());
}

TEST(AggregateMetric, ZeroBaselineAndUnknownBaselineThrow) {
  ips::MetricMatrix m("tau_db", ips::Orientation::LowerIsBetter);
  m.set("base", "A", 1, 0.0);
  m.set("sub", "A", 1, 1.0);
  EXPECT_THROW(ips::aggregate_metric(m, "base"), ips::NormalizationError);
  EXPECT_THROW(ips::aggregate_metric(m, "nobody"), ips::ConfigError);
}

TEST(AggregateMetric, TrialGapsWarn) {
  ips::MetricMatrix m("epsilon_3d", ips::Orientation::LowerIsBetter);
  m.set("base", "A", 1, 1.0);
  m.set("base", "B", 1, 1.0);
  m.set("sub", "A", 1, 1.0);
  m.set("sub", "A", 2, 1.0);
  m.set("sub", "B", 1, 1.0);
  EXPECT_FALSE(m.trial_warnings().empty());
  EXPECT_THROW(m.set("sub", "A", 0, 1.0), ips::ConfigError);
  EXPECT_THROW(m.set("sub", "A", 3, std::nan("")), ips::ConfigError);
}

TEST(AggregateProperty, ScalingOneScenarioLeavesRatiosUnchanged) {
  ips::Rng rng(10);
  for (int round = 0; round < 50; ++round) {
    ips::MetricMatrix m("epsilon_3d", ips::Orientation::LowerIsBetter);
    ips::MetricMatrix scaled("epsilon_3d", ips::Orientation::LowerIsBetter);
    const double c = rng.uniform(0.1, 10.0);
    for (const char* method : {"base", "x", "y"}) {
      for (const char* sc : {"A", "B"}) {
        for (std::size_t t = 1; t <= 4; ++t) {
          const double v = rng.uniform(0.5, 5.0);
          m.set(method, sc, t, v);
          scaled.set(method, sc, t, std::string(sc) == "A" ? v * c : v);
        }
      }
    }
    const auto a = ips::aggregate_metric(m, "base");
    const auto b = ips::aggregate_metric(scaled, "base");
    for (const char* method : {"x", "y"}) {
      for (const char* sc : {"A", "B"}) {
        EXPECT_NEAR(a.by_method.at(method).per_scenario_normalized.at(sc),
                    b.by_method.at(method).per_scenario_normalized.at(sc), 1e-12);
      }
    }
  }
}

TEST(AggregateProperty, InsertionOrderDoesNotMatter) {
  ips::Rng rng(11);
  struct Row {
    std::string method, scenario;
    std::size_t trial;
    double v;
  };
  std::vector<Row> rows;
  for (const char* method : {"base", "x"}) {
    for (const char* sc : {"A", "B", "C"}) {
      for (std::size_t t = 1; t <= 5; ++t) rows.push_back({method, sc, t, rng.uniform(0.1, 3.0)});
    }
  }
  ips::MetricMatrix first("epsilon_3d", ips::Orientation::LowerIsBetter);
  for (const auto& r : rows) first.set(r.method, r.scenario, r.trial, r.v);
  const auto expected = ips::aggregate_metric(first, "base").by_method.at("x");
  for (int round = 0; round < 20; ++round) {
    for (std::size_t i = rows.size() - 1; i > 0; --i) std::swap(rows[i], rows[rng.below(i + 1)]);
    ips::MetricMatrix m("epsilon_3d", ips::Orientation::LowerIsBetter);
    for (const auto& r : rows) m.set(r.method, r.scenario, r.trial, r.v);
    const auto got = ips::aggregate_metric(m, "base").by_method.at("x");
    EXPECT_EQ(got.cross_scenario_mean, expected.cross_scenario_mean);
    EXPECT_EQ(got.cross_scenario_std, expected.cross_scenario_std);
  }
}

TEST(AggregateProperty, RaisingOneValueRaisesTheRatio) {
  auto t = two_method_table();
  const double before = ips::aggregate_metric(t["epsilon_3d"], "base").by_method.at("sub").cross_scenario_mean;
  t["epsilon_3d"].set("sub", "B", 2, 3.5);
  const double after = ips::aggregate_metric(t["epsilon_3d"], "base").by_method.at("sub").cross_scenario_mean;
  EXPECT_GT(after, before);
}

TEST(MetricCsv, RoundTripAndDuplicates) {
  const auto t = two_method_table();
  const auto text = ips::format_metric_csv(t);
  EXPECT_EQ(text.substr(0, text.find('\n')), "metric,method,scenario,trial,value");
  ips::MetricTable back;
  ips::parse_metric_csv(text, back);
  EXPECT_EQ(ips::format_metric_csv(back), text);
  EXPECT_THROW(ips::parse_metric_csv(text, back), ips::Error);
  ips::MetricTable bad;
  EXPECT_THROW(ips::parse_metric_csv("metric,method,scenario,trial,value\ne,m,s,x,1\n", bad), ips::ParseError);
}

TEST(Report, CsvRowsParseBack) {
  const auto report = ips::build_report(two_method_table(), "base");
  const auto rows = ips::parse_aggregate_csv(ips::format_aggregate_csv(report));
  // 2 methods x (2 scenarios + 1 summary row)
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].method, "base");
  const auto summary = std::find_if(rows.begin(), rows.end(),
                                    [](const auto& r) { return r.method == "sub" && r.scenario.empty(); });
  ASSERT_NE(summary, rows.end());
  EXPECT_DOUBLE_EQ(*summary->normalized, 1.125);
  EXPECT_THROW(ips::build_report(two_method_table(), "ghost"), ips::ConfigError);
  EXPECT_THROW(ips::parse_aggregate_csv("metric,method\n"), ips::ParseError);
}

TEST(Report, MarkdownHasOneTablePerMetricAndSummary) {
  const auto md = ips::format_aggregate_markdown(ips::build_report(two_method_table(), "base"));
  EXPECT_NE(md.find("## epsilon_3d (lower is better)"), std::string::npos);
  EXPECT_NE(md.find("## Summary"), std::string::npos);
  EXPECT_NE(md.find("1.00 (0.00)"), std::string::npos);
}

TEST(ReferenceFixture, PrintedMeansAgreeWithTrials) {
  for (const auto& row : ips::reference_data::kmeans_rfp1_trials()) {
    EXPECT_NEAR(ips::aggregate_trials(row.epsilon), row.epsilon_mean, 0.015) << row.dataset;
    EXPECT_NEAR(ips::aggregate_trials(row.tau), row.tau_mean, 0.015) << row.dataset;
  }
  EXPECT_EQ(ips::reference_data::knn1_baselines().size(), 16u);
  EXPECT_EQ(ips::reference_data::akm_summary().size(), 6u);
}
