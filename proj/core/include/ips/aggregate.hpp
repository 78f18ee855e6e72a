#pragma once

// Metric aggregation across trials and scenarios.
//
// A raw metric value is recorded per (method, scenario, trial). Trials are
// averaged per scenario, the average is divided by the baseline method's
// average on the same scenario, and the resulting unitless ratios are
// summarised across scenarios by their mean and sample standard deviation.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ips {

enum class Orientation { LowerIsBetter, HigherIsBetter };

/// Orientation of the built-in metric names (floor_hit_rate and cr are higher-is-better).
Orientation default_orientation(std::string_view metric);

struct ErrorStats {
  double mean = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double rmse = 0.0;
  std::optional<double> floor_hit_rate;
};

/// Quantile with linear interpolation between order statistics (position p*(n-1)).
double quantile_linear(std::span<const double> values, double p);

/// Summary statistics of per-sample 3-D errors. Throws ConfigError on empty input.
ErrorStats error_stats(std::span<const double> errors, const std::optional<std::vector<bool>>& floor_hits = std::nullopt);

/// Arithmetic mean over trials.
double aggregate_trials(std::span<const double> values);

/// method / baseline; throws NormalizationError unless baseline > 0.
double normalize_to_baseline(double method_mean, double baseline_mean);

struct CrossScenario {
  double mean = 0.0;
  /// Sample standard deviation (divisor N-1), 0 for a single scenario.
  double std = 0.0;
};

CrossScenario aggregate_scenarios(std::span<const double> normalized);

enum class Transform { Identity, Square, OneMinus };

std::string_view to_string(Transform t);
Transform parse_transform(std::string_view name);

/// Weighted sum of (optionally transformed) cross-scenario aggregates.
struct WeightedScore {
  std::map<std::string, double> weights;
  std::map<std::string, Transform> transforms;  // Identity when absent
};

void validate(const WeightedScore& score);

/// 0.05 mse_s1 + 0.05 mse_s2 + 0.9 epsilon_3d^2 + 0.2 (1 - cr), used to rank AkM settings.
WeightedScore akm_weighted_score();

/// Throws ConfigError when a weighted metric is missing from `aggregates`.
double weighted_combine(const std::map<std::string, double>& aggregates, const WeightedScore& score);

struct MetricKey {
  std::string method;
  std::string scenario;
  std::size_t trial = 1;

  auto operator<=>(const MetricKey&) const = default;
};

/// Raw values of one metric keyed by (method, scenario, trial).
class MetricMatrix {
 public:
  MetricMatrix() = default;
  MetricMatrix(std::string metric, Orientation orientation) : metric_(std::move(metric)), orientation_(orientation) {}

  const std::string& metric() const { return metric_; }
  Orientation orientation() const { return orientation_; }

  /// Records a value; throws ConfigError for non-finite values or trial 0.
  void set(const std::string& method, const std::string& scenario, std::size_t trial, double value);

  const std::map<MetricKey, double>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  std::vector<std::string> methods() const;
  std::vector<std::string> scenarios() const;
  bool has_method(const std::string& method) const;
  /// Trial values for one (method, scenario) in trial order.
  std::vector<double> trials(const std::string& method, const std::string& scenario) const;

  /// Human-readable notes about gaps in trial numbering or uneven trial counts.
  std::vector<std::string> trial_warnings() const;

 private:
  std::string metric_;
  Orientation orientation_ = Orientation::LowerIsBetter;
  std::map<MetricKey, double> values_;
};

/// Aggregates of one method for one metric.
struct AggregatedMetric {
  std::string baseline_method;
  std::map<std::string, double> per_scenario_mean;
  std::map<std::string, double> per_scenario_normalized;
  double cross_scenario_mean = 0.0;
  double cross_scenario_std = 0.0;
};

struct MetricAggregation {
  std::string metric;
  Orientation orientation = Orientation::LowerIsBetter;
  std::map<std::string, AggregatedMetric> by_method;
  std::vector<std::string> warnings;
};

/// Full trial -> baseline -> cross-scenario pipeline for one metric.
/// Throws ConfigError when the baseline has no values for this metric and
/// NormalizationError when a baseline average is not positive.
MetricAggregation aggregate_metric(const MetricMatrix& matrix, const std::string& baseline);

/// All metrics of an experiment, keyed by metric name.
using MetricTable = std::map<std::string, MetricMatrix>;

void record(MetricTable& table, const std::string& metric, const std::string& method, const std::string& scenario,
            std::size_t trial, double value);

/// CSV `metric,method,scenario,trial,value`. Rows are merged into `table`;
/// a repeated key is an error.
void parse_metric_csv(std::string_view content, MetricTable& table, const std::string& source = "<memory>");
std::string format_metric_csv(const MetricTable& table);

}  // namespace ips
