#include "ips/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ips/error.hpp"
#include "ips/text.hpp"

namespace ips {

namespace {

// Summation in sorted order makes the result independent of input order.
double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::string key_text(const MetricKey& k) {
  return "(" + k.method + ", " + k.scenario + ", trial " + std::to_string(k.trial) + ")";
}

}  // namespace

Orientation default_orientation(std::string_view metric) {
  if (metric == "floor_hit_rate" || metric == "cr") return Orientation::HigherIsBetter;
  return Orientation::LowerIsBetter;
}

double quantile_linear(std::span<const double> values, double p) {
  if (values.empty()) throw ConfigError("quantile of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ErrorStats error_stats(std::span<const double> errors, const std::optional<std::vector<bool>>& floor_hits) {
  if (errors.empty()) throw ConfigError("error_stats: empty error list");
  ErrorStats s;
  const double n = static_cast<double>(errors.size());
  double sum = 0.0;
  double sq = 0.0;
  for (double e : errors) {
    sum += e;
    sq += e * e;
  }
  s.mean = sum / n;
  s.rmse = std::sqrt(sq / n);
  s.median = quantile_linear(errors, 0.5);
  s.p75 = quantile_linear(errors, 0.75);
  if (floor_hits) {
    if (floor_hits->size() != errors.size()) throw DimensionError("error_stats: floor_hits length mismatch");
    const auto hits = std::count(floor_hits->begin(), floor_hits->end(), true);
    s.floor_hit_rate = static_cast<double>(hits) / n;
  }
  return s;
}

double aggregate_trials(std::span<const double> values) {
  if (values.empty()) throw ConfigError("aggregate_trials: no trials");
  return sorted_sum({values.begin(), values.end()}) / static_cast<double>(values.size());
}

double normalize_to_baseline(double method_mean, double baseline_mean) {
  if (!(baseline_mean > 0.0) || !std::isfinite(baseline_mean)) {
    throw NormalizationError("baseline value " + text::format_shortest(baseline_mean) +
                             " is not positive; the metric cannot be ratio-normalized");
  }
  return method_mean / baseline_mean;
}

CrossScenario aggregate_scenarios(std::span<const double> normalized) {
  if (normalized.empty()) throw ConfigError("aggregate_scenarios: no scenarios");
  const double n = static_cast<double>(normalized.size());
  CrossScenario out;
  out.mean = sorted_sum({normalized.begin(), normalized.end()}) / n;
  if (normalized.size() > 1) {
    std::vector<double> sq;
    sq.reserve(normalized.size());
    for (double v : normalized) sq.push_back((v - out.mean) * (v - out.mean));
    out.std = std::sqrt(sorted_sum(std::move(sq)) / (n - 1.0));
  }
  return out;
}

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::Identity: return "identity";
    case Transform::Square: return "square";
    case Transform::OneMinus: return "one_minus";
  }
  return "?";
}

Transform parse_transform(std::string_view name) {
  if (name == "identity") return Transform::Identity;
  if (name == "square") return Transform::Square;
  if (name == "one_minus") return Transform::OneMinus;
  throw ConfigError("unknown transform '" + std::string(name) + "' (expected identity|square|one_minus)");
}

void validate(const WeightedScore& score) {
  bool any = false;
  for (const auto& [metric, w] : score.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weight for '" + metric + "' must be a non-negative number");
    any = any || w > 0.0;
  }
  if (!any) throw ConfigError("weighted score needs at least one nonzero weight");
}

WeightedScore akm_weighted_score() {
  WeightedScore s;
  s.weights = {{"mse_s1", 0.05}, {"mse_s2", 0.05}, {"epsilon_3d", 0.9}, {"cr", 0.2}};
  s.transforms = {{"epsilon_3d", Transform::Square}, {"cr", Transform::OneMinus}};
  return s;
}

double weighted_combine(const std::map<std::string, double>& aggregates, const WeightedScore& score) {
  validate(score);
  double total = 0.0;
  for (const auto& [metric, w] : score.weights) {
    if (w == 0.0) continue;
    const auto it = aggregates.find(metric);
    if (it == aggregates.end()) throw ConfigError("weighted score: metric '" + metric + "' is missing");
    const auto tr = score.transforms.find(metric);
    const Transform t = tr == score.transforms.end() ? Transform::Identity : tr->second;
    double v = it->second;
    switch (t) {
      case Transform::Identity: break;
      case Transform::Square: v = v * v; break;
      case Transform::OneMinus: v = 1.0 - v; break;
    }
    total += w * v;
  }
  return total;
}

void MetricMatrix::set(const std::string& method, const std::string& scenario, std::size_t trial, double value) {
  if (trial == 0) throw ConfigError("metric '" + metric_ + "': trial indices start at 1");
  if (!std::isfinite(value)) {
    throw ConfigError("metric '" + metric_ + "' " + key_text({method, scenario, trial}) + ": non-finite value");
  }
  values_[{method, scenario, trial}] = value;
}

std::vector<std::string> MetricMatrix::methods() const {
  std::set<std::string> s;
  for (const auto& [k, v] : values_) s.insert(k.method);
  return {s.begin(), s.end()};
}

std::vector<std::string> MetricMatrix::scenarios() const {
  std::set<std::string> s;
  for (const auto& [k, v] : values_) s.insert(k.scenario);
  return {s.begin(), s.end()};
}

bool MetricMatrix::has_method(const std::string& method) const {
  const auto it = values_.lower_bound({method, "", 0});
  return it != values_.end() && it->first.method == method;
}

std::vector<double> MetricMatrix::trials(const std::string& method, const std::string& scenario) const {
  std::vector<double> out;
  for (auto it = values_.lower_bound({method, scenario, 0});
       it != values_.end() && it->first.method == method && it->first.scenario == scenario; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::string> MetricMatrix::trial_warnings() const {
  std::vector<std::string> warnings;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (const auto& [k, v] : values_) groups[{k.method, k.scenario}].push_back(k.trial);
  std::map<std::string, std::set<std::size_t>> counts;  // per method
  for (const auto& [group, trials] : groups) {
    counts[group.first].insert(trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (trials[i] != i + 1) {
        warnings.push_back("metric '" + metric_ + "' (" + group.first + ", " + group.second +
                           "): trial indices are not contiguous from 1");
        break;
      }
    }
  }
  for (const auto& [method, sizes] : counts) {
    if (sizes.size() > 1) {
      warnings.push_back("metric '" + metric_ + "' (" + method +
                         "): uneven trial counts across scenarios; averaging available trials");
    }
  }
  return warnings;
}

MetricAggregation aggregate_metric(const MetricMatrix& matrix, const std::string& baseline) {
  if (!matrix.has_method(baseline)) {
    throw ConfigError("metric '" + matrix.metric() + "': baseline '" + baseline + "' has no values");
  }
  MetricAggregation out;
  out.metric = matrix.metric();
  out.orientation = matrix.orientation();
  out.warnings = matrix.trial_warnings();

  const auto scenarios = matrix.scenarios();
  std::map<std::string, double> baseline_mean;
  for (const auto& sc : scenarios) {
    const auto t = matrix.trials(baseline, sc);
    if (!t.empty()) baseline_mean[sc] = aggregate_trials(t);
  }

  for (const auto& method : matrix.methods()) {
    AggregatedMetric agg;
    agg.baseline_method = baseline;
    std::vector<double> normalized;
    for (const auto& sc : scenarios) {
      const auto t = matrix.trials(method, sc);
      if (t.empty()) continue;
      const double mean = aggregate_trials(t);
      agg.per_scenario_mean[sc] = mean;
      const auto b = baseline_mean.find(sc);
      if (b == baseline_mean.end()) {
        out.warnings.push_back("metric '" + matrix.metric() + "': scenario '" + sc + "' has no baseline values; '" +
                               method + "' not normalized there");
        continue;
      }
      try {
        const double ratio = normalize_to_baseline(mean, b->second);
        agg.per_scenario_normalized[sc] = ratio;
        normalized.push_back(ratio);
      } catch (const NormalizationError& e) {
        throw NormalizationError("metric '" + matrix.metric() + "', scenario '" + sc + "': " + e.what());
      }
    }
    if (normalized.empty()) continue;
    const auto cross = aggregate_scenarios(normalized);
    agg.cross_scenario_mean = cross.mean;
    agg.cross_scenario_std = cross.std;
    out.by_method.emplace(method, std::move(agg));
  }
  return out;
}

void record(MetricTable& table, const std::string& metric, const std::string& method, const std::string& scenario,
            std::size_t trial, double value) {
  auto it = table.find(metric);
  if (it == table.end()) it = table.emplace(metric, MetricMatrix(metric, default_orientation(metric))).first;
  it->second.set(method, scenario, trial, value);
}

void parse_metric_csv(std::string_view content, MetricTable& table, const std::string& source) {
  const auto rows = text::lines(content);
  if (rows.empty()) throw ParseError(source, 1, 0, "empty file");
  const auto header = text::split(rows.front(), ',');
  static constexpr std::string_view kHeader[] = {"metric", "method", "scenario", "trial", "value"};
  if (header.size() != 5) throw ParseError(source, 1, 0, "expected header metric,method,scenario,trial,value");
  for (std::size_t c = 0; c < 5; ++c) {
    if (text::trim(header[c]) != kHeader[c]) {
      throw ParseError(source, 1, c + 1, "expected column '" + std::string(kHeader[c]) + "'");
    }
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (text::trim(rows[r]).empty()) continue;
    const auto cells = text::split(rows[r], ',');
    if (cells.size() != 5) {
      throw ParseError(source, r + 1, 0, "row has " + std::to_string(cells.size()) + " columns, expected 5");
    }
    const std::string metric(text::trim(cells[0]));
    const std::string method(text::trim(cells[1]));
    const std::string scenario(text::trim(cells[2]));
    if (metric.empty() || method.empty() || scenario.empty()) {
      throw ParseError(source, r + 1, 0, "metric, method and scenario must be non-empty");
    }
    const auto trial = text::parse_int(cells[3]);
    if (!trial || *trial < 1) throw ParseError(source, r + 1, 4, "trial must be an integer >= 1");
    const auto value = text::parse_double(cells[4]);
    if (!value || !std::isfinite(*value)) throw ParseError(source, r + 1, 5, "value must be a finite number");
    const auto existing = table.find(metric);
    if (existing != table.end() &&
        existing->second.values().contains({method, scenario, static_cast<std::size_t>(*trial)})) {
      throw ParseError(source, r + 1, 0, "duplicate entry for " + metric + " " +
                                             key_text({method, scenario, static_cast<std::size_t>(*trial)}));
    }
    record(table, metric, method, scenario, static_cast<std::size_t>(*trial), *value);
  }
}

std::string format_metric_csv(const MetricTable& table) {
  std::string out = "metric,method,scenario,trial,value\n";
  for (const auto& [metric, matrix] : table) {
    for (const auto& [k, v] : matrix.values()) {
      out += metric + ',' + k.method + ',' + k.scenario + ',' + std::to_string(k.trial) + ',' +
             text::format_shortest(v) + '\n';
    }
  }
  return out;
}

}  // namespace ips
