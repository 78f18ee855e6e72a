#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ips/aggregate.hpp"

namespace ips {

/// Aggregates of every metric in a table against one baseline.
struct AggregateReport {
  std::string baseline;
  /// Baseline first, then the remaining methods in natural order (digit runs numeric).
  std::vector<std::string> methods;
  std::vector<std::string> scenarios;
  std::map<std::string, MetricAggregation> metrics;
  std::optional<WeightedScore> score;
  std::map<std::string, double> weighted;  // method -> combined score
  std::vector<std::string> warnings;
};

/// Runs aggregate_metric for every metric. Metrics the baseline lacks, or
/// whose baseline average is not positive, are skipped with a warning; an
/// unknown baseline (absent from every metric) throws ConfigError.
AggregateReport build_report(const MetricTable& table, const std::string& baseline,
                             std::optional<WeightedScore> score = std::nullopt);

/// CSV `metric,method,scenario,mean,normalized,std`.
///
/// Per-scenario rows carry the trial mean and the baseline-normalized value;
/// rows with an empty scenario carry the cross-scenario mean (in `normalized`)
/// and its standard deviation. A weighted score appears as metric `score`.
std::string format_aggregate_csv(const AggregateReport& report);

/// One Markdown table per metric (scenario rows, absolute and normalized
/// columns per method, mean (std) footer) followed by a summary table.
std::string format_aggregate_markdown(const AggregateReport& report);

struct AggregateRow {
  std::string metric;
  std::string method;
  std::string scenario;  // empty for cross-scenario rows
  std::optional<double> mean;
  std::optional<double> normalized;
  std::optional<double> std;
};

std::vector<AggregateRow> parse_aggregate_csv(std::string_view content, const std::string& source = "<memory>");

}  // namespace ips
