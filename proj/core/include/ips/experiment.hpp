#pragma once

// Experiment orchestration: datasets x methods x trials, metric recording,
// report and plot files.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ips/aggregate.hpp"
#include "ips/dataset.hpp"
#include "ips/error.hpp"
#include "ips/evaluate.hpp"
#include "ips/report.hpp"

namespace ips {

/// Metric names an experiment can record.
inline constexpr std::string_view kMetricNames[] = {"epsilon_3d", "tau_db", "floor_hit_rate", "median", "p75",
                                                    "rmse",       "mse_s1", "mse_s2",         "cr"};

bool is_metric_name(std::string_view name);

/// A file pair or a synthetic generator setting.
struct DatasetSource {
  std::string name;  // empty: derived from the train file or the generator
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> test;
  std::optional<SyntheticConfig> synthetic;
  std::optional<double> min_rss;
};

Dataset load_dataset(const DatasetSource& source);

struct ExperimentConfig {
  std::vector<DatasetSource> datasets;
  std::vector<MethodConfig> methods;
  std::size_t trials = 10;
  std::vector<std::string> metrics;  // empty: every applicable metric
  std::filesystem::path output_dir = "results";
  std::optional<WeightedScore> weights;
  bool parallel_timing_unsafe = false;
  std::string color_metric = "tau_db";
  std::string shape_metric = "epsilon_3d";
};

/// Exactly one baseline; at least one subject besides it unless the baseline
/// is the only method; method and dataset names free of commas and newlines.
void validate(const ExperimentConfig& cfg);

const MethodConfig& baseline_method(const ExperimentConfig& cfg);

/// JSON document with `"schema": 1`. Relative dataset paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(std::string_view json, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// A failed (method, dataset, trial) evaluation.
class ExperimentError : public Error {
 public:
  ExperimentError(std::string method, std::string dataset, std::size_t trial, const std::string& what);

  const std::string& method() const { return method_; }
  const std::string& dataset() const { return dataset_; }
  std::size_t trial() const { return trial_; }

 private:
  std::string method_;
  std::string dataset_;
  std::size_t trial_;
};

/// Value of IPS_BENCH_THREADS, or the hardware concurrency when unset.
/// Throws ConfigError for a value that is not a positive integer.
std::size_t thread_cap();

/// Records every configured metric of one trial.
void record_trial(MetricTable& table, const ExperimentConfig& cfg, const MethodConfig& method,
                  const Dataset& dataset, const TrialResult& result);

/// Runs every (method, dataset, trial). Sequential unless
/// `parallel_timing_unsafe` is set, in which case (method, dataset) pairs run
/// on up to thread_cap() threads.
MetricTable run_trials(const ExperimentConfig& cfg, const std::vector<Dataset>& datasets);

struct ReportFiles {
  AggregateReport report;
  std::string raw_csv;
  std::string aggregate_csv;
  std::string markdown;
  std::string svg;  // empty when the plot metrics are not available for every cell
  std::vector<std::string> warnings;
};

/// Report texts for a metric table (no file IO).
ReportFiles make_reports(const MetricTable& table, const std::string& baseline,
                         const std::optional<WeightedScore>& weights, const std::string& color_metric,
                         const std::string& shape_metric);

/// Writes raw_metrics.csv, aggregate.csv, aggregate.md and gmms.svg (when
/// available) into `dir`, each through a temporary file and a rename.
void write_reports(const ReportFiles& files, const std::filesystem::path& dir);

/// Full run: load datasets, evaluate, aggregate, write reports.
ReportFiles run_experiment(const ExperimentConfig& cfg);

/// Merges raw metric CSV files and writes the aggregate reports.
ReportFiles cmd_aggregate(const std::vector<std::filesystem::path>& raw_csvs, const std::string& baseline,
                          const std::filesystem::path& output_dir, const std::optional<WeightedScore>& weights);

/// Renders the GMMS plot of an aggregate CSV report.
void cmd_plot(const std::filesystem::path& aggregate_csv, const std::string& color_metric,
              const std::string& shape_metric, const std::filesystem::path& out_svg, int cell_px = 48);

/// One AkM method per K (ids `akm_<K>`, smallest K as baseline) using the k-NN
/// settings of `base`'s baseline, recording mse_s1, mse_s2, epsilon_3d and cr
/// and ranked by the AkM weighted score.
ExperimentConfig make_akm_sweep(const ExperimentConfig& base, const std::vector<std::size_t>& ks);

}  // namespace ips
