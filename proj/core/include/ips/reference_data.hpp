#pragma once

// Published benchmark figures embedded as fixtures: plain 1-NN absolute
// values on 16 public datasets, per-trial k-Means (square-root rule) results
// on the same datasets, and the AkM sweep summary.

#include <array>
#include <span>
#include <string_view>

#include "ips/aggregate.hpp"

namespace ips::reference_data {

inline constexpr std::string_view kBaselineMethod = "knn1";
inline constexpr std::string_view kKmeansMethod = "kmeans_rfp1";
inline constexpr std::string_view kAkmScenario = "all";

struct BaselineRow {
  std::string_view dataset;
  double epsilon_3d;  // m
  double tau_db;      // s
};

struct TrialRow {
  std::string_view dataset;
  std::array<double, 10> epsilon;
  double epsilon_mean;        // printed trial average
  double epsilon_normalized;  // printed ratio to the baseline
  std::array<double, 10> tau;
  double tau_mean;
  double tau_normalized;
};

struct AkmSummaryRow {
  int k;
  double mse_s1;
  double mse_s2;
  double epsilon_3d;
  double cr;
  double f;  // printed weighted score
};

std::span<const BaselineRow> knn1_baselines();
std::span<const TrialRow> kmeans_rfp1_trials();
std::span<const AkmSummaryRow> akm_summary();

/// epsilon_3d and tau_db for `knn1` (one trial) and `kmeans_rfp1` (ten trials).
MetricTable kmeans_rfp1_table();

/// mse_s1, mse_s2, epsilon_3d and cr for methods `akm_<K>` on a single scenario.
MetricTable akm_summary_table();

}  // namespace ips::reference_data
