#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ips/akm.hpp"
#include "ips/clustering.hpp"
#include "ips/dataset.hpp"
#include "ips/positioning.hpp"

namespace ips {

enum class MethodKind { PlainKnn, ClusteredKnn, Akm };

std::string_view to_string(MethodKind kind);
/// Accepts `plain_knn | clustered_knn | akm`.
MethodKind parse_method_kind(std::string_view name);

/// Everything needed to reproduce one positioning method.
struct MethodConfig {
  std::string id;
  MethodKind kind = MethodKind::PlainKnn;
  KnnConfig knn;
  std::optional<ClusterSpec> cluster;
  std::optional<AkmConfig> akm;
  bool is_baseline = false;
};

void validate(const MethodConfig& method);

/// Raw material of one (method, dataset, trial) run.
struct TrialResult {
  std::size_t trial_index = 1;
  std::vector<double> errors_3d;
  /// Present when every sample of the dataset carries a floor label.
  std::optional<std::vector<bool>> floor_hits;
  /// Wall-clock time of the test sweep (query transform, search and estimate).
  double elapsed_seconds = 0.0;
  std::size_t distance_evaluations = 0;
  /// Method-specific metrics (mse_s1, mse_s2, cr for AkM).
  std::map<std::string, double> extra_metrics;
};

/// Runs `method` over every test sample of `dataset`.
///
/// Preparation (radio-map representation, clustering, compression) happens
/// before the clock starts. Clustered methods reseed their clustering per
/// trial from the configured seed, so run-to-run variation is reproducible.
TrialResult evaluate(const Dataset& dataset, const MethodConfig& method, std::size_t trial_index);

}  // namespace ips
