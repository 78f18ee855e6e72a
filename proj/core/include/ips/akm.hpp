#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ips/dataset.hpp"
#include "ips/positioning.hpp"

namespace ips {

struct AkmConfig {
  std::size_t k_clusters = 15;
  /// Bits per uncompressed RSS value.
  unsigned original_bits = 7;

  bool operator==(const AkmConfig&) const = default;
};

void validate(const AkmConfig& cfg);

/// ceil(log2(k)) for k >= 2.
unsigned bits_for_levels(std::size_t k);

/// original_bits / ceil(log2(K)).
double compression_ratio(const AkmConfig& cfg);

/// Exact minimum-SSE partition of a 1-D sample into at most `k` contiguous groups.
struct OptimalPartition1D {
  std::vector<double> centroids;  // strictly increasing
  double sse = 0.0;
};

/// Dynamic-programming 1-D k-means over the given values (any order, any
/// multiplicity). When there are fewer distinct values than `k`, every
/// distinct value becomes its own centroid.
OptimalPartition1D optimal_kmeans_1d(std::span<const double> values, std::size_t k);

/// Stage-one codebook: centroids of the detected training RSS values, with
/// the per-centroid member counts and sums needed for adaptation.
struct AkmCodebook {
  std::vector<double> centroids;
  std::vector<std::size_t> counts;
  std::vector<double> sums;
  /// True when K exceeded the number of distinct detected values.
  bool reduced = false;
};

/// Clusters the detected values of `values` (NOT_DETECTED entries skipped).
/// Throws ConfigError when nothing was detected.
AkmCodebook akm_stage1(std::span<const double> values, std::size_t k);

/// Index of the nearest centroid (lower one on ties). `centroids` sorted ascending.
std::size_t nearest_centroid(std::span<const double> centroids, double value);

/// Mean squared difference between each detected value and its nearest centroid.
/// Returns 0 when no value is detected.
double akm_reconstruct_mse(std::span<const double> values, std::span<const double> centroids);

/// Single-pass adaptation: each detected test value joins its nearest stage-one
/// centroid and every centroid becomes the mean of its train and test members.
std::vector<double> akm_stage2_adapt(const AkmCodebook& codebook, std::span<const double> test_values);

/// Replaces every detected value by the coordinate its nearest stage-one centroid
/// maps to in `codes`; NOT_DETECTED stays as is.
std::vector<double> akm_quantize(std::span<const double> values, std::span<const double> stage1_centroids,
                                 std::span<const double> codes);

struct AkmResult {
  double mse_s1 = 0.0;
  double mse_s2 = 0.0;
  double cr = 0.0;
  double epsilon_3d = 0.0;
  std::vector<double> centroids_stage1;
  std::vector<double> centroids_stage2;
  bool reduced = false;
};

/// Compressed copy of the dataset plus the compression statistics.
struct AkmCompression {
  Dataset compressed;
  AkmResult result;  // epsilon_3d left at 0
};

AkmCompression akm_compress(const Dataset& dataset, const AkmConfig& cfg);

/// Compresses the dataset and runs k-NN on the compressed radio map for epsilon_3d.
AkmResult akm_evaluate(const Dataset& dataset, const AkmConfig& cfg, const KnnConfig& knn);

}  // namespace ips
