#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ips/dataset.hpp"
#include "ips/positioning.hpp"
#include "ips/representation.hpp"

namespace ips {

enum class ClusterAlgorithm { KMeans, KMedoids, CMeans, AffinityPropagation, Dbscan };

std::string_view to_string(ClusterAlgorithm algo);
/// Accepts `kmeans | kmedoids | cmeans | affinity | dbscan`.
ClusterAlgorithm parse_cluster_algorithm(std::string_view name);

/// How many clusters to request for a radio map of a given size.
struct CountRule {
  enum class Kind { Fixed, Rfp1, Rfp2 };
  Kind kind = Kind::Rfp1;
  std::size_t fixed = 25;

  static CountRule Fixed(std::size_t n) { return {Kind::Fixed, n}; }
  static CountRule Rfp1() { return {Kind::Rfp1, 0}; }
  static CountRule Rfp2() { return {Kind::Rfp2, 0}; }

  bool operator==(const CountRule&) const = default;
};

/// Accepts `fixed:<n> | rfp1 | rfp2`.
CountRule parse_count_rule(std::string_view text);
std::string to_string(const CountRule& rule);

struct ClusterSpec {
  ClusterAlgorithm algo = ClusterAlgorithm::KMeans;
  CountRule count_rule = CountRule::Rfp1();
  double fuzz_m = 2.0;
  double damping = 0.9;
  /// Iteration cap; nullopt picks the algorithm default (100, or 200 for affinity propagation).
  std::optional<std::size_t> max_iter;
  double tol = 1e-4;
  /// DBSCAN neighbourhood radius; nullopt uses the median 4-NN distance.
  std::optional<double> eps;
  std::size_t min_pts = 5;
  std::uint64_t seed = 42;

  bool operator==(const ClusterSpec&) const = default;
};

void validate(const ClusterSpec& spec);

/// Fixed(n) -> min(n, n_train); Rfp1 -> round(sqrt(n_train)); Rfp2 -> round(n_train / 25); never below 1.
std::size_t cluster_count(const CountRule& rule, std::size_t n_train);

/// Per-point cluster labels plus per-cluster representatives, produced by the
/// raw algorithms below. Labels are dense in [0, centers.size()).
struct Partition {
  std::vector<std::size_t> labels;
  std::vector<std::vector<double>> centers;
  std::size_t iterations = 0;
  bool converged = true;
};

// The algorithms work on a row-major matrix `points` with `dim` columns.

/// Lloyd's k-means with k-means++ seeding. Centers are member means.
Partition kmeans(std::span<const double> points, std::size_t dim, std::size_t k, std::size_t max_iter, double tol,
                 std::uint64_t seed);

/// k-means++ seeding: indices of the chosen initial centers (may be fewer
/// than k when there are fewer distinct points).
std::vector<std::size_t> kmeans_plus_plus(std::span<const double> points, std::size_t dim, std::size_t k,
                                          std::uint64_t seed);

/// Alternating k-medoids (Euclidean distance). Centers are medoid points.
Partition kmedoids(std::span<const double> points, std::size_t dim, std::size_t k, std::size_t max_iter,
                   std::uint64_t seed);

/// Fuzzy c-means; labels are the argmax membership, centers the weighted centroids.
Partition cmeans(std::span<const double> points, std::size_t dim, std::size_t c, double m, std::size_t max_iter,
                 double tol, std::uint64_t seed);

/// Affinity propagation on negative squared Euclidean similarity with the
/// median preference. Centers are exemplar points.
Partition affinity_propagation(std::span<const double> points, std::size_t dim, double damping,
                               std::size_t max_iter, std::size_t convergence_iter, std::uint64_t seed);

/// DBSCAN; noise points become singleton clusters. Centers are member means.
Partition dbscan(std::span<const double> points, std::size_t dim, double eps, std::size_t min_pts);

/// Median over points of the Euclidean distance to the k-th nearest other point.
double median_knn_distance(std::span<const double> points, std::size_t dim, std::size_t k);

/// Clusters the represented radio map of `dataset.train` (min_rss from the dataset).
ClusteredRadioMap build_clusters(const Dataset& dataset, const RepresentationParams& representation,
                                 const ClusterSpec& spec);

/// Same, over an already represented radio map.
ClusteredRadioMap build_clusters(RadioMap map, const ClusterSpec& spec);

}  // namespace ips
