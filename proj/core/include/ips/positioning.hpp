#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ips/dataset.hpp"
#include "ips/distance.hpp"
#include "ips/representation.hpp"

namespace ips {

struct KnnConfig {
  std::size_t k = 1;
  RepresentationParams representation;
  DistanceSpec distance;

  bool operator==(const KnnConfig&) const = default;
};

void validate(const KnnConfig& cfg);

/// Counts distance evaluations performed by a search.
struct SearchStats {
  std::size_t distance_evaluations = 0;
};

/// Training fingerprints mapped into a search feature space, stored row-major.
///
/// The feature space is the representation for every distance except the
/// log-Gaussian family, which compares raw dBm fingerprints.
class RadioMap {
 public:
  RadioMap() = default;
  RadioMap(std::span<const Sample> train, const RepresentationParams& representation, bool raw_rss = false);

  /// Radio map in the feature space `cfg.distance` searches.
  static RadioMap for_search(std::span<const Sample> train, const KnnConfig& cfg);

  std::size_t size() const { return positions_.size(); }
  std::size_t dim() const { return dim_; }
  bool raw_rss() const { return raw_rss_; }
  const RepresentationParams& representation() const { return representation_; }

  std::span<const double> features(std::size_t i) const { return {features_.data() + i * dim_, dim_}; }
  std::span<const double> matrix() const { return features_; }
  const Position& position(std::size_t i) const { return positions_[i]; }

  /// Maps a query into this map's feature space.
  std::vector<double> transform(const Fingerprint& query) const;
  void transform(const Fingerprint& query, std::span<double> out) const;

 private:
  std::size_t dim_ = 0;
  bool raw_rss_ = false;
  RepresentationParams representation_;
  std::vector<double> features_;
  std::vector<Position> positions_;
};

/// Unweighted centroid of the k nearest candidates; floor from the nearest one.
/// `candidates` restricts the search to those reference indices (all when empty).
/// k larger than the candidate count is clamped.
Position knn_from_features(std::span<const double> query_features, const RadioMap& map, std::size_t k,
                           const DistanceSpec& spec, std::span<const std::size_t> candidates = {},
                           SearchStats* stats = nullptr);

/// Searches a prepared radio map. The map must have been built for `cfg`.
Position knn_estimate(const Fingerprint& query, const RadioMap& map, const KnnConfig& cfg,
                      SearchStats* stats = nullptr);

/// Convenience form: builds the radio map from `dataset.train`, using the
/// dataset's min_rss for the representation.
Position knn_estimate(const Fingerprint& query, const Dataset& dataset, const KnnConfig& cfg);

struct Cluster {
  std::vector<double> representative;
  std::vector<std::size_t> members;
};

struct ClusterFitInfo {
  std::string algorithm;
  std::size_t requested_clusters = 0;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Radio map partitioned into clusters, each with a representative vector in
/// the same feature space as the map.
struct ClusteredRadioMap {
  RadioMap map;
  std::vector<Cluster> clusters;
  RepresentationParams source_representation;
  ClusterFitInfo fit;
};

/// Picks the cluster whose representative is nearest to the transformed query
/// (lowest index on ties), then runs k-NN over that cluster's members.
Position clustered_estimate(const Fingerprint& query, const ClusteredRadioMap& clustered, const KnnConfig& cfg,
                            SearchStats* stats = nullptr);

/// Copy of `params` with min_rss taken from the dataset.
RepresentationParams representation_for(const Dataset& dataset, RepresentationParams params);

}  // namespace ips
