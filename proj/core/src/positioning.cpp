#include "ips/positioning.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ips/error.hpp"

namespace ips {

void validate(const KnnConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("knn: k must be >= 1");
  validate(cfg.representation);
  validate(cfg.distance);
}

RadioMap::RadioMap(std::span<const Sample> train, const RepresentationParams& representation, bool raw_rss)
    : raw_rss_(raw_rss), representation_(representation) {
  if (train.empty()) throw ConfigError("radio map: empty training set");
  dim_ = train.front().fingerprint.size();
  features_.resize(train.size() * dim_);
  positions_.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].fingerprint.size() != dim_) throw DimensionError("radio map: inconsistent fingerprint lengths");
    transform(train[i].fingerprint, {features_.data() + i * dim_, dim_});
    positions_.push_back(train[i].position);
  }
}

RadioMap RadioMap::for_search(std::span<const Sample> train, const KnnConfig& cfg) {
  return RadioMap(train, cfg.representation, uses_raw_rss(cfg.distance.kind));
}

void RadioMap::transform(const Fingerprint& query, std::span<double> out) const {
  if (query.size() != dim_ || out.size() != dim_) {
    throw DimensionError("radio map: query has " + std::to_string(query.size()) + " slots, map has " +
                         std::to_string(dim_));
  }
  if (raw_rss_) {
    std::copy(query.rss.begin(), query.rss.end(), out.begin());
  } else {
    apply_representation(query.values(), representation_, out);
  }
}

std::vector<double> RadioMap::transform(const Fingerprint& query) const {
  std::vector<double> out(dim_);
  transform(query, out);
  return out;
}

Position knn_from_features(std::span<const double> query_features, const RadioMap& map, std::size_t k,
                           const DistanceSpec& spec, std::span<const std::size_t> candidates, SearchStats* stats) {
  if (map.size() == 0) throw ConfigError("knn: empty radio map");
  if (query_features.size() != map.dim()) throw DimensionError("knn: query dimension mismatch");
  if (k < 1) throw ConfigError("knn: k must be >= 1");

  struct Scored {
    double score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  const auto visit = [&](std::size_t idx) { scored.push_back({distance(query_features, map.features(idx), spec), idx}); };
  if (candidates.empty()) {
    scored.reserve(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) visit(i);
  } else {
    scored.reserve(candidates.size());
    for (std::size_t idx : candidates) visit(idx);
  }
  if (stats) stats->distance_evaluations += scored.size();

  const auto before = [](const Scored& a, const Scored& b) {
    return a.score < b.score || (a.score == b.score && a.index < b.index);
  };
  const std::size_t take = std::min(k, scored.size());
  if (take == 1) {
    std::iter_swap(scored.begin(), std::min_element(scored.begin(), scored.end(), before));
  } else {
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), before);
  }

  Position out;
  for (std::size_t i = 0; i < take; ++i) {
    const auto& p = map.position(scored[i].index);
    out.x += p.x;
    out.y += p.y;
    out.z += p.z;
  }
  out.x /= static_cast<double>(take);
  out.y /= static_cast<double>(take);
  out.z /= static_cast<double>(take);
  out.floor = map.position(scored.front().index).floor;
  return out;
}

Position knn_estimate(const Fingerprint& query, const RadioMap& map, const KnnConfig& cfg, SearchStats* stats) {
  const auto q = map.transform(query);
  return knn_from_features(q, map, cfg.k, cfg.distance, {}, stats);
}

RepresentationParams representation_for(const Dataset& dataset, RepresentationParams params) {
  params.min_rss = dataset.min_rss;
  return params;
}

Position knn_estimate(const Fingerprint& query, const Dataset& dataset, const KnnConfig& cfg) {
  if (dataset.train.empty()) throw ConfigError("knn: empty radio map");
  KnnConfig local = cfg;
  local.representation = representation_for(dataset, cfg.representation);
  const auto map = RadioMap::for_search(dataset.train, local);
  return knn_estimate(query, map, local, nullptr);
}

Position clustered_estimate(const Fingerprint& query, const ClusteredRadioMap& clustered, const KnnConfig& cfg,
                            SearchStats* stats) {
  if (clustered.clusters.empty()) throw ConfigError("clustered search: empty clustering");
  if (uses_raw_rss(cfg.distance.kind)) {
    throw ConfigError("clustered search: " + std::string(to_string(cfg.distance.kind)) +
                      " compares raw RSS and cannot select clusters in representation space");
  }
  if (cfg.representation.kind != clustered.source_representation.kind) {
    throw ConfigError("clustered search: clustering was built over a different representation");
  }
  const auto q = clustered.map.transform(query);

  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < clustered.clusters.size(); ++c) {
    const double s = distance(q, clustered.clusters[c].representative, cfg.distance);
    if (s < best_score) {
      best_score = s;
      best = c;
    }
  }
  if (stats) stats->distance_evaluations += clustered.clusters.size();
  return knn_from_features(q, clustered.map, cfg.k, cfg.distance, clustered.clusters[best].members, stats);
}

}  // namespace ips
