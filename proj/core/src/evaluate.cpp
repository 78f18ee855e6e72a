#include "ips/evaluate.hpp"

#include <chrono>

#include "ips/error.hpp"
#include "ips/random.hpp"

namespace ips {

namespace {

template <typename Estimate>
TrialResult sweep(const Dataset& queries, const Dataset& truth, std::size_t trial_index, Estimate&& estimate) {
  TrialResult result;
  result.trial_index = trial_index;
  const std::size_t n = queries.test.size();
  std::vector<Position> estimates(n);
  SearchStats stats;

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < n; ++i) estimates[i] = estimate(queries.test[i].fingerprint, stats);
  const auto stop = std::chrono::steady_clock::now();

  result.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
  result.distance_evaluations = stats.distance_evaluations;
  result.errors_3d.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.errors_3d[i] = distance_3d(estimates[i], truth.test[i].position);
  if (truth.has_floors()) {
    std::vector<bool> hits(n);
    for (std::size_t i = 0; i < n; ++i) hits[i] = estimates[i].floor == truth.test[i].position.floor;
    result.floor_hits = std::move(hits);
  }
  return result;
}

}  // namespace

std::string_view to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::PlainKnn: return "plain_knn";
    case MethodKind::ClusteredKnn: return "clustered_knn";
    case MethodKind::Akm: return "akm";
  }
  return "?";
}

MethodKind parse_method_kind(std::string_view name) {
  if (name == "plain_knn") return MethodKind::PlainKnn;
  if (name == "clustered_knn") return MethodKind::ClusteredKnn;
  if (name == "akm") return MethodKind::Akm;
  throw ConfigError("unknown method kind '" + std::string(name) + "' (expected plain_knn|clustered_knn|akm)");
}

void validate(const MethodConfig& method) {
  if (method.id.empty()) throw ConfigError("method: empty id");
  validate(method.knn);
  switch (method.kind) {
    case MethodKind::PlainKnn: break;
    case MethodKind::ClusteredKnn:
      if (!method.cluster) throw ConfigError("method '" + method.id + "': clustered_knn needs a cluster spec");
      validate(*method.cluster);
      if (uses_raw_rss(method.knn.distance.kind)) {
        throw ConfigError("method '" + method.id + "': " + std::string(to_string(method.knn.distance.kind)) +
                          " cannot be combined with clustering");
      }
      break;
    case MethodKind::Akm:
      if (!method.akm) throw ConfigError("method '" + method.id + "': akm needs an akm spec");
      validate(*method.akm);
      break;
  }
}

TrialResult evaluate(const Dataset& dataset, const MethodConfig& method, std::size_t trial_index) {
  validate(method);
  KnnConfig cfg = method.knn;
  cfg.representation = representation_for(dataset, cfg.representation);

  switch (method.kind) {
    case MethodKind::PlainKnn: {
      const auto map = RadioMap::for_search(dataset.train, cfg);
      return sweep(dataset, dataset, trial_index,
                   [&](const Fingerprint& q, SearchStats& s) { return knn_estimate(q, map, cfg, &s); });
    }
    case MethodKind::ClusteredKnn: {
      ClusterSpec spec = *method.cluster;
      spec.seed = mix_seed(spec.seed, trial_index);
      const auto clustered = build_clusters(dataset, cfg.representation, spec);
      return sweep(dataset, dataset, trial_index,
                   [&](const Fingerprint& q, SearchStats& s) { return clustered_estimate(q, clustered, cfg, &s); });
    }
    case MethodKind::Akm: {
      const auto compression = akm_compress(dataset, *method.akm);
      const auto map = RadioMap::for_search(compression.compressed.train, cfg);
      auto result = sweep(compression.compressed, dataset, trial_index,
                          [&](const Fingerprint& q, SearchStats& s) { return knn_estimate(q, map, cfg, &s); });
      result.extra_metrics["mse_s1"] = compression.result.mse_s1;
      result.extra_metrics["mse_s2"] = compression.result.mse_s2;
      result.extra_metrics["cr"] = compression.result.cr;
      return result;
    }
  }
  throw ConfigError("method '" + method.id + "': unsupported kind");
}

}  // namespace ips
