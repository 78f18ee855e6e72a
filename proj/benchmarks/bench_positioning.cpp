#include <benchmark/benchmark.h>

#include "ips/akm.hpp"
#include "ips/clustering.hpp"
#include "ips/distance.hpp"
#include "ips/positioning.hpp"
#include "ips/random.hpp"

namespace {

ips::Dataset make_dataset(std::size_t train, std::size_t aps) {
  ips::SyntheticConfig c;
  c.seed = 17;
  c.train_count = train;
  c.test_count = 64;
  c.ap_count = aps;
  return ips::generate_synthetic(c);
}

void BM_Distance(benchmark::State& state) {
  const auto kind = static_cast<ips::DistanceKind>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  ips::Rng rng(1);
  std::vector<double> u(dim);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    u[i] = rng.uniform(-95, -30);
    v[i] = rng.uniform(-95, -30);
  }
  if (!ips::uses_raw_rss(kind)) {
    for (auto& x : u) x += 104.0;
    for (auto& x : v) x += 104.0;
  }
  const auto spec = ips::make_distance_spec(kind);
  for (auto _ : state) benchmark::DoNotOptimize(ips::distance(u, v, spec));
  state.SetLabel(std::string(ips::to_string(kind)));
}

void distance_args(benchmark::internal::Benchmark* b) {
  for (auto kind : ips::kAllDistanceKinds) b->Args({static_cast<long>(kind), 520});
}

void BM_ExhaustiveKnn(benchmark::State& state) {
  const auto ds = make_dataset(static_cast<std::size_t>(state.range(0)), 60);
  ips::KnnConfig cfg;
  const auto map = ips::RadioMap::for_search(ds.train, cfg);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ips::knn_estimate(ds.test[q].fingerprint, map, cfg));
    q = (q + 1) % ds.test.size();
  }
}

void BM_ClusteredKnn(benchmark::State& state) {
  const auto ds = make_dataset(static_cast<std::size_t>(state.range(0)), 60);
  ips::KnnConfig cfg;
  const auto clustered = ips::build_clusters(ds, cfg.representation, ips::ClusterSpec{});
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ips::clustered_estimate(ds.test[q].fingerprint, clustered, cfg));
    q = (q + 1) % ds.test.size();
  }
}

void BM_AkmStage1(benchmark::State& state) {
  const auto ds = make_dataset(1000, 60);
  std::vector<double> values;
  for (const auto& s : ds.train) values.insert(values.end(), s.fingerprint.rss.begin(), s.fingerprint.rss.end());
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ips::akm_stage1(values, k));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * values.size()));
}

}  // namespace

BENCHMARK(BM_Distance)->Apply(distance_args);
BENCHMARK(BM_ExhaustiveKnn)->Arg(500)->Arg(2000)->Arg(8000);
BENCHMARK(BM_ClusteredKnn)->Arg(500)->Arg(2000)->Arg(8000);
BENCHMARK(BM_AkmStage1)->Arg(2)->Arg(15)->Arg(35);

BENCHMARK_MAIN();
