#include "ips/akm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "ips/error.hpp"

namespace ips {

namespace {

// Weighted distinct values with centered prefix sums for O(1) range SSE.
class RangeCost {
 public:
  RangeCost(std::vector<double> xs, std::vector<double> ws) : xs_(std::move(xs)), ws_(std::move(ws)) {
    double total_w = 0.0;
    double total_x = 0.0;
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      total_w += ws_[i];
      total_x += ws_[i] * xs_[i];
    }
    shift_ = total_x / total_w;  // centering limits cancellation in the prefix sums
    w_.assign(xs_.size() + 1, 0.0);
    s1_.assign(xs_.size() + 1, 0.0);
    s2_.assign(xs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      const double c = xs_[i] - shift_;
      w_[i + 1] = w_[i] + ws_[i];
      s1_[i + 1] = s1_[i] + ws_[i] * c;
      s2_[i + 1] = s2_[i] + ws_[i] * c * c;
    }
  }

  std::size_t size() const { return xs_.size(); }

  // SSE of the inclusive range [i, j] around its weighted mean.
  double cost(std::size_t i, std::size_t j) const {
    const double w = w_[j + 1] - w_[i];
    const double s1 = s1_[j + 1] - s1_[i];
    const double s2 = s2_[j + 1] - s2_[i];
    return std::max(0.0, s2 - s1 * s1 / w);
  }

  double mean(std::size_t i, std::size_t j) const {
    const double w = w_[j + 1] - w_[i];
    return shift_ + (s1_[j + 1] - s1_[i]) / w;
  }

 private:
  std::vector<double> xs_, ws_;
  double shift_ = 0.0;
  std::vector<double> w_, s1_, s2_;
};

// Fills cur[j] for j in [lo, hi] given that the optimal split index lies in
// [opt_lo, opt_hi]. Split i means the last cluster covers [i, j].
void solve_layer(const RangeCost& rc, const std::vector<double>& prev, std::vector<double>& cur,
                 std::vector<std::size_t>& arg, std::size_t layer, std::size_t lo, std::size_t hi, std::size_t opt_lo,
                 std::size_t opt_hi) {
  if (lo > hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = std::max(opt_lo, layer);
  const std::size_t upper = std::min(opt_hi, mid);
  for (std::size_t i = std::max(opt_lo, layer); i <= upper; ++i) {
    const double v = prev[i - 1] + rc.cost(i, mid);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  cur[mid] = best;
  arg[mid] = best_i;
  if (mid > lo) solve_layer(rc, prev, cur, arg, layer, lo, mid - 1, opt_lo, best_i);
  solve_layer(rc, prev, cur, arg, layer, mid + 1, hi, best_i, opt_hi);
}

std::vector<double> detected_values(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (is_detected(v)) out.push_back(v);
  }
  return out;
}

template <typename Samples>
std::vector<double> flatten_rss(const Samples& samples) {
  std::vector<double> out;
  for (const auto& s : samples) out.insert(out.end(), s.fingerprint.rss.begin(), s.fingerprint.rss.end());
  return out;
}

}  // namespace

void validate(const AkmConfig& cfg) {
  if (cfg.k_clusters < 2) throw ConfigError("akm: K must be >= 2");
  if (cfg.original_bits < 1) throw ConfigError("akm: original_bits must be >= 1");
}

unsigned bits_for_levels(std::size_t k) {
  if (k < 2) throw ConfigError("akm: at least two levels are needed");
  return static_cast<unsigned>(std::bit_width(k - 1));
}

double compression_ratio(const AkmConfig& cfg) {
  validate(cfg);
  return static_cast<double>(cfg.original_bits) / static_cast<double>(bits_for_levels(cfg.k_clusters));
}

OptimalPartition1D optimal_kmeans_1d(std::span<const double> values, std::size_t k) {
  if (values.empty()) throw ConfigError("optimal_kmeans_1d: no values");
  if (k < 1) throw ConfigError("optimal_kmeans_1d: k must be >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> xs;
  std::vector<double> ws;
  for (double v : sorted) {
    if (!xs.empty() && xs.back() == v) {
      ws.back() += 1.0;
    } else {
      xs.push_back(v);
      ws.push_back(1.0);
    }
  }
  const std::size_t m = xs.size();
  const std::size_t layers = std::min(k, m);
  const RangeCost rc(xs, ws);

  std::vector<std::vector<std::size_t>> arg(layers, std::vector<std::size_t>(m, 0));
  std::vector<double> prev(m);
  for (std::size_t j = 0; j < m; ++j) prev[j] = rc.cost(0, j);
  std::vector<double> cur(m, std::numeric_limits<double>::infinity());
  for (std::size_t layer = 1; layer < layers; ++layer) {
    std::fill(cur.begin(), cur.end(), std::numeric_limits<double>::infinity());
    solve_layer(rc, prev, cur, arg[layer], layer, layer, m - 1, layer, m - 1);
    std::swap(prev, cur);
  }

  OptimalPartition1D out;
  out.centroids.resize(layers);
  std::size_t end = m - 1;
  for (std::size_t layer = layers; layer-- > 0;) {
    const std::size_t start = layer == 0 ? 0 : arg[layer][end];
    out.centroids[layer] = rc.mean(start, end);
    if (layer > 0) end = start - 1;
  }
  for (double v : sorted) {
    const double d = v - out.centroids[nearest_centroid(out.centroids, v)];
    out.sse += d * d;
  }
  return out;
}

std::size_t nearest_centroid(std::span<const double> centroids, double value) {
  if (centroids.empty()) throw ConfigError("nearest_centroid: no centroids");
  const auto it = std::lower_bound(centroids.begin(), centroids.end(), value);
  if (it == centroids.begin()) return 0;
  if (it == centroids.end()) return centroids.size() - 1;
  const auto hi = static_cast<std::size_t>(it - centroids.begin());
  const std::size_t lo = hi - 1;
  return (value - centroids[lo]) <= (centroids[hi] - value) ? lo : hi;
}

AkmCodebook akm_stage1(std::span<const double> values, std::size_t k) {
  const auto detected = detected_values(values);
  if (detected.empty()) throw ConfigError("akm: no detected RSS values to cluster");
  const auto part = optimal_kmeans_1d(detected, k);
  AkmCodebook book;
  book.centroids = part.centroids;
  book.reduced = part.centroids.size() < k;
  book.counts.assign(book.centroids.size(), 0);
  book.sums.assign(book.centroids.size(), 0.0);
  for (double v : detected) {
    const auto c = nearest_centroid(book.centroids, v);
    ++book.counts[c];
    book.sums[c] += v;
  }
  return book;
}

double akm_reconstruct_mse(std::span<const double> values, std::span<const double> centroids) {
  if (centroids.empty()) throw ConfigError("akm_reconstruct_mse: no centroids");
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (!is_detected(v)) continue;
    const double d = v - centroids[nearest_centroid(centroids, v)];
    sum += d * d;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

std::vector<double> akm_stage2_adapt(const AkmCodebook& codebook, std::span<const double> test_values) {
  std::vector<double> sums = codebook.sums;
  std::vector<double> counts(codebook.counts.begin(), codebook.counts.end());
  for (double v : test_values) {
    if (!is_detected(v)) continue;
    const auto c = nearest_centroid(codebook.centroids, v);
    sums[c] += v;
    counts[c] += 1.0;
  }
  std::vector<double> out = codebook.centroids;
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (counts[c] > 0.0) out[c] = sums[c] / counts[c];
  }
  return out;
}

std::vector<double> akm_quantize(std::span<const double> values, std::span<const double> stage1_centroids,
                                 std::span<const double> codes) {
  if (codes.size() != stage1_centroids.size()) throw DimensionError("akm_quantize: codebook size mismatch");
  std::vector<double> out(values.begin(), values.end());
  for (auto& v : out) {
    if (is_detected(v)) v = codes[nearest_centroid(stage1_centroids, v)];
  }
  return out;
}

AkmCompression akm_compress(const Dataset& dataset, const AkmConfig& cfg) {
  validate(cfg);
  const auto train_values = flatten_rss(dataset.train);
  const auto test_values = flatten_rss(dataset.test);

  AkmCompression out;
  auto& r = out.result;
  const auto book = akm_stage1(train_values, cfg.k_clusters);
  r.centroids_stage1 = book.centroids;
  r.reduced = book.reduced;
  r.mse_s1 = akm_reconstruct_mse(test_values, book.centroids);
  r.centroids_stage2 = akm_stage2_adapt(book, test_values);
  r.mse_s2 = akm_reconstruct_mse(test_values, r.centroids_stage2);
  r.cr = compression_ratio(cfg);

  out.compressed = dataset;
  for (auto* set : {&out.compressed.train, &out.compressed.test}) {
    for (auto& s : *set) s.fingerprint.rss = akm_quantize(s.fingerprint.rss, book.centroids, r.centroids_stage2);
  }
  return out;
}

AkmResult akm_evaluate(const Dataset& dataset, const AkmConfig& cfg, const KnnConfig& knn) {
  auto [compressed, result] = akm_compress(dataset, cfg);
  KnnConfig local = knn;
  local.representation = representation_for(compressed, knn.representation);
  const auto map = RadioMap::for_search(compressed.train, local);
  double total = 0.0;
  for (std::size_t i = 0; i < compressed.test.size(); ++i) {
    const auto est = knn_estimate(compressed.test[i].fingerprint, map, local);
    total += distance_3d(est, dataset.test[i].position);
  }
  result.epsilon_3d = total / static_cast<double>(compressed.test.size());
  return result;
}

}  // namespace ips
