#include "ips/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ips/error.hpp"
#include "ips/random.hpp"
#include "ips/text.hpp"

namespace ips {

namespace {

using Matrix = std::span<const double>;

std::span<const double> row(Matrix points, std::size_t dim, std::size_t i) { return points.subspan(i * dim, dim); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t point_count(Matrix points, std::size_t dim) {
  if (dim == 0 || points.empty() || points.size() % dim != 0) {
    throw DimensionError("clustering: point matrix is empty or not a multiple of the dimension");
  }
  return points.size() / dim;
}

// Nearest center by squared distance, lowest index on ties.
std::size_t nearest_center(std::span<const double> p, const std::vector<std::vector<double>>& centers,
                           double* best_out = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_out) *best_out = best_d;
  return best;
}

std::vector<std::vector<double>> member_means(Matrix points, std::size_t dim, const std::vector<std::size_t>& labels,
                                              std::size_t k, const std::vector<std::vector<double>>* fallback) {
  std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto p = row(points, dim, i);
    auto& m = means[labels[i]];
    for (std::size_t d = 0; d < dim; ++d) m[d] += p[d];
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      if (fallback) means[c] = (*fallback)[c];
      continue;
    }
    for (auto& v : means[c]) v /= static_cast<double>(counts[c]);
  }
  return means;
}

// Drops empty clusters and renumbers labels densely, preserving order.
void compact(Partition& part) {
  std::vector<std::size_t> counts(part.centers.size(), 0);
  for (auto l : part.labels) ++counts[l];
  std::vector<std::size_t> remap(part.centers.size(), 0);
  std::vector<std::vector<double>> kept;
  for (std::size_t c = 0; c < part.centers.size(); ++c) {
    if (counts[c] == 0) continue;
    remap[c] = kept.size();
    kept.push_back(std::move(part.centers[c]));
  }
  for (auto& l : part.labels) l = remap[l];
  part.centers = std::move(kept);
}

bool all_identical(Matrix points, std::size_t dim) {
  const std::size_t n = points.size() / dim;
  const auto first = row(points, dim, 0);
  for (std::size_t i = 1; i < n; ++i) {
    if (!std::equal(first.begin(), first.end(), row(points, dim, i).begin())) return false;
  }
  return true;
}

double sse_of(Matrix points, std::size_t dim, const std::vector<std::size_t>& labels,
              const std::vector<std::vector<double>>& centers) {
  double s = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) s += squared_distance(row(points, dim, i), centers[labels[i]]);
  return s;
}

}  // namespace

std::string_view to_string(ClusterAlgorithm algo) {
  switch (algo) {
    case ClusterAlgorithm::KMeans: return "kmeans";
    case ClusterAlgorithm::KMedoids: return "kmedoids";
    case ClusterAlgorithm::CMeans: return "cmeans";
    case ClusterAlgorithm::AffinityPropagation: return "affinity";
    case ClusterAlgorithm::Dbscan: return "dbscan";
  }
  return "?";
}

ClusterAlgorithm parse_cluster_algorithm(std::string_view name) {
  if (name == "kmeans") return ClusterAlgorithm::KMeans;
  if (name == "kmedoids") return ClusterAlgorithm::KMedoids;
  if (name == "cmeans") return ClusterAlgorithm::CMeans;
  if (name == "affinity") return ClusterAlgorithm::AffinityPropagation;
  if (name == "dbscan") return ClusterAlgorithm::Dbscan;
  throw ConfigError("unknown clustering algorithm '" + std::string(name) +
                    "' (expected kmeans|kmedoids|cmeans|affinity|dbscan)");
}

CountRule parse_count_rule(std::string_view s) {
  if (s == "rfp1") return CountRule::Rfp1();
  if (s == "rfp2") return CountRule::Rfp2();
  if (s.starts_with("fixed:")) {
    const auto n = text::parse_int(s.substr(6));
    if (!n || *n < 1) throw ConfigError("count_rule '" + std::string(s) + "': fixed count must be >= 1");
    return CountRule::Fixed(static_cast<std::size_t>(*n));
  }
  throw ConfigError("unknown count_rule '" + std::string(s) + "' (expected fixed:<n>|rfp1|rfp2)");
}

std::string to_string(const CountRule& rule) {
  switch (rule.kind) {
    case CountRule::Kind::Fixed: return "fixed:" + std::to_string(rule.fixed);
    case CountRule::Kind::Rfp1: return "rfp1";
    case CountRule::Kind::Rfp2: return "rfp2";
  }
  return "?";
}

void validate(const ClusterSpec& spec) {
  if (spec.count_rule.kind == CountRule::Kind::Fixed && spec.count_rule.fixed < 1) {
    throw ConfigError("clustering: fixed cluster count must be >= 1");
  }
  if (!(spec.fuzz_m > 1.0)) throw ConfigError("clustering: fuzz_m must be > 1");
  if (!(spec.damping > 0.5 && spec.damping < 1.0)) throw ConfigError("clustering: damping must lie in (0.5, 1)");
  if (spec.max_iter && *spec.max_iter < 1) throw ConfigError("clustering: max_iter must be >= 1");
  if (!(spec.tol >= 0.0)) throw ConfigError("clustering: tol must be >= 0");
  if (spec.eps && !(*spec.eps > 0.0)) throw ConfigError("clustering: eps must be positive");
  if (spec.min_pts < 1) throw ConfigError("clustering: min_pts must be >= 1");
}

std::size_t cluster_count(const CountRule& rule, std::size_t n_train) {
  const double n = static_cast<double>(n_train);
  std::size_t k = 1;
  switch (rule.kind) {
    case CountRule::Kind::Fixed: k = std::min(rule.fixed, n_train); break;
    case CountRule::Kind::Rfp1: k = static_cast<std::size_t>(std::llround(std::sqrt(n))); break;
    case CountRule::Kind::Rfp2: k = static_cast<std::size_t>(std::llround(n / 25.0)); break;
  }
  return std::max<std::size_t>(k, 1);
}

std::vector<std::size_t> kmeans_plus_plus(std::span<const double> points, std::size_t dim, std::size_t k,
                                          std::uint64_t seed) {
  const std::size_t n = point_count(points, dim);
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.push_back(static_cast<std::size_t>(rng.below(n)));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(row(points, dim, i), row(points, dim, chosen[0]));

  while (chosen.size() < std::min(k, n)) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (!(total > 0.0)) break;  // every point coincides with a chosen center
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (d2[i] > 0.0 && acc > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      // rounding left target at the very end; take the last point with mass
      for (std::size_t i = n; i-- > 0;) {
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    chosen.push_back(pick);
    const auto c = row(points, dim, pick);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(row(points, dim, i), c));
  }
  return chosen;
}

Partition kmeans(std::span<const double> points, std::size_t dim, std::size_t k, std::size_t max_iter, double tol,
                 std::uint64_t seed) {
  const std::size_t n = point_count(points, dim);
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  Partition part;
  for (auto idx : kmeans_plus_plus(points, dim, k, seed)) {
    const auto r = row(points, dim, idx);
    part.centers.emplace_back(r.begin(), r.end());
  }
  part.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) part.labels[i] = nearest_center(row(points, dim, i), part.centers);
  double sse = sse_of(points, dim, part.labels, part.centers);

  part.converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    part.iterations = it + 1;
    part.centers = member_means(points, dim, part.labels, part.centers.size(), &part.centers);
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = nearest_center(row(points, dim, i), part.centers);
      if (l != part.labels[i]) {
        part.labels[i] = l;
        changed = true;
      }
    }
    const double next = sse_of(points, dim, part.labels, part.centers);
    if (next > sse * (1.0 + 1e-9) + 1e-12) {
      throw Error("kmeans: SSE increased from " + text::format_shortest(sse) + " to " + text::format_shortest(next));
    }
    const double gain = sse - next;
    sse = next;
    if (!changed || gain <= tol * sse) {
      part.converged = true;
      break;
    }
  }
  part.centers = member_means(points, dim, part.labels, part.centers.size(), &part.centers);
  compact(part);
  return part;
}

Partition kmedoids(std::span<const double> points, std::size_t dim, std::size_t k, std::size_t max_iter,
                   std::uint64_t seed) {
  const std::size_t n = point_count(points, dim);
  if (k < 1) throw ConfigError("kmedoids: k must be >= 1");
  auto medoids = kmeans_plus_plus(points, dim, k, seed);
  const auto dist = [&](std::size_t a, std::size_t b) {
    return std::sqrt(squared_distance(row(points, dim, a), row(points, dim, b)));
  };

  Partition part;
  part.labels.resize(n);
  const auto assign = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < medoids.size(); ++c) {
        const double d = dist(i, medoids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      part.labels[i] = best;
    }
  };

  assign();
  part.converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    part.iterations = it + 1;
    std::vector<std::vector<std::size_t>> members(medoids.size());
    for (std::size_t i = 0; i < n; ++i) members[part.labels[i]].push_back(i);
    bool moved = false;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      if (members[c].empty()) continue;
      std::size_t best = medoids[c];
      double best_cost = 0.0;
      for (auto j : members[c]) best_cost += dist(best, j);
      for (auto cand : members[c]) {
        double cost = 0.0;
        for (auto j : members[c]) cost += dist(cand, j);
        // strict improvement only, so the current medoid wins ties
        if (cost < best_cost) {
          best_cost = cost;
          best = cand;
        }
      }
      if (best != medoids[c]) {
        medoids[c] = best;
        moved = true;
      }
    }
    if (!moved) {
      part.converged = true;
      break;
    }
    assign();
  }
  for (auto m : medoids) {
    const auto r = row(points, dim, m);
    part.centers.emplace_back(r.begin(), r.end());
  }
  compact(part);
  return part;
}

Partition cmeans(std::span<const double> points, std::size_t dim, std::size_t c, double m, std::size_t max_iter,
                 double tol, std::uint64_t seed) {
  const std::size_t n = point_count(points, dim);
  if (c < 1) throw ConfigError("cmeans: c must be >= 1");
  if (!(m > 1.0)) throw ConfigError("cmeans: fuzzifier must be > 1");

  Partition part;
  for (auto idx : kmeans_plus_plus(points, dim, c, seed)) {
    const auto r = row(points, dim, idx);
    part.centers.emplace_back(r.begin(), r.end());
  }
  const std::size_t k = part.centers.size();
  const double exponent = 2.0 / (m - 1.0);
  std::vector<double> u(n * k);
  std::vector<double> d(k);

  const auto update_memberships = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = row(points, dim, i);
      std::size_t zeros = 0;
      for (std::size_t j = 0; j < k; ++j) {
        d[j] = std::sqrt(squared_distance(p, part.centers[j]));
        if (d[j] == 0.0) ++zeros;
      }
      double* ui = u.data() + i * k;
      if (zeros > 0) {
        for (std::size_t j = 0; j < k; ++j) ui[j] = d[j] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
      } else {
        for (std::size_t j = 0; j < k; ++j) {
          double denom = 0.0;
          for (std::size_t l = 0; l < k; ++l) denom += std::pow(d[j] / d[l], exponent);
          ui[j] = 1.0 / denom;
        }
      }
      const double total = std::accumulate(ui, ui + k, 0.0);
      if (std::abs(total - 1.0) > 1e-9) {
        throw Error("cmeans: membership row " + std::to_string(i) + " sums to " + text::format_shortest(total));
      }
    }
  };

  part.converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    part.iterations = it + 1;
    update_memberships();
    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> next(dim, 0.0);
      double weight = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = std::pow(u[i * k + j], m);
        if (w == 0.0) continue;
        const auto p = row(points, dim, i);
        for (std::size_t q = 0; q < dim; ++q) next[q] += w * p[q];
        weight += w;
      }
      if (weight > 0.0) {
        for (auto& v : next) v /= weight;
        shift = std::max(shift, std::sqrt(squared_distance(next, part.centers[j])));
        part.centers[j] = std::move(next);
      }
    }
    if (shift <= tol) {
      part.converged = true;
      break;
    }
  }
  update_memberships();
  part.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ui = u.data() + i * k;
    part.labels[i] = static_cast<std::size_t>(std::max_element(ui, ui + k) - ui);
  }
  compact(part);
  return part;
}

Partition affinity_propagation(std::span<const double> points, std::size_t dim, double damping,
                               std::size_t max_iter, std::size_t convergence_iter, std::uint64_t seed) {
  const std::size_t n = point_count(points, dim);
  Partition part;
  if (n == 1) {
    part.labels = {0};
    part.centers.emplace_back(points.begin(), points.end());
    return part;
  }

  std::vector<double> s(n * n);
  std::vector<double> off_diagonal;
  off_diagonal.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      s[i * n + k] = -squared_distance(row(points, dim, i), row(points, dim, k));
      if (i != k) off_diagonal.push_back(s[i * n + k]);
    }
  }
  const auto mid = off_diagonal.begin() + static_cast<std::ptrdiff_t>(off_diagonal.size() / 2);
  std::nth_element(off_diagonal.begin(), mid, off_diagonal.end());
  double preference = *mid;
  if (off_diagonal.size() % 2 == 0) {
    preference = 0.5 * (preference + *std::max_element(off_diagonal.begin(), mid));
  }
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = preference;

  // tiny seeded jitter breaks the exact symmetries that make the messages oscillate
  Rng rng(seed);
  for (auto& v : s) {
    v += (std::numeric_limits<double>::epsilon() * v + std::numeric_limits<double>::min() * 100.0) * rng.normal();
  }

  std::vector<double> r(n * n, 0.0);
  std::vector<double> a(n * n, 0.0);
  std::vector<double> col(n);
  std::vector<char> exemplar(n, 0);
  std::vector<char> previous(n, 0);
  std::size_t stable = 0;
  part.converged = false;

  for (std::size_t it = 0; it < max_iter; ++it) {
    part.iterations = it + 1;
    // responsibilities
    for (std::size_t i = 0; i < n; ++i) {
      double first = -std::numeric_limits<double>::infinity();
      double second = first;
      std::size_t arg = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double v = a[i * n + k] + s[i * n + k];
        if (v > first) {
          second = first;
          first = v;
          arg = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double fresh = s[i * n + k] - (k == arg ? second : first);
        r[i * n + k] = damping * r[i * n + k] + (1.0 - damping) * fresh;
      }
    }
    // availabilities
    for (std::size_t k = 0; k < n; ++k) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double rp = i == k ? r[k * n + k] : std::max(0.0, r[i * n + k]);
        col[i] = rp;
        total += rp;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double fresh = total - col[i];
        if (i != k) fresh = std::min(0.0, fresh);
        a[i * n + k] = damping * a[i * n + k] + (1.0 - damping) * fresh;
      }
    }
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      exemplar[k] = (a[k * n + k] + r[k * n + k]) > 0.0;
      any = any || exemplar[k];
    }
    stable = (exemplar == previous) ? stable + 1 : 0;
    previous = exemplar;
    if (any && stable >= convergence_iter) {
      part.converged = true;
      break;
    }
  }

  std::vector<std::size_t> exemplars;
  for (std::size_t k = 0; k < n; ++k) {
    if (exemplar[k]) exemplars.push_back(k);
  }
  part.labels.assign(n, 0);
  if (exemplars.empty()) {
    // no exemplar emerged: fall back to one cluster around the mean
    part.converged = false;
    part.centers = member_means(points, dim, part.labels, 1, nullptr);
    return part;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_s = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < exemplars.size(); ++e) {
      if (exemplars[e] == i) {
        best = e;
        break;
      }
      const double v = -squared_distance(row(points, dim, i), row(points, dim, exemplars[e]));
      if (v > best_s) {
        best_s = v;
        best = e;
      }
    }
    part.labels[i] = best;
  }
  for (auto e : exemplars) {
    const auto p = row(points, dim, e);
    part.centers.emplace_back(p.begin(), p.end());
  }
  compact(part);
  return part;
}

double median_knn_distance(std::span<const double> points, std::size_t dim, std::size_t k) {
  const std::size_t n = point_count(points, dim);
  if (n < 2) return 0.0;
  const std::size_t kth = std::min(k, n - 1);
  std::vector<double> kdist(n);
  std::vector<double> d;
  d.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    d.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back(squared_distance(row(points, dim, i), row(points, dim, j)));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kth - 1), d.end());
    kdist[i] = std::sqrt(d[kth - 1]);
  }
  std::sort(kdist.begin(), kdist.end());
  return n % 2 ? kdist[n / 2] : 0.5 * (kdist[n / 2 - 1] + kdist[n / 2]);
}

Partition dbscan(std::span<const double> points, std::size_t dim, double eps, std::size_t min_pts) {
  const std::size_t n = point_count(points, dim);
  if (!(eps > 0.0)) throw ConfigError("dbscan: eps must be positive");
  const double eps2 = eps * eps;
  const auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (squared_distance(row(points, dim, i), row(points, dim, j)) <= eps2) out.push_back(j);
    }
    return out;
  };

  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  constexpr std::size_t kNoise = kUnvisited - 1;
  std::vector<std::size_t> label(n, kUnvisited);
  std::size_t clusters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    auto seeds = neighbours(i);
    if (seeds.size() < min_pts) {
      label[i] = kNoise;
      continue;
    }
    const std::size_t id = clusters++;
    label[i] = id;
    for (std::size_t q = 0; q < seeds.size(); ++q) {
      const std::size_t j = seeds[q];
      if (label[j] == kNoise) label[j] = id;  // border point
      if (label[j] != kUnvisited) continue;
      label[j] = id;
      auto more = neighbours(j);
      if (more.size() >= min_pts) seeds.insert(seeds.end(), more.begin(), more.end());
    }
  }
  Partition part;
  part.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) part.labels[i] = label[i] == kNoise ? clusters++ : label[i];
  part.centers = member_means(points, dim, part.labels, clusters, nullptr);
  return part;
}

ClusteredRadioMap build_clusters(RadioMap map, const ClusterSpec& spec) {
  validate(spec);
  if (map.size() == 0) throw ConfigError("clustering: empty radio map");
  const auto points = map.matrix();
  const std::size_t dim = map.dim();
  const std::size_t n = map.size();
  const std::size_t requested = cluster_count(spec.count_rule, n);

  ClusteredRadioMap out;
  out.source_representation = map.representation();
  out.fit.algorithm = std::string(to_string(spec.algo));
  out.fit.requested_clusters = requested;

  Partition part;
  if (all_identical(points, dim)) {
    part.labels.assign(n, 0);
    part.centers = member_means(points, dim, part.labels, 1, nullptr);
  } else {
    switch (spec.algo) {
      case ClusterAlgorithm::KMeans:
        part = kmeans(points, dim, requested, spec.max_iter.value_or(100), spec.tol, spec.seed);
        break;
      case ClusterAlgorithm::KMedoids:
        part = kmedoids(points, dim, requested, spec.max_iter.value_or(100), spec.seed);
        break;
      case ClusterAlgorithm::CMeans:
        part = cmeans(points, dim, requested, spec.fuzz_m, spec.max_iter.value_or(100), spec.tol, spec.seed);
        // representatives are the centroids of the defuzzified members
        part.centers = member_means(points, dim, part.labels, part.centers.size(), nullptr);
        break;
      case ClusterAlgorithm::AffinityPropagation:
        part = affinity_propagation(points, dim, spec.damping, spec.max_iter.value_or(200), 20, spec.seed);
        break;
      case ClusterAlgorithm::Dbscan: {
        const double eps = spec.eps ? *spec.eps : median_knn_distance(points, dim, 4);
        // coincident neighbours can make the median radius zero
        part = dbscan(points, dim, eps > 0.0 ? eps : std::numeric_limits<double>::min(), spec.min_pts);
        break;
      }
    }
  }
  out.fit.iterations = part.iterations;
  out.fit.converged = part.converged;

  out.clusters.resize(part.centers.size());
  for (std::size_t c = 0; c < part.centers.size(); ++c) out.clusters[c].representative = std::move(part.centers[c]);
  for (std::size_t i = 0; i < n; ++i) out.clusters[part.labels[i]].members.push_back(i);
  std::erase_if(out.clusters, [](const Cluster& c) { return c.members.empty(); });
  out.map = std::move(map);
  return out;
}

ClusteredRadioMap build_clusters(const Dataset& dataset, const RepresentationParams& representation,
                                 const ClusterSpec& spec) {
  if (dataset.train.empty()) throw ConfigError("clustering: dataset '" + dataset.name + "' has no training samples");
  return build_clusters(RadioMap(dataset.train, representation_for(dataset, representation)), spec);
}

}  // namespace ips
