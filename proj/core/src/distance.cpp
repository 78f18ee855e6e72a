#include "ips/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ips/dataset.hpp"
#include "ips/error.hpp"

namespace ips {

namespace {

struct NameEntry {
  DistanceKind kind;
  std::string_view name;
};

constexpr NameEntry kNames[] = {
    {DistanceKind::CityBlock, "cityblock"},     {DistanceKind::Euclidean, "euclidean"},
    {DistanceKind::SquaredEuclidean, "sqeuclidean"}, {DistanceKind::Sorensen, "sorensen"},
    {DistanceKind::Soergel, "soergel"},         {DistanceKind::KulczynskiD, "kulczynski_d"},
    {DistanceKind::KulczynskiS, "kulczynski_s"}, {DistanceKind::Motyka, "motyka"},
    {DistanceKind::Ruzicka, "ruzicka"},         {DistanceKind::Tanimoto, "tanimoto"},
    {DistanceKind::Neyman, "neyman"},           {DistanceKind::LGD, "lgd"},
    {DistanceKind::PLGD10, "plgd10"},           {DistanceKind::PLGD40, "plgd40"},
};

// Sums over the min/max decomposition used by the ratio family.
struct OverlapSums {
  double abs_diff = 0.0;  // sum |u - v|
  double total = 0.0;     // sum (u + v)
  double max_sum = 0.0;   // sum max(u, v)
  double min_sum = 0.0;   // sum min(u, v)
};

OverlapSums overlap_sums(std::span<const double> u, std::span<const double> v) {
  OverlapSums s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    s.abs_diff += std::abs(a - b);
    s.total += a + b;
    s.max_sum += std::max(a, b);
    s.min_sum += std::min(a, b);
  }
  return s;
}

double log_gaussian(std::span<const double> u, std::span<const double> v, const DistanceSpec& spec) {
  const double norm = 1.0 / (spec.sigma * std::sqrt(2.0 * std::numbers::pi));
  const double inv_two_var = 1.0 / (2.0 * spec.sigma * spec.sigma);
  double sum = 0.0;
  std::size_t heard_once = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool a = is_detected(u[i]);
    const bool b = is_detected(v[i]);
    if (a && b) {
      const double d = u[i] - v[i];
      const double pdf = norm * std::exp(-d * d * inv_two_var);
      // only reachable for sigma < 1/sqrt(2 pi), where the density exceeds 1
      sum += std::max(0.0, -std::log(pdf + spec.epsilon_guard));
    } else if (a != b) {
      ++heard_once;
    }
  }
  return sum + spec.penalty * static_cast<double>(heard_once);
}

}  // namespace

DistanceSpec make_distance_spec(DistanceKind kind) {
  DistanceSpec spec;
  spec.kind = kind;
  if (kind == DistanceKind::PLGD10) spec.penalty = 10.0;
  if (kind == DistanceKind::PLGD40) spec.penalty = 40.0;
  return spec;
}

void validate(const DistanceSpec& spec) {
  if (!(spec.sigma > 0.0)) throw ConfigError("distance: sigma must be positive");
  if (!(spec.penalty >= 0.0)) throw ConfigError("distance: penalty must be non-negative");
  if (!(spec.epsilon_guard > 0.0)) throw ConfigError("distance: epsilon_guard must be positive");
}

std::string_view to_string(DistanceKind kind) {
  for (const auto& e : kNames) {
    if (e.kind == kind) return e.name;
  }
  return "?";
}

DistanceKind parse_distance_kind(std::string_view name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.kind;
  }
  std::string known;
  for (const auto& e : kNames) known += (known.empty() ? "" : "|") + std::string(e.name);
  throw ConfigError("unknown distance '" + std::string(name) + "' (expected " + known + ")");
}

bool uses_raw_rss(DistanceKind kind) {
  return kind == DistanceKind::LGD || kind == DistanceKind::PLGD10 || kind == DistanceKind::PLGD40;
}

double distance(std::span<const double> u, std::span<const double> v, const DistanceSpec& spec) {
  if (u.size() != v.size()) {
    throw DimensionError("distance: vectors of length " + std::to_string(u.size()) + " and " +
                         std::to_string(v.size()));
  }
  const double eps = spec.epsilon_guard;
  // max(denominator, eps) keeps exact integer sums exact, which preserves ties
  const auto guard = [eps](double d) { return std::max(d, eps); };

  switch (spec.kind) {
    case DistanceKind::CityBlock: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - v[i]);
      return s;
    }
    case DistanceKind::SquaredEuclidean:
    case DistanceKind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
      }
      return spec.kind == DistanceKind::Euclidean ? std::sqrt(s) : s;
    }
    case DistanceKind::Sorensen: {
      const auto s = overlap_sums(u, v);
      return s.abs_diff / guard(s.total);
    }
    case DistanceKind::Soergel: {
      const auto s = overlap_sums(u, v);
      return s.abs_diff / guard(s.max_sum);
    }
    case DistanceKind::KulczynskiD: {
      const auto s = overlap_sums(u, v);
      return s.abs_diff / guard(s.min_sum);
    }
    case DistanceKind::KulczynskiS: {
      // similarity sum(min)/sum|u-v|, reported as its reciprocal
      const auto s = overlap_sums(u, v);
      if (s.abs_diff == 0.0) return 0.0;
      return s.abs_diff / guard(s.min_sum);
    }
    case DistanceKind::Motyka: {
      const auto s = overlap_sums(u, v);
      return s.max_sum / guard(s.total);
    }
    case DistanceKind::Ruzicka: {
      const auto s = overlap_sums(u, v);
      return 1.0 - s.min_sum / guard(s.max_sum);
    }
    case DistanceKind::Tanimoto: {
      const auto s = overlap_sums(u, v);
      // sum(max - min) is sum|u - v| term by term
      return s.abs_diff / guard(s.max_sum);
    }
    case DistanceKind::Neyman: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < eps) continue;
        const double d = u[i] - v[i];
        s += d * d / u[i];
      }
      return s;
    }
    case DistanceKind::LGD:
    case DistanceKind::PLGD10:
    case DistanceKind::PLGD40:
      return log_gaussian(u, v, spec);
  }
  return 0.0;
}

std::vector<std::size_t> rank_references(std::span<const double> query, std::span<const double> references,
                                         std::size_t dim, const DistanceSpec& spec) {
  if (dim == 0 || references.empty()) throw DimensionError("rank_references: empty reference matrix");
  if (query.size() != dim || references.size() % dim != 0) {
    throw DimensionError("rank_references: query length " + std::to_string(query.size()) +
                         " does not match reference dimension " + std::to_string(dim));
  }
  const std::size_t n = references.size() / dim;
  std::vector<double> scores(n);
  for (std::size_t r = 0; r < n; ++r) scores[r] = distance(query, references.subspan(r * dim, dim), spec);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

}  // namespace ips
