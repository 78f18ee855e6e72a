#include <algorithm>
#include <cmath>

#include "ips/dataset.hpp"
#include "ips/error.hpp"
#include "ips/random.hpp"

namespace ips {

namespace {

struct Point {
  double x, y, z;
  int floor;
};

Point draw_point(Rng& rng, const SyntheticConfig& c) {
  Point p;
  p.x = rng.uniform(0.0, c.width);
  p.y = rng.uniform(0.0, c.height);
  p.floor = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.floors)));
  p.z = p.floor * c.floor_height;
  return p;
}

std::vector<Sample> draw_samples(Rng& rng, const SyntheticConfig& c, const std::vector<Point>& aps,
                                 std::size_t count) {
  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Point at = draw_point(rng, c);
    Sample s;
    s.position = {at.x, at.y, at.z, at.floor};
    s.fingerprint.rss.resize(aps.size());
    for (std::size_t a = 0; a < aps.size(); ++a) {
      const double d = std::hypot(at.x - aps[a].x, at.y - aps[a].y, at.z - aps[a].z);
      // the noise draw happens for every slot so the stream layout is fixed
      double rss = path_loss_rss(c.p0, c.path_loss_exponent, d) + c.noise_sigma * rng.normal();
      if (c.integer_rss) rss = std::round(rss);
      rss = std::min(rss, kMaxLegalRss);
      s.fingerprint.rss[a] = rss < c.detection_threshold ? kNotDetected : rss;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

void validate(const SyntheticConfig& c) {
  if (c.ap_count == 0 || c.train_count == 0 || c.test_count == 0) {
    throw ConfigError("synthetic: ap_count, train_count and test_count must be positive");
  }
  if (c.floors < 1) throw ConfigError("synthetic: floors must be >= 1");
  if (!(c.width > 0.0) || !(c.height > 0.0) || !(c.floor_height >= 0.0)) {
    throw ConfigError("synthetic: area dimensions must be positive");
  }
  if (!(c.noise_sigma >= 0.0)) throw ConfigError("synthetic: noise_sigma must be >= 0");
  if (!(c.detection_threshold >= kMinLegalRss && c.detection_threshold <= kMaxLegalRss)) {
    throw ConfigError("synthetic: detection_threshold must lie in [-120, 0]");
  }
  if (!(c.p0 >= kMinLegalRss && c.p0 <= kMaxLegalRss)) throw ConfigError("synthetic: p0 must lie in [-120, 0]");
  if (!(c.path_loss_exponent >= 0.0)) throw ConfigError("synthetic: path_loss_exponent must be >= 0");
}

double path_loss_rss(double p0, double exponent, double distance_m) {
  return p0 - 10.0 * exponent * std::log10(std::max(distance_m, 1.0));
}

Dataset generate_synthetic(const SyntheticConfig& c) {
  validate(c);
  Rng rng(c.seed);
  std::vector<Point> aps(c.ap_count);
  for (auto& ap : aps) ap = draw_point(rng, c);

  Dataset ds;
  ds.name = c.name;
  ds.ap_count = c.ap_count;
  ds.min_rss = std::min(kDefaultMinRss, c.detection_threshold);
  ds.train = draw_samples(rng, c, aps, c.train_count);
  ds.test = draw_samples(rng, c, aps, c.test_count);
  return ds;
}

}  // namespace ips
