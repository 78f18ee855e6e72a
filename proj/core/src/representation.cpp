#include "ips/representation.hpp"

#include <cmath>

#include "ips/error.hpp"
#include "ips/text.hpp"

namespace ips {

void validate(const RepresentationParams& p) {
  if (!(p.min_rss < 0.0)) throw ConfigError("representation: min_rss must be negative");
  if (!(p.alpha > 0.0)) throw ConfigError("representation: alpha must be positive");
  if (!(p.beta > 0.0)) throw ConfigError("representation: beta must be positive");
}

std::string_view to_string(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::Positive: return "positive";
    case RepresentationKind::Exponential: return "exponential";
    case RepresentationKind::Powed: return "powed";
  }
  return "?";
}

RepresentationKind parse_representation_kind(std::string_view name) {
  if (name == "positive") return RepresentationKind::Positive;
  if (name == "exponential") return RepresentationKind::Exponential;
  if (name == "powed") return RepresentationKind::Powed;
  throw ConfigError("unknown representation '" + std::string(name) + "' (expected positive|exponential|powed)");
}

double represent_value(double rss, const RepresentationParams& p, std::size_t slot) {
  if (!is_detected(rss)) return 0.0;
  if (rss < p.min_rss) {
    throw RangeError(slot, "RSS " + text::format_shortest(rss) + " below min_rss " + text::format_shortest(p.min_rss));
  }
  const double shifted = rss - p.min_rss;
  switch (p.kind) {
    case RepresentationKind::Positive:
      return shifted;
    case RepresentationKind::Exponential:
      // exp((rss - min)/alpha) / exp(-min/alpha), folded to avoid overflow
      return std::exp(rss / p.alpha);
    case RepresentationKind::Powed:
      return std::pow(shifted / -p.min_rss, p.beta);
  }
  return 0.0;
}

void apply_representation(std::span<const double> rss, const RepresentationParams& params, std::span<double> out) {
  if (out.size() != rss.size()) throw DimensionError("apply_representation: output length mismatch");
  for (std::size_t i = 0; i < rss.size(); ++i) out[i] = represent_value(rss[i], params, i);
}

std::vector<double> apply_representation(std::span<const double> rss, const RepresentationParams& params) {
  std::vector<double> out(rss.size());
  apply_representation(rss, params, out);
  return out;
}

}  // namespace ips
