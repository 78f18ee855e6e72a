#pragma once

#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ips/dataset.hpp"

namespace ips {

enum class RepresentationKind { Positive, Exponential, Powed };

struct RepresentationParams {
  RepresentationKind kind = RepresentationKind::Positive;
  double min_rss = kDefaultMinRss;
  double alpha = 24.0;           // Exponential
  double beta = std::numbers::e;  // Powed

  bool operator==(const RepresentationParams&) const = default;
};

void validate(const RepresentationParams& params);

std::string_view to_string(RepresentationKind kind);
/// Accepts `positive | exponential | powed`.
RepresentationKind parse_representation_kind(std::string_view name);

/// Maps one RSS value. NOT_DETECTED maps to 0; a detected value below
/// min_rss throws RangeError(slot).
double represent_value(double rss, const RepresentationParams& params, std::size_t slot = 0);

/// Non-negative feature vector with the same length as the fingerprint.
std::vector<double> apply_representation(std::span<const double> rss, const RepresentationParams& params);

inline std::vector<double> apply_representation(const Fingerprint& fp, const RepresentationParams& params) {
  return apply_representation(fp.values(), params);
}

/// In-place variant writing into `out` (same length as `rss`).
void apply_representation(std::span<const double> rss, const RepresentationParams& params, std::span<double> out);

}  // namespace ips
