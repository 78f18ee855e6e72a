#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ips {

enum class DistanceKind {
  CityBlock,
  Euclidean,
  SquaredEuclidean,
  Sorensen,
  Soergel,
  KulczynskiD,
  KulczynskiS,
  Motyka,
  Ruzicka,
  Tanimoto,
  Neyman,
  LGD,
  PLGD10,
  PLGD40,
};

inline constexpr std::array kAllDistanceKinds = {
    DistanceKind::CityBlock, DistanceKind::Euclidean,   DistanceKind::SquaredEuclidean, DistanceKind::Sorensen,
    DistanceKind::Soergel,   DistanceKind::KulczynskiD, DistanceKind::KulczynskiS,      DistanceKind::Motyka,
    DistanceKind::Ruzicka,   DistanceKind::Tanimoto,    DistanceKind::Neyman,           DistanceKind::LGD,
    DistanceKind::PLGD10,    DistanceKind::PLGD40,
};

/// Members whose reference ranking coincides for strictly positive vectors:
/// every one is a decreasing function of sum(min)/sum(max).
inline constexpr std::array kSorensenFamily = {
    DistanceKind::Sorensen, DistanceKind::Soergel, DistanceKind::KulczynskiD, DistanceKind::KulczynskiS,
    DistanceKind::Motyka,   DistanceKind::Ruzicka, DistanceKind::Tanimoto,
};

struct DistanceSpec {
  DistanceKind kind = DistanceKind::CityBlock;
  /// Gaussian width in dB for the log-Gaussian family.
  double sigma = 6.0;
  /// Per-AP penalty for APs heard in only one fingerprint (PLGD).
  double penalty = 0.0;
  double epsilon_guard = 1e-12;

  bool operator==(const DistanceSpec&) const = default;
};

/// Spec with the conventional defaults for `kind` (penalty 10/40 for PLGD10/PLGD40).
DistanceSpec make_distance_spec(DistanceKind kind);

void validate(const DistanceSpec& spec);

std::string_view to_string(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view name);

/// True for LGD/PLGD*: these compare raw dBm fingerprints, not representations.
bool uses_raw_rss(DistanceKind kind);

/// Dissimilarity score; smaller is nearer. Throws DimensionError on length mismatch.
///
/// For the log-Gaussian family `u` and `v` are raw RSS vectors (dBm with the
/// NOT_DETECTED sentinel); for every other kind they are representation
/// vectors with non-negative entries. The first argument plays the query role
/// where the formula is asymmetric (Neyman).
double distance(std::span<const double> u, std::span<const double> v, const DistanceSpec& spec);

/// Reference indices sorted by ascending distance to `query`; ties go to the
/// lower index. `references` is row-major with `dim` columns.
std::vector<std::size_t> rank_references(std::span<const double> query, std::span<const double> references,
                                         std::size_t dim, const DistanceSpec& spec);

}  // namespace ips
