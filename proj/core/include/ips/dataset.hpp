#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ips {

/// Reserved RSS value meaning "access point not heard". Not a legal dBm value.
inline constexpr double kNotDetected = 100.0;
inline constexpr double kMinLegalRss = -120.0;
inline constexpr double kMaxLegalRss = 0.0;
/// Default lower bound used by the positive/exponential/powed representations.
inline constexpr double kDefaultMinRss = -104.0;

inline bool is_detected(double rss) { return rss != kNotDetected; }

/// One RSS observation vector, one slot per access point (dBm or kNotDetected).
struct Fingerprint {
  std::vector<double> rss;

  std::size_t size() const { return rss.size(); }
  double operator[](std::size_t i) const { return rss[i]; }
  std::span<const double> values() const { return rss; }
  bool operator==(const Fingerprint&) const = default;
};

/// Position in a scenario-local Cartesian frame (meters).
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::optional<int> floor;

  bool operator==(const Position&) const = default;
};

/// Euclidean 3-D distance; floor is ignored.
double distance_3d(const Position& a, const Position& b);

struct Sample {
  Fingerprint fingerprint;
  Position position;

  bool operator==(const Sample&) const = default;
};

/// A scenario: training radio map plus an independent test set.
struct Dataset {
  std::string name;
  std::size_t ap_count = 0;
  std::vector<Sample> train;
  std::vector<Sample> test;
  /// Minimal legal RSS consumed by the representations.
  double min_rss = kDefaultMinRss;

  /// True when every sample in both sets carries a floor label.
  bool has_floors() const;
  bool operator==(const Dataset&) const = default;
};

/// Throws ConfigError describing the first violated invariant.
void validate(const Dataset& dataset);

/// Samples read from one CSV file.
struct SampleTable {
  std::size_t ap_count = 0;
  std::vector<Sample> samples;
};

/// Parses the CSV interchange format. `source` names the input in error messages.
SampleTable parse_samples_csv(std::string_view content, const std::string& source = "<memory>");
SampleTable read_samples_csv(const std::filesystem::path& path);

/// Canonical CSV text: shortest round-trip numbers, LF endings, sentinel as `100`.
std::string format_samples_csv(std::span<const Sample> samples, std::size_t ap_count);

/// Loads a train/test pair. The dataset name defaults to the train file stem
/// with a trailing "_train" removed.
Dataset load_dataset(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                     std::optional<std::string> name = std::nullopt);

void save_dataset(const Dataset& dataset, const std::filesystem::path& train_path,
                  const std::filesystem::path& test_path);

/// Log-distance path loss generator settings.
struct SyntheticConfig {
  std::uint64_t seed = 1;
  double width = 60.0;
  double height = 40.0;
  int floors = 3;
  double floor_height = 3.5;
  std::size_t ap_count = 40;
  std::size_t train_count = 600;
  std::size_t test_count = 120;
  double p0 = -40.0;
  double path_loss_exponent = 2.5;
  double noise_sigma = 4.0;
  double detection_threshold = -100.0;
  /// Rounds RSS to whole dBm, as commodity receivers report it.
  bool integer_rss = true;
  std::string name = "synthetic";
};

void validate(const SyntheticConfig& config);

/// Noise-free received power for an AP at `distance_m` (distance clamped at 1 m).
double path_loss_rss(double p0, double exponent, double distance_m);

/// Pure function of `config`: identical configs give identical datasets.
Dataset generate_synthetic(const SyntheticConfig& config);

}  // namespace ips
