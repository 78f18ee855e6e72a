#include "ips/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ips/error.hpp"
#include "ips/text.hpp"

namespace ips {

namespace {

constexpr std::size_t kTrailingColumns = 4;  // x,y,z,floor

std::string ap_column_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ap_%04zu", index + 1);
  return buf;
}

void check_samples(const std::vector<Sample>& samples, std::size_t ap_count, const char* which) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.fingerprint.size() != ap_count) {
      throw ConfigError(std::string(which) + " sample " + std::to_string(i) + " has " +
                        std::to_string(s.fingerprint.size()) + " RSS slots, expected " +
                        std::to_string(ap_count));
    }
    for (std::size_t j = 0; j < ap_count; ++j) {
      const double v = s.fingerprint[j];
      if (!is_detected(v)) continue;
      if (!std::isfinite(v) || v < kMinLegalRss || v > kMaxLegalRss) {
        throw ConfigError(std::string(which) + " sample " + std::to_string(i) + " slot " +
                          std::to_string(j) + ": RSS " + text::format_shortest(v) +
                          " outside [-120, 0] dBm");
      }
    }
    const auto& p = s.position;
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw ConfigError(std::string(which) + " sample " + std::to_string(i) + ": non-finite coordinate");
    }
  }
}

}  // namespace

double distance_3d(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool Dataset::has_floors() const {
  const auto labelled = [](const Sample& s) { return s.position.floor.has_value(); };
  return !train.empty() && std::all_of(train.begin(), train.end(), labelled) &&
         std::all_of(test.begin(), test.end(), labelled);
}

void validate(const Dataset& dataset) {
  if (dataset.ap_count == 0) throw ConfigError("dataset '" + dataset.name + "': ap_count must be positive");
  if (dataset.train.empty()) throw ConfigError("dataset '" + dataset.name + "': empty training set");
  if (dataset.test.empty()) throw ConfigError("dataset '" + dataset.name + "': empty test set");
  if (!(dataset.min_rss < 0.0)) throw ConfigError("dataset '" + dataset.name + "': min_rss must be negative");
  check_samples(dataset.train, dataset.ap_count, "train");
  check_samples(dataset.test, dataset.ap_count, "test");

  // samples at the same height must agree on the floor label
  std::vector<const Position*> labelled;
  for (const auto* set : {&dataset.train, &dataset.test}) {
    for (const auto& s : *set) {
      if (s.position.floor) labelled.push_back(&s.position);
    }
  }
  std::sort(labelled.begin(), labelled.end(), [](const Position* a, const Position* b) { return a->z < b->z; });
  for (std::size_t i = 1; i < labelled.size(); ++i) {
    const auto* prev = labelled[i - 1];
    const auto* cur = labelled[i];
    if (std::abs(cur->z - prev->z) <= 1e-9 && *cur->floor != *prev->floor) {
      throw ConfigError("dataset '" + dataset.name + "': floors " + std::to_string(*prev->floor) + " and " +
                        std::to_string(*cur->floor) + " share z = " + text::format_shortest(cur->z));
    }
  }
}

SampleTable parse_samples_csv(std::string_view content, const std::string& source) {
  const auto rows = text::lines(content);
  if (rows.empty() || text::trim(rows.front()).empty()) throw ParseError(source, 1, 0, "empty file");

  const auto header = text::split(rows.front(), ',');
  if (header.size() < kTrailingColumns + 1) {
    throw ParseError(source, 1, 0, "header needs at least one ap_NNNN column followed by x,y,z,floor");
  }
  const std::size_t ap_count = header.size() - kTrailingColumns;
  for (std::size_t c = 0; c < ap_count; ++c) {
    const auto name = text::trim(header[c]);
    const auto index = name.starts_with("ap_") ? text::parse_int(name.substr(3)) : std::nullopt;
    if (!index || *index != static_cast<long long>(c + 1)) {
      throw ParseError(source, 1, c + 1,
                       "expected column '" + ap_column_name(c) + "', found '" + std::string(name) + "'");
    }
  }
  static constexpr std::string_view kTail[kTrailingColumns] = {"x", "y", "z", "floor"};
  for (std::size_t t = 0; t < kTrailingColumns; ++t) {
    if (text::trim(header[ap_count + t]) != kTail[t]) {
      throw ParseError(source, 1, ap_count + t + 1,
                       "expected column '" + std::string(kTail[t]) + "', found '" +
                           std::string(text::trim(header[ap_count + t])) + "'");
    }
  }

  SampleTable table;
  table.ap_count = ap_count;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t row_no = r + 1;
    if (text::trim(rows[r]).empty()) {
      // only trailing blank lines are tolerated
      const bool trailing = std::all_of(rows.begin() + static_cast<std::ptrdiff_t>(r), rows.end(),
                                        [](std::string_view l) { return text::trim(l).empty(); });
      if (trailing) break;
      throw ParseError(source, row_no, 0, "blank line inside data");
    }
    const auto cells = text::split(rows[r], ',');
    if (cells.size() != header.size()) {
      throw ParseError(source, row_no, 0,
                       "row has " + std::to_string(cells.size()) + " columns, header has " +
                           std::to_string(header.size()));
    }
    Sample sample;
    sample.fingerprint.rss.resize(ap_count);
    for (std::size_t c = 0; c < ap_count; ++c) {
      const auto v = text::parse_double(cells[c]);
      if (!v) throw ParseError(source, row_no, c + 1, "non-numeric RSS '" + std::string(cells[c]) + "'");
      if (*v == kNotDetected) {
        sample.fingerprint.rss[c] = kNotDetected;
      } else if (!std::isfinite(*v) || *v < kMinLegalRss || *v > kMaxLegalRss) {
        throw ParseError(source, row_no, c + 1, "RSS " + std::string(cells[c]) + " outside [-120, 0] dBm");
      } else {
        sample.fingerprint.rss[c] = *v;
      }
    }
    double* coords[3] = {&sample.position.x, &sample.position.y, &sample.position.z};
    for (std::size_t t = 0; t < 3; ++t) {
      const auto v = text::parse_double(cells[ap_count + t]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(source, row_no, ap_count + t + 1,
                         "non-numeric coordinate '" + std::string(cells[ap_count + t]) + "'");
      }
      *coords[t] = *v;
    }
    const auto floor_cell = text::trim(cells[ap_count + 3]);
    if (!floor_cell.empty()) {
      const auto f = text::parse_int(floor_cell);
      if (!f) throw ParseError(source, row_no, ap_count + 4, "floor '" + std::string(floor_cell) + "' is not an integer");
      sample.position.floor = static_cast<int>(*f);
    }
    table.samples.push_back(std::move(sample));
  }
  if (table.samples.empty()) throw ParseError(source, 2, 0, "no data rows");
  return table;
}

SampleTable read_samples_csv(const std::filesystem::path& path) {
  return parse_samples_csv(text::read_file(path), path.string());
}

std::string format_samples_csv(std::span<const Sample> samples, std::size_t ap_count) {
  std::string out;
  out.reserve((samples.size() + 1) * (ap_count + 4) * 6);
  for (std::size_t c = 0; c < ap_count; ++c) {
    out += ap_column_name(c);
    out += ',';
  }
  out += "x,y,z,floor\n";
  for (const auto& s : samples) {
    if (s.fingerprint.size() != ap_count) throw DimensionError("format_samples_csv: fingerprint length mismatch");
    for (double v : s.fingerprint.rss) {
      out += text::format_shortest(v);
      out += ',';
    }
    out += text::format_shortest(s.position.x);
    out += ',';
    out += text::format_shortest(s.position.y);
    out += ',';
    out += text::format_shortest(s.position.z);
    out += ',';
    if (s.position.floor) out += std::to_string(*s.position.floor);
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                     std::optional<std::string> name) {
  auto train = read_samples_csv(train_path);
  auto test = read_samples_csv(test_path);
  if (train.ap_count != test.ap_count) {
    throw ParseError(test_path.string(), 1, 0,
                     "test file has " + std::to_string(test.ap_count) + " APs, train file has " +
                         std::to_string(train.ap_count));
  }
  Dataset ds;
  if (name) {
    ds.name = *name;
  } else {
    ds.name = train_path.stem().string();
    if (ds.name.ends_with("_train")) ds.name.resize(ds.name.size() - 6);
  }
  ds.ap_count = train.ap_count;
  ds.train = std::move(train.samples);
  ds.test = std::move(test.samples);
  validate(ds);
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& train_path,
                  const std::filesystem::path& test_path) {
  text::write_file_atomic(train_path, format_samples_csv(dataset.train, dataset.ap_count));
  text::write_file_atomic(test_path, format_samples_csv(dataset.test, dataset.ap_count));
}

}  // namespace ips
