#pragma once

// Small text and file helpers shared by the CSV readers/writers.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ips::text {

/// Shortest decimal representation that parses back to the same double.
std::string format_shortest(double value);

/// Fixed-point formatting with `decimals` digits ("%.*f").
std::string format_fixed(double value, int decimals);

/// Parses the whole of `token` as a double; nullopt on any leftover characters.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Splits file content into lines, accepting LF or CRLF; a trailing newline
/// does not produce an empty final line.
std::vector<std::string_view> lines(std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ips::text
