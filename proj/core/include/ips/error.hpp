#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ips {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated input invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Structured parse failure with the offending location.
/// Rows and columns are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t row, std::size_t column, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t row_;
  std::size_t column_;
};

/// A value fell outside its legal range (e.g. RSS below min_rss).
class RangeError : public Error {
 public:
  RangeError(std::size_t index, const std::string& what);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Ratio normalization against a non-positive baseline.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ips
