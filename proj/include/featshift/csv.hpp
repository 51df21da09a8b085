#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "featshift/numeric.hpp"

namespace featshift {

/// A numeric table with named columns.
struct Table {
  std::vector<std::string> header;
  Matrix data;
};

/// Parses comma-separated text with a header row. Every data cell must be a
/// finite decimal number; errors name the 1-based line and column.
Table parse_csv(std::string_view text, std::string_view source = "<input>");
Table read_csv(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::string to_csv(const std::vector<std::string>& header, const Matrix& data);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& data);

/// Default column names x0, x1, ...
std::vector<std::string> default_header(std::size_t d);

}  // namespace featshift
