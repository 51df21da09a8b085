#include "featshift/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "featshift/error.hpp"

namespace featshift {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(std::string_view source, std::size_t line, std::size_t column) {
  std::ostringstream os;
  os << source << ": line " << line << ", column " << column;
  return os.str();
}

}  // namespace

Table parse_csv(std::string_view text, std::string_view source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  // Trailing blank lines are tolerated; interior blank lines are not.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw InvalidDataError(std::string(source) + ": empty file, header row required");

  Table table;
  for (auto field : split_fields(lines.front())) table.header.emplace_back(trim(field));
  const std::size_t d = table.header.size();
  for (std::size_t c = 0; c < d; ++c) {
    if (table.header[c].empty()) throw InvalidDataError(where(source, 1, c + 1) + ": empty column name");
  }

  const std::size_t n = lines.size() - 1;
  table.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t line_no = r + 2;
    const auto fields = split_fields(lines[r + 1]);
    if (fields.size() != d) {
      std::ostringstream os;
      os << source << ": line " << line_no << ": expected " << d << " fields, found " << fields.size();
      throw InvalidDataError(os.str());
    }
    for (std::size_t c = 0; c < d; ++c) {
      const std::string_view cell = trim(fields[c]);
      if (cell.empty()) throw InvalidDataError(where(source, line_no, c + 1) + ": missing value");
      double value = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) {
        throw InvalidDataError(where(source, line_no, c + 1) + ": not a number: '" + std::string(cell) + "'");
      }
      if (!std::isfinite(value)) {
        throw InvalidDataError(where(source, line_no, c + 1) + ": non-finite value");
      }
      table.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return table;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidDataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string to_csv(const std::vector<std::string>& header, const Matrix& data) {
  if (header.size() != static_cast<std::size_t>(data.cols())) {
    throw ShapeError("to_csv: header length differs from column count");
  }
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out += ',';
      out += format_double(data(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidDataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidDataError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidDataError("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& data) {
  write_file_atomic(path, to_csv(header, data));
}

std::vector<std::string> default_header(std::size_t d) {
  std::vector<std::string> names;
  names.reserve(d);
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

}  // namespace featshift
