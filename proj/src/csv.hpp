#pragma once

// Minimal comma-separated reader shared by the file loaders. Fields are not
// quoted; a trailing '\r' is stripped so CRLF files load.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tirpforge/errors.hpp"

namespace tirpforge::csv {

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// Parses a real number. Returns nullopt on syntax errors; NaN/inf parse.
inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// Line-oriented reader that tracks 1-based line numbers and checks the header.
class Reader {
 public:
  Reader(const std::string& path, std::string_view expected_header) : path_(path), in_(path) {
    if (!in_) throw DataError("cannot open " + path);
    std::string header;
    if (!std::getline(in_, header)) throw DataError(path + ": missing header line");
    line_no_ = 1;
    if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
    if (trim(header) != expected_header) {
      throw DataError(path + ":1: expected header '" + std::string(expected_header) + "'");
    }
  }

  /// Next non-empty row split into `width` fields.
  bool next(std::vector<std::string_view>& fields, std::size_t width) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      std::string_view view = trim(line_);
      if (view.empty()) continue;
      fields = split(view);
      if (fields.size() != width) {
        fail("expected " + std::to_string(width) + " fields, got " +
             std::to_string(fields.size()));
      }
      for (auto& f : fields) f = trim(f);
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path_ + ":" + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

}  // namespace tirpforge::csv
