#pragma once

#include <charconv>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "core.hpp"

namespace lypqc::io {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view text, std::string_view context) {
  std::string t = trim(text);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw DataError("cannot parse number '" + t + "' (" + std::string(context) + ")");
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Simple CSV table: header plus numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
      out += '\n';
    }
    return out;
  }
};

inline CsvTable parse_csv(std::string_view text, const std::vector<std::string>& expected_header) {
  std::istringstream in{std::string(text)};
  std::string line;
  CsvTable t;
  if (!std::getline(in, line)) throw DataError("empty CSV");
  t.header = split(line, ',');
  if (t.header != expected_header) {
    std::string want;
    for (auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
    throw DataError("CSV header mismatch, expected '" + want + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.header.size())
      throw DataError("CSV line " + std::to_string(lineno) + ": wrong column count");
    std::vector<double> row;
    for (auto& c : cells) row.push_back(parse_double(c, "CSV line " + std::to_string(lineno)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Flat `key=value` text, one pair per line, keys kept in insertion order.
struct KeyValues {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries)
      if (k == key) {
        v = std::move(value);
        return;
      }
    entries.emplace_back(std::move(key), std::move(value));
  }
  void set(std::string key, double value) { set(std::move(key), fmt(value)); }

  const std::string* find(std::string_view key) const {
    for (auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  double number(std::string_view key) const {
    auto* v = find(key);
    if (!v) throw DataError("missing key '" + std::string(key) + "'");
    return parse_double(*v, key);
  }

  std::string to_string() const {
    std::string out;
    for (auto& [k, v] : entries) out += k + "=" + v + "\n";
    return out;
  }

  static KeyValues parse(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto eq = t.find('=');
      if (eq == std::string::npos)
        throw DataError("line " + std::to_string(lineno) + ": expected key=value");
      kv.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return kv;
  }
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a sibling temp file and rename, so readers never see partial output.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lypqc::io
