#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgclust/error.hpp"
#include "dgclust/graph.hpp"

namespace dgclust {

struct TripColumns {
  std::string pickup = "pickup_community_area";
  std::string dropoff = "dropoff_community_area";
  std::string duration = "trip_seconds";
};

struct TripIngest {
  std::vector<TripRecord> records;
  std::size_t rows_read = 0;
  std::size_t dropped = 0;
};

namespace detail {

// Splits one CSV record; double quotes delimit fields and "" escapes a quote.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Area ids may be exported as "8" or "8.0".
inline std::optional<std::int64_t> parse_area(std::string_view s) {
  auto v = parse_double(s);
  if (!v || *v < 1.0 || *v != std::floor(*v) || *v > 9.0e15) return std::nullopt;
  return static_cast<std::int64_t>(*v);
}

}  // namespace detail

/// Reads trip rows from a CSV stream with a header row. Rows whose pickup
/// area, dropoff area or duration is missing or unparseable (or whose
/// duration is negative) are dropped and counted.
inline TripIngest ingest_trips(std::istream& in, const TripColumns& columns = {}) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trips CSV is empty: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = detail::split_csv_line(line);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (detail::trim(header[i]) == name) return i;
    throw ConfigError("trips CSV is missing column '" + name + "'");
  };
  const std::size_t pc = column(columns.pickup), dc = column(columns.dropoff), tc = column(columns.duration);

  TripIngest out;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++out.rows_read;
    const auto f = detail::split_csv_line(line);
    auto get = [&](std::size_t c) -> std::string_view { return c < f.size() ? std::string_view(f[c]) : std::string_view(); };
    const auto pickup = detail::parse_area(get(pc));
    const auto dropoff = detail::parse_area(get(dc));
    const auto seconds = detail::parse_double(get(tc));
    if (!pickup || !dropoff || !seconds || *seconds < 0.0) {
      ++out.dropped;
      continue;
    }
    out.records.push_back({*pickup, *dropoff, *seconds});
  }
  if (in.bad()) throw IoError("error while reading trips CSV");
  return out;
}

inline TripIngest ingest_trips_file(const std::string& path, const TripColumns& columns = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trips file '" + path + "'");
  return ingest_trips(in, columns);
}

}  // namespace dgclust
