#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lhd/design.hpp"
#include "lhd/error.hpp"

namespace lhd {

inline constexpr int kDesignSchemaVersion = 1;

namespace detail {

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Maps a coordinate in [0, 1] to its level on an n-level grid.
inline Level level_of(double x, std::size_t n, std::size_t line, const std::string& field) {
  constexpr double kTol = 1e-9;
  if (n == 1) {
    if (std::abs(x - 0.5) > kTol) throw DesignFormatError(line, field, "single-level grid requires 0.5");
    return 0;
  }
  const double scaled = x * static_cast<double>(n - 1);
  const double rounded = std::round(scaled);
  if (rounded < 0.0 || rounded > static_cast<double>(n - 1)) {
    throw DesignFormatError(line, field, "value " + format_real(x) + " outside [0, 1]");
  }
  if (std::abs(scaled - rounded) > kTol * static_cast<double>(n)) {
    throw DesignFormatError(line, field,
                            "value " + format_real(x) + " is not on the grid of " + std::to_string(n) + " levels");
  }
  return static_cast<Level>(rounded);
}

}  // namespace detail

/// CSV: header x1,...,xd, then one row of real coordinates per point (17
/// significant digits). The number of rows sets the grid size.
inline void write_csv(const Design& design, std::ostream& out) {
  for (std::size_t s = 0; s < design.dim(); ++s) out << (s ? ",x" : "x") << s + 1;
  out << '\n';
  for (std::size_t i = 0; i < design.size(); ++i) {
    for (std::size_t s = 0; s < design.dim(); ++s) {
      if (s) out << ',';
      out << detail::format_real(design.coord(i, s));
    }
    out << '\n';
  }
}

inline Design read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) {
      header = detail::split_csv_line(detail::trim(line));
      break;
    }
  }
  if (header.empty()) throw DesignFormatError(line_no, "header", "missing header line");
  const std::size_t d = header.size();
  for (std::size_t s = 0; s < d; ++s) {
    if (detail::trim(header[s]) != "x" + std::to_string(s + 1)) {
      throw DesignFormatError(line_no, "header", "column " + std::to_string(s + 1) + " must be named x" +
                                                     std::to_string(s + 1));
    }
  }
  std::vector<double> values;
  std::vector<std::size_t> line_of_row;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = detail::trim(line);
    if (row.empty()) continue;
    const auto cells = detail::split_csv_line(row);
    if (cells.size() != d) {
      throw DesignFormatError(line_no, "row", "expected " + std::to_string(d) + " fields, got " +
                                                  std::to_string(cells.size()));
    }
    for (std::size_t s = 0; s < d; ++s) {
      const std::string cell = detail::trim(cells[s]);
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v)) {
        throw DesignFormatError(line_no, "x" + std::to_string(s + 1), "'" + cell + "' is not a number");
      }
      values.push_back(v);
    }
    line_of_row.push_back(line_no);
  }
  const std::size_t n = line_of_row.size();
  if (n == 0) throw DesignFormatError(line_no, "row", "design has no points");
  std::vector<Level> levels(values.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < d; ++s) {
      levels[i * d + s] = detail::level_of(values[i * d + s], n, line_of_row[i], "x" + std::to_string(s + 1));
    }
  }
  Provenance prov;
  prov.generator = "csv";
  return Design(GridSpec(n, d), std::move(levels), std::move(prov));
}

/// JSON design document. level_indices are authoritative; points holds the
/// derived real coordinates for convenience.
inline nlohmann::json to_json(const Design& design) {
  const auto& prov = design.provenance();
  nlohmann::json doc;
  doc["schema_version"] = kDesignSchemaVersion;
  doc["n"] = design.size();
  doc["d"] = design.dim();
  doc["generator"] = prov.generator;
  doc["rng"] = prov.rng;
  doc["seed"] = prov.seed;
  if (prov.r_requested) doc["r_requested"] = *prov.r_requested;
  if (prov.r_effective) doc["r_effective"] = *prov.r_effective;
  if (prov.insertion_order) doc["insertion_order"] = *prov.insertion_order;
  auto levels = nlohmann::json::array();
  auto points = nlohmann::json::array();
  for (std::size_t i = 0; i < design.size(); ++i) {
    auto lv = nlohmann::json::array();
    auto pt = nlohmann::json::array();
    for (std::size_t s = 0; s < design.dim(); ++s) {
      lv.push_back(design.level(i, s));
      pt.push_back(design.coord(i, s));
    }
    levels.push_back(std::move(lv));
    points.push_back(std::move(pt));
  }
  doc["level_indices"] = std::move(levels);
  doc["points"] = std::move(points);
  return doc;
}

inline Design from_json(const nlohmann::json& doc) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key)) throw DesignFormatError(0, key, "missing field");
    return doc.at(key);
  };
  auto positive = [&](const char* key) {
    const auto& v = need(key);
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
      throw DesignFormatError(0, key, "must be a positive integer");
    }
    return v.get<std::size_t>();
  };
  const auto& version = need("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kDesignSchemaVersion) {
    throw DesignFormatError(0, "schema_version", "unsupported version " + version.dump());
  }
  const std::size_t n = positive("n");
  const std::size_t d = positive("d");
  const auto& rows = need("level_indices");
  if (!rows.is_array() || rows.size() != n) {
    throw DesignFormatError(0, "level_indices", "expected " + std::to_string(n) + " rows");
  }
  std::vector<Level> levels;
  levels.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    const std::string field = "level_indices[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != d) {
      throw DesignFormatError(0, field, "expected " + std::to_string(d) + " entries");
    }
    for (const auto& v : row) {
      if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= n) {
        throw DesignFormatError(0, field, "entry " + v.dump() + " is not a level in [0, " + std::to_string(n - 1) + "]");
      }
      levels.push_back(v.get<Level>());
    }
  }
  Provenance prov;
  try {
    if (doc.contains("generator")) prov.generator = doc.at("generator").get<std::string>();
    if (doc.contains("rng")) prov.rng = doc.at("rng").get<std::string>();
    if (doc.contains("seed")) prov.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("r_requested")) prov.r_requested = doc.at("r_requested").get<double>();
    if (doc.contains("r_effective")) prov.r_effective = doc.at("r_effective").get<double>();
    if (doc.contains("insertion_order")) {
      auto order = doc.at("insertion_order").get<std::vector<std::size_t>>();
      if (order.size() != n) throw DesignFormatError(0, "insertion_order", "expected " + std::to_string(n) + " entries");
      prov.insertion_order = std::move(order);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DesignFormatError(0, "provenance", e.what());
  }
  return Design(GridSpec(n, d), std::move(levels), std::move(prov));
}

inline void write_json(const Design& design, std::ostream& out) { out << to_json(design).dump(2) << '\n'; }

inline Design read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DesignFormatError(0, "json", e.what());
  }
  return from_json(doc);
}

inline bool is_json_path(const std::filesystem::path& path) { return path.extension() == ".json"; }

/// Writes JSON for *.json paths and CSV otherwise.
inline void save_design(const Design& design, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  if (is_json_path(path)) {
    write_json(design, out);
  } else {
    write_csv(design, out);
  }
  if (!out) throw Error("failed writing " + path.string());
}

inline Design load_design(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return is_json_path(path) ? read_json(in) : read_csv(in);
}

}  // namespace lhd
