#pragma once

// Report files: JSON (schema in data/report.schema.json) or plot-ready CSV.

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "bvlab/errors.hpp"
#include "bvlab/experiments.hpp"

namespace bvlab {

enum class ReportFormat { Json, Csv };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown format '" + s + "' (json, csv)");
}

/// The deterministic payload plus the "timing" key, which is the only part
/// allowed to differ between identical runs.
inline json report_with_timing(const Outcome& o) {
  json j = o.report;
  j["timing"] = {{"wall_ms", o.wall_ms}};
  return j;
}

inline json strip_timing(json j) {
  j.erase("timing");
  return j;
}

inline std::string csv_text(const Outcome& o) {
  std::string out = "n,value\n";
  char buf[64];
  for (const auto& [n, v] : o.csv) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", static_cast<std::size_t>(n), v);
    out += buf;
  }
  return out;
}

/// Writes <dir>/<id>.json or <dir>/<id>.csv and returns the path.
inline std::filesystem::path emit_report(const Outcome& o, const std::filesystem::path& dir, ReportFormat fmt) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / (o.id + (fmt == ReportFormat::Json ? ".json" : ".csv"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report " + path.string());
  if (fmt == ReportFormat::Json) {
    out << report_with_timing(o).dump(1) << "\n";
  } else {
    out << csv_text(o);
  }
  if (!out) throw Error("write failed for " + path.string());
  return path;
}

}  // namespace bvlab
