#pragma once

#include <string>

#include "treespace/pca.hpp"

namespace treespace {

/// Everything one PhiPCA run reports. Serialized as a schema-versioned JSON
/// document plus a plain-text table; numbers are printed with 12 significant
/// digits and the output is byte-stable for fixed inputs and seed (only the
/// wall-time field varies).
struct RunReport {
  int n = 0;
  int m = 0;
  std::vector<std::string> taxa;
  std::string midpoint_newick;
  std::string objective;  // "par" | "perp"
  std::string algorithm;  // "greedy" | "anneal"
  bool normalize = false;
  uint64_t seed = 0;
  PcaConfig config;
  PcaResult result;
  double wall_time_seconds = 0.0;
};

std::string report_json(const RunReport& report);
std::string report_text(const RunReport& report);
std::string projections_csv(const PcaResult& result);

/// Formats a double with 12 significant digits (the report convention).
std::string format_g12(double v);

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace treespace
