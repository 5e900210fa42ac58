#pragma once

#include <optional>
#include <string>

#include "treespace/report.hpp"

namespace treespace::cli {

/// `treespace distance`: geodesic distance matrix as CSV.
void run_distance(const std::string& trees_file, const std::string& out_csv);

struct ConsensusOptions {
  std::string trees_file;
  std::string out_file;           // consensus Newick
  bool normalize = false;
  std::string normalized_out;     // scaled trees (with --normalize)
  std::string scales_csv;         // per-split factors (with --normalize)
};
void run_consensus(const ConsensusOptions& opts);

struct PcaOptions {
  std::string trees_file;
  std::string out_dir;
  std::string objective;             // par | perp; empty = config/default
  std::string algorithm = "greedy";  // greedy | anneal
  bool normalize = false;
  std::string midpoint_file;  // optional explicit midpoint
  std::string config_file;    // optional flat key=value config
  // explicit flag values; unset fields fall back to config file / defaults
  std::optional<uint64_t> seed;
  std::optional<double> weight_cap;
  std::optional<double> golden_tol;
  std::optional<int> iterations;
};
RunReport run_pca(const PcaOptions& opts);

struct SimulateOptions {
  std::string base_file;
  std::string split1, split2;    // taxon lists, e.g. "A,B"
  double theta = 0.5;
  double jitter = 0.0;
  int n = 100;
  uint64_t seed = 0;
  std::string out_trees;
  std::string truth_csv;
  std::string split1b, split2b;  // optional second pair
  std::optional<double> rho;
};
void run_simulate(const SimulateOptions& opts);

}  // namespace treespace::cli
