#pragma once

#include <optional>
#include <span>
#include <vector>

#include "treespace/projection.hpp"

namespace treespace {

/// Which sum of squares the line search optimizes: maximize the projected
/// variance d^2_par or minimize the residual d^2_perp.
enum class Objective { f_parallel, f_perpendicular };

struct AnnealSchedule {
  int iterations = 5000;
  double tau0 = 1.0;        // initial temperature
  double decay = 0.999;     // per-iteration temperature factor
  double birth_floor = 0.2; // lower bound on the birth probability
};

struct PcaConfig {
  Objective objective = Objective::f_parallel;
  /// Cap on |w| during weight search; <= 0 derives a default from the data:
  /// 10 x (max branch length) / (min positive internal midpoint length).
  double weight_cap = 0.0;
  double golden_tol = 1e-8;
  AnnealSchedule annealing;
  uint64_t seed = 0;
  bool normalize = false;
};

struct PcaResult {
  SimpleLine line;
  std::vector<double> normalized_weights;  // unit Euclidean norm
  std::vector<Projection> projections;     // per input tree
  double d2_par = 0.0;
  double d2_perp = 0.0;
  double d2_0 = 0.0;  // sum of squared distances of the data from x0
  double proportion = 0.0;  // d2_par / d2_0 (NaN when d2_0 = 0)
  std::optional<ScaleMap> scale_map;
};

/// Union of the internal splits found in at least one data tree; search
/// candidates (both p and its replacement p') are drawn from this set only.
std::vector<Split> feasible_splits(std::span<const Tree> data);

/// Best weight for extending `line` with (p, p') on `interval`, holding the
/// existing weights fixed: golden-section search of the objective over the
/// feasible range clipped to |w| <= weight_cap.
struct WeightSearch {
  double weight = 0.0;
  double score = 0.0;
};
WeightSearch optimize_weight(const SimpleLine& line, Split p, Split p_prime,
                             int interval, WeightInterval range,
                             std::span<const Tree> data, Objective objective,
                             const PcaConfig& cfg);

/// Greedy construction of the principal line: repeatedly add the split pair
/// (with optimized weight) that improves the objective most, until nothing
/// improves it or m-3 pairs are placed.
PcaResult greedy_search(std::span<const Tree> data, const Tree& x0,
                        const PcaConfig& cfg);

/// Simulated annealing over simple lines with random birth/death moves;
/// returns the best state visited.
PcaResult anneal_search(std::span<const Tree> data, const Tree& x0,
                        const PcaConfig& cfg);

/// d2_par / d2_0; throws when the data coincide with x0 (d2_0 = 0).
double proportion_of_variance(const PcaResult& result);

}  // namespace treespace
