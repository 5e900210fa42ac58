#pragma once

#include <span>
#include <vector>

#include "treespace/tree.hpp"

namespace treespace {

/// One leg of a geodesic support: the splits of x dropped and the splits of
/// y picked up while crossing this leg, with the L2 norms of their length
/// sub-vectors at the endpoints.
struct SupportLeg {
  std::vector<Split> drop;  // subset of T_x \ T_y
  std::vector<Split> gain;  // subset of T_y \ T_x
  double drop_norm = 0.0;
  double gain_norm = 0.0;
};

/// A split carried along the whole geodesic, with its endpoint lengths.
struct CarriedSplit {
  Split split;
  double len_x;
  double len_y;
};

/// The support structure of the geodesic between two trees. Legs are
/// ordered by non-decreasing drop_norm/gain_norm ratio; leg i collapses at
/// arc-length fraction drop_norm/(drop_norm+gain_norm).
class GeodesicPath {
 public:
  GeodesicPath(Tree x, Tree y, std::vector<CarriedSplit> common,
               std::vector<SupportLeg> support, double length);

  const Tree& source() const { return x_; }
  const Tree& target() const { return y_; }
  const std::vector<CarriedSplit>& common_splits() const { return common_; }
  const std::vector<SupportLeg>& support() const { return support_; }
  double length() const { return length_; }

  /// Tree at arc-length fraction t in [0,1]; common splits interpolate
  /// linearly, leg splits follow the cone-free straight-segment formulas.
  Tree point_along(double t) const;

 private:
  Tree x_, y_;
  std::vector<CarriedSplit> common_;
  std::vector<SupportLeg> support_;
  double length_;
};

/// BHV geodesic between two trees on the same taxon set, built by support
/// refinement over the incompatibility graph between T_x\T_y and T_y\T_x
/// with exact min-cut subproblems.
GeodesicPath geodesic(const Tree& x, const Tree& y);

/// Geodesic distance; skips path materialization where possible.
double distance(const Tree& x, const Tree& y);

/// Length of the path that collapses all of T_x\T_y, passes through the
/// shared-topology face and expands T_y\T_x. Always >= distance(x,y).
double cone_path_distance(const Tree& x, const Tree& y);

// ---------------------------------------------------------------------------
// Kernel interface, used by the hot loops (projection, searches). Operates
// on sorted (mask,len) arrays so callers can avoid building Tree objects.

/// Reusable scratch space; one per thread.
class GeodesicScratch {
 public:
  GeodesicScratch();
  ~GeodesicScratch();
  GeodesicScratch(const GeodesicScratch&) = delete;
  GeodesicScratch& operator=(const GeodesicScratch&) = delete;

  /// Opaque warm-start state: the previous call's support is retried first
  /// and re-refined; falls back to a cold start when it no longer applies.
  void reset_hint();

  struct Impl;
  Impl* impl() const { return impl_; }

 private:
  Impl* impl_;
};

/// Distance between two trees given as sorted entry arrays.
double geodesic_distance_kernel(std::span<const SplitLen> x,
                                std::span<const SplitLen> y,
                                GeodesicScratch& scratch, bool use_hint = false);

double distance_with_scratch(const Tree& x, const Tree& y,
                             GeodesicScratch& scratch);

}  // namespace treespace
