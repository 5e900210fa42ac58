#pragma once

#include <span>

#include "treespace/geodesic.hpp"
#include "treespace/simple_line.hpp"

namespace treespace {

struct ProjectOptions {
  /// Golden-section stopping factor: the bracket is reduced to
  /// golden_tol * max(1, |s0|) where s0 is the Euclidean first guess.
  double golden_tol = 1e-8;
  /// Half-width (in s units) of the line region considered by the Euclidean
  /// first guess; <= 0 derives a safe bound from the tree being projected.
  double clip_radius = -1.0;
};

/// Closest point of a tree on a simple line.
struct Projection {
  double s_star = 0.0;  // line coordinate of the closest point
  double d_perp = 0.0;  // d(x, y(s_star))
  double d_par = 0.0;   // d(midpoint, y(s_star)) = |s_star| * speed
};

/// Golden-section projection: a Euclidean projection onto the embedded
/// piecewise-linear image of the line gives the first guess s0; the geodesic
/// optimum is bracketed within sqrt(2) times the Euclidean residual of that
/// guess (widened adaptively under the convexity of s -> d(x, y(s))) and
/// then refined by golden-section search.
Projection project(const Tree& x, const SimpleLine& line,
                   const ProjectOptions& opts = {});

/// Kernel form used by the batch drivers and searches.
Projection project_with_scratch(std::span<const SplitLen> x,
                                const SimpleLine& line,
                                const ProjectOptions& opts,
                                GeodesicScratch& scratch);

/// Per-tree projections; the parallel form maps over trees and is
/// bit-identical to the serial reference.
std::vector<Projection> project_all(std::span<const Tree> data,
                                    const SimpleLine& line,
                                    const ProjectOptions& opts = {});
std::vector<Projection> project_all_serial(std::span<const Tree> data,
                                           const SimpleLine& line,
                                           const ProjectOptions& opts = {});

struct SquaredSums {
  double d2_par = 0.0;   // sum of squared distances along the line
  double d2_perp = 0.0;  // sum of squared residuals to the line
};

/// Both PCA objectives for one line and data set.
SquaredSums sums_of_squares(const SimpleLine& line, std::span<const Tree> data,
                            const ProjectOptions& opts = {});

/// Total squared distance of the data from a reference point.
double total_squared_distance(const Tree& x0, std::span<const Tree> data);
double total_squared_distance_serial(const Tree& x0, std::span<const Tree> data);

}  // namespace treespace
