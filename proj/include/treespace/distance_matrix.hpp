#pragma once

#include <span>
#include <vector>

#include "treespace/tree.hpp"

namespace treespace {

/// Pairwise geodesic distances, row-major n x n, zero diagonal. The parallel
/// form maps over pairs and matches the serial reference bit for bit.
std::vector<double> distance_matrix(std::span<const Tree> trees);
std::vector<double> distance_matrix_serial(std::span<const Tree> trees);

/// CSV rendering with an index header row/column and 12-significant-digit
/// distances.
std::string distance_matrix_csv(std::span<const Tree> trees);

}  // namespace treespace
