#pragma once

#include <map>
#include <span>
#include <vector>

#include "treespace/tree.hpp"

namespace treespace {

/// Per-split scale factors recorded by normalize_lengths: the mean length of
/// the split across the trees containing it, which became the divisor.
struct ScaleMap {
  std::map<Split, double> factors;

  /// Factor for a split; splits outside the recorded domain scale by 1.
  double factor(Split p) const {
    auto it = factors.find(p);
    return it == factors.end() ? 1.0 : it->second;
  }
};

/// Majority consensus: splits present in strictly more than half the trees,
/// each with its average length over the trees that contain it. Terminal
/// splits are always retained.
Tree majority_consensus(std::span<const Tree> trees);

/// Scales every occurrence of each split by the inverse of its mean length
/// over the trees containing it, so that the post-scaling mean is one.
std::pair<std::vector<Tree>, ScaleMap> normalize_lengths(
    std::span<const Tree> trees);

/// Undoes normalize_lengths on a tree.
Tree back_transform(const Tree& tree, const ScaleMap& scales);

}  // namespace treespace
