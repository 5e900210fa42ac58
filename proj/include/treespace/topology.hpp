#pragma once

#include <algorithm>
#include <vector>

#include "treespace/split.hpp"

namespace treespace {

/// A set of pairwise-compatible internal splits, identifying an orthant of
/// tree-space. May be unresolved (fewer than m-3 splits).
class Topology {
 public:
  Topology() = default;

  /// Validates pairwise compatibility and the m-3 bound.
  Topology(std::vector<Split> splits, const TaxonSet& taxa);

  const std::vector<Split>& splits() const { return splits_; }
  int size() const { return static_cast<int>(splits_.size()); }
  bool contains(Split p) const {
    return std::binary_search(splits_.begin(), splits_.end(), p);
  }
  bool fully_resolved(const TaxonSet& taxa) const {
    return size() == taxa.size() - 3;
  }

  /// Topology with one split removed (no-op when absent).
  Topology without(Split p) const;

  bool operator==(const Topology& o) const { return splits_ == o.splits_; }

 private:
  std::vector<Split> splits_;  // sorted canonical
};

/// True iff p is compatible with every split of t.
bool compatible_with(Split p, const Topology& t, uint64_t full_mask);

/// All splits obtainable from `p` by one extended NNI move across the edge
/// `p` in the tree with internal splits `t` (which must contain `p` or be
/// compatible with it): one subtree from each end of the edge is exchanged.
/// On a fully resolved topology this is the standard pair of NNI
/// alternatives. Terminal splits are never exchanged.
std::vector<Split> xnni_replacements(const Topology& t, Split p,
                                     const TaxonSet& taxa);

}  // namespace treespace
