#pragma once

#include <span>
#include <utility>
#include <vector>

#include "treespace/topology.hpp"

namespace treespace {

/// An unrooted phylogenetic tree: a pairwise-compatible weighted split set
/// with strictly positive branch lengths. All m terminal splits are always
/// present. Immutable after construction.
class Tree {
 public:
  /// Validates: all terminals present, lengths > 0, pairwise compatibility,
  /// total split count <= 2m-3.
  Tree(TaxonSetPtr taxa, std::vector<std::pair<Split, double>> lengths);

  const TaxonSetPtr& taxa() const { return taxa_; }
  int num_taxa() const { return taxa_->size(); }
  uint64_t full_mask() const { return taxa_->full_mask(); }

  /// Branch length of `p`, zero when the split is absent.
  double length(Split p) const;
  bool contains(Split p) const;

  /// All (split,length) entries sorted by canonical mask, terminals included.
  std::span<const SplitLen> entries() const { return entries_; }

  std::vector<Split> internal_splits() const;
  Topology topology() const;

  /// Sum over all branches, and the L2 norm of the embedded length vector.
  double total_length() const;

  /// Equal taxa and identical (split, length) maps.
  bool operator==(const Tree& o) const;
  bool operator!=(const Tree& o) const { return !(*this == o); }

 private:
  TaxonSetPtr taxa_;
  std::vector<SplitLen> entries_;  // sorted by mask
};

/// L2 distance between the embedded split-length vectors.
double euclidean_distance(const Tree& x, const Tree& y);

}  // namespace treespace
