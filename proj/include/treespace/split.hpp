#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "treespace/taxon_set.hpp"

namespace treespace {

/// A bipartition of the taxon set. Stored canonically as the side that does
/// NOT contain taxon 0, so equality and ordering are just mask comparisons.
class Split {
 public:
  Split() : mask_(0) {}

  /// Builds a split from one side of the bipartition; flips to canonical
  /// form if the given side contains taxon 0.
  static Split from_side(uint64_t side, uint64_t full_mask) {
    side &= full_mask;
    if (side == 0 || side == full_mask)
      fail(ErrorCategory::validation, "split side must be a proper nonempty subset");
    if (side & 1) side = ~side & full_mask;
    return Split(side);
  }

  uint64_t mask() const { return mask_; }
  bool valid() const { return mask_ != 0; }

  int side_size() const { return std::popcount(mask_); }

  /// True when one side of the bipartition is a single taxon.
  bool is_terminal(uint64_t full_mask) const {
    return std::popcount(mask_) == 1 ||
           std::popcount(mask_) == std::popcount(full_mask) - 1;
  }

  friend bool operator==(Split a, Split b) { return a.mask_ == b.mask_; }
  friend bool operator!=(Split a, Split b) { return a.mask_ != b.mask_; }
  friend bool operator<(Split a, Split b) { return a.mask_ < b.mask_; }

 private:
  explicit Split(uint64_t m) : mask_(m) {}
  uint64_t mask_;
};

/// Terminal split isolating taxon `i` (canonical form).
inline Split terminal_split(int i, uint64_t full_mask) {
  return Split::from_side(uint64_t{1} << i, full_mask);
}

/// Two splits can coexist on one tree iff at least one of the four pairwise
/// side intersections is empty.
inline bool compatible(Split p, Split q, uint64_t full) {
  uint64_t a = p.mask(), b = q.mask();
  return (a & b) == 0 || (a & ~b) == 0 || (~a & b) == 0 || ((a | b) & full) == full;
}

inline bool compatible(Split p, Split q, const TaxonSet& taxa) {
  return compatible(p, q, taxa.full_mask());
}

/// Renders a split as "A,B|C,D,E": smaller side first, taxa in index order,
/// ties broken lexicographically.
std::string format_split(Split p, const TaxonSet& taxa);

/// Parses "A,B" (one side, comma-separated labels) or "A,B|C,D,E".
Split parse_split(const std::string& text, const TaxonSet& taxa);

/// (mask, length) entry used by the geodesic and line kernels; arrays of
/// these are always kept sorted by mask.
struct SplitLen {
  uint64_t mask;
  double len;
};

}  // namespace treespace
