#include "treespace/topology.hpp"

#include <algorithm>

namespace treespace {

Topology::Topology(std::vector<Split> splits, const TaxonSet& taxa)
    : splits_(std::move(splits)) {
  std::sort(splits_.begin(), splits_.end());
  splits_.erase(std::unique(splits_.begin(), splits_.end()), splits_.end());
  const uint64_t full = taxa.full_mask();
  for (const Split& p : splits_) {
    if (p.is_terminal(full))
      fail(ErrorCategory::validation, "topology must contain internal splits only");
  }
  for (size_t i = 0; i < splits_.size(); ++i)
    for (size_t j = i + 1; j < splits_.size(); ++j)
      if (!compatible(splits_[i], splits_[j], full))
        fail(ErrorCategory::validation, "incompatible splits in topology");
  if (size() > taxa.size() - 3)
    fail(ErrorCategory::validation, "topology has more than m-3 internal splits");
}

Topology Topology::without(Split p) const {
  Topology t;
  t.splits_.reserve(splits_.size());
  for (const Split& q : splits_)
    if (q != p) t.splits_.push_back(q);
  return t;
}

bool compatible_with(Split p, const Topology& t, uint64_t full_mask) {
  for (const Split& q : t.splits())
    if (!compatible(p, q, full_mask)) return false;
  return true;
}

namespace {

// Subtree blocks hanging off one end of the edge `p`: the maximal proper
// subsets of `side` among the tree's split sides and terminal singletons.
// They partition `side`.
void end_blocks(uint64_t side, const std::vector<Split>& splits, uint64_t full,
                std::vector<uint64_t>& out) {
  out.clear();
  for (const Split& q : splits) {
    uint64_t s = q.mask();
    uint64_t c = ~s & full;
    if ((s & ~side) == 0 && s != side) out.push_back(s);
    if ((c & ~side) == 0 && c != side) out.push_back(c);
  }
  for (int i = 0; i < 64; ++i) {
    uint64_t bit = uint64_t{1} << i;
    if (bit > side) break;
    if (side & bit) out.push_back(bit);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  // keep maximal elements only
  std::vector<uint64_t> maximal;
  for (uint64_t s : out) {
    bool covered = false;
    for (uint64_t t : out)
      if (t != s && (s & ~t) == 0) {
        covered = true;
        break;
      }
    if (!covered) maximal.push_back(s);
  }
  out = std::move(maximal);
}

}  // namespace

std::vector<Split> xnni_replacements(const Topology& t, Split p,
                                     const TaxonSet& taxa) {
  const uint64_t full = taxa.full_mask();
  if (p.is_terminal(full))
    fail(ErrorCategory::validation, "terminal splits have no XNNI moves");
  if (!compatible_with(p, t, full))
    fail(ErrorCategory::validation, "split is not compatible with the topology");

  std::vector<Split> tree_splits = t.splits();
  if (!t.contains(p)) tree_splits.push_back(p);

  uint64_t side = p.mask();
  uint64_t other = ~side & full;
  std::vector<uint64_t> blocks_near, blocks_far;
  end_blocks(side, tree_splits, full, blocks_near);
  end_blocks(other, tree_splits, full, blocks_far);

  std::vector<Split> result;
  for (uint64_t u : blocks_near)
    for (uint64_t v : blocks_far) {
      uint64_t swapped = (side & ~u) | v;
      if (swapped == 0 || swapped == full) continue;  // degenerate swap
      result.push_back(Split::from_side(swapped, full));
    }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

}  // namespace treespace
