#include "treespace/consensus.hpp"

#include <algorithm>

namespace treespace {

namespace {

struct SplitStat {
  int count = 0;
  std::vector<double> lens;

  // value-sorted mean, exactly invariant to permuting the input trees
  double mean() const {
    std::vector<double> sorted = lens;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    for (double v : sorted) total += v;
    return total / count;
  }
};

std::map<uint64_t, SplitStat> split_stats(std::span<const Tree> trees) {
  std::map<uint64_t, SplitStat> stats;
  for (const Tree& t : trees)
    for (const SplitLen& e : t.entries()) {
      SplitStat& s = stats[e.mask];
      ++s.count;
      s.lens.push_back(e.len);
    }
  return stats;
}

void check_input(std::span<const Tree> trees) {
  if (trees.empty()) fail(ErrorCategory::degenerate, "empty tree collection");
  for (const Tree& t : trees) require_same_taxa(*trees[0].taxa(), *t.taxa());
}

}  // namespace

Tree majority_consensus(std::span<const Tree> trees) {
  check_input(trees);
  const Tree& first = trees[0];
  const uint64_t full = first.full_mask();
  const int n = static_cast<int>(trees.size());

  std::vector<std::pair<Split, double>> lengths;
  for (const auto& [mask, stat] : split_stats(trees)) {
    Split p = Split::from_side(mask, full);
    if (p.is_terminal(full) || 2 * stat.count > n)
      lengths.emplace_back(p, stat.mean());
  }
  return Tree(first.taxa(), std::move(lengths));
}

std::pair<std::vector<Tree>, ScaleMap> normalize_lengths(
    std::span<const Tree> trees) {
  check_input(trees);
  const uint64_t full = trees[0].full_mask();

  ScaleMap scales;
  for (const auto& [mask, stat] : split_stats(trees))
    scales.factors.emplace(Split::from_side(mask, full), stat.mean());

  std::vector<Tree> out;
  out.reserve(trees.size());
  for (const Tree& t : trees) {
    std::vector<std::pair<Split, double>> lengths;
    lengths.reserve(t.entries().size());
    for (const SplitLen& e : t.entries()) {
      Split p = Split::from_side(e.mask, full);
      lengths.emplace_back(p, e.len / scales.factor(p));
    }
    out.emplace_back(t.taxa(), std::move(lengths));
  }
  return {std::move(out), std::move(scales)};
}

Tree back_transform(const Tree& tree, const ScaleMap& scales) {
  const uint64_t full = tree.full_mask();
  std::vector<std::pair<Split, double>> lengths;
  lengths.reserve(tree.entries().size());
  for (const SplitLen& e : tree.entries()) {
    Split p = Split::from_side(e.mask, full);
    lengths.emplace_back(p, e.len * scales.factor(p));
  }
  return Tree(tree.taxa(), std::move(lengths));
}

}  // namespace treespace
