#include "treespace/tree.hpp"

#include <algorithm>
#include <cmath>

namespace treespace {

Tree::Tree(TaxonSetPtr taxa, std::vector<std::pair<Split, double>> lengths)
    : taxa_(std::move(taxa)) {
  if (!taxa_) fail(ErrorCategory::validation, "tree needs a taxon set");
  const uint64_t full = taxa_->full_mask();
  entries_.reserve(lengths.size());
  for (const auto& [p, len] : lengths) {
    if (!p.valid()) fail(ErrorCategory::validation, "invalid split in tree");
    if (!(len > 0.0))
      fail(ErrorCategory::validation,
           "non-positive branch length for split " + format_split(p, *taxa_));
    entries_.push_back({p.mask(), len});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const SplitLen& a, const SplitLen& b) { return a.mask < b.mask; });
  for (size_t i = 1; i < entries_.size(); ++i)
    if (entries_[i].mask == entries_[i - 1].mask)
      fail(ErrorCategory::validation, "duplicate split in tree");

  if (static_cast<int>(entries_.size()) > 2 * taxa_->size() - 3)
    fail(ErrorCategory::validation, "tree has more than 2m-3 splits");

  int terminals = 0;
  for (const SplitLen& e : entries_) {
    Split p = Split::from_side(e.mask, full);
    if (p.is_terminal(full)) ++terminals;
  }
  if (terminals != taxa_->size())
    fail(ErrorCategory::validation, "tree must contain all terminal splits");

  for (size_t i = 0; i < entries_.size(); ++i)
    for (size_t j = i + 1; j < entries_.size(); ++j)
      if (!compatible(Split::from_side(entries_[i].mask, full),
                      Split::from_side(entries_[j].mask, full), full))
        fail(ErrorCategory::validation, "incompatible splits in tree");
}

double Tree::length(Split p) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), p.mask(),
      [](const SplitLen& e, uint64_t m) { return e.mask < m; });
  return (it != entries_.end() && it->mask == p.mask()) ? it->len : 0.0;
}

bool Tree::contains(Split p) const { return length(p) > 0.0; }

std::vector<Split> Tree::internal_splits() const {
  const uint64_t full = taxa_->full_mask();
  std::vector<Split> out;
  for (const SplitLen& e : entries_) {
    Split p = Split::from_side(e.mask, full);
    if (!p.is_terminal(full)) out.push_back(p);
  }
  return out;
}

Topology Tree::topology() const { return Topology(internal_splits(), *taxa_); }

double Tree::total_length() const {
  double s = 0.0;
  for (const SplitLen& e : entries_) s += e.len;
  return s;
}

bool Tree::operator==(const Tree& o) const {
  if (*taxa_ != *o.taxa_) return false;
  if (entries_.size() != o.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].mask != o.entries_[i].mask ||
        entries_[i].len != o.entries_[i].len)
      return false;
  return true;
}

double euclidean_distance(const Tree& x, const Tree& y) {
  require_same_taxa(*x.taxa(), *y.taxa());
  auto ex = x.entries();
  auto ey = y.entries();
  // Squared coordinate differences over the union of splits, summed in
  // value-sorted order so the result is exactly symmetric and invariant
  // under taxon relabeling.
  std::vector<double> sq;
  sq.reserve(ex.size() + ey.size());
  size_t i = 0, j = 0;
  while (i < ex.size() || j < ey.size()) {
    double d;
    if (j == ey.size() || (i < ex.size() && ex[i].mask < ey[j].mask))
      d = ex[i++].len;
    else if (i == ex.size() || ey[j].mask < ex[i].mask)
      d = ey[j++].len;
    else {
      d = ex[i++].len - ey[j++].len;
    }
    if (d != 0.0) sq.push_back(d * d);
  }
  std::sort(sq.begin(), sq.end());
  double total = 0.0;
  for (double v : sq) total += v;
  return std::sqrt(total);
}

}  // namespace treespace
