#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "treespace/errors.hpp"

namespace treespace {

/// Fixed, ordered set of taxon labels. Everything else (splits, trees,
/// lines) indexes into one shared TaxonSet; trees in one analysis must be
/// built on the same instance or an equal one.
class TaxonSet {
 public:
  // Splits are stored as 64-bit masks over taxon indices.
  static constexpr int kMaxTaxa = 64;

  explicit TaxonSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (static_cast<int>(names_.size()) < 4)
      fail(ErrorCategory::validation, "taxon set needs at least 4 taxa, got " +
                                          std::to_string(names_.size()));
    if (static_cast<int>(names_.size()) > kMaxTaxa)
      fail(ErrorCategory::validation,
           "taxon set exceeds the supported maximum of 64 taxa");
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
      const std::string& n = names_[i];
      if (n.empty()) fail(ErrorCategory::validation, "empty taxon label");
      if (!index_.emplace(n, i).second)
        fail(ErrorCategory::validation, "duplicate taxon label '" + n + "'");
    }
    full_mask_ = names_.size() == 64 ? ~uint64_t{0}
                                     : (uint64_t{1} << names_.size()) - 1;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  uint64_t full_mask() const { return full_mask_; }

  /// Index of a label, or -1 when absent.
  int index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
  }

  bool operator==(const TaxonSet& o) const { return names_ == o.names_; }
  bool operator!=(const TaxonSet& o) const { return !(*this == o); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  uint64_t full_mask_;
};

using TaxonSetPtr = std::shared_ptr<const TaxonSet>;

inline void require_same_taxa(const TaxonSet& a, const TaxonSet& b) {
  if (a != b) fail(ErrorCategory::validation, "mismatched taxon sets");
}

}  // namespace treespace
