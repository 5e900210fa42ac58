#include "treespace/split.hpp"

#include <algorithm>
#include <sstream>

namespace treespace {

namespace {

std::string join_side(uint64_t side, const TaxonSet& taxa) {
  std::string out;
  for (int i = 0; i < taxa.size(); ++i) {
    if (side >> i & 1) {
      if (!out.empty()) out += ',';
      out += taxa.name(i);
    }
  }
  return out;
}

}  // namespace

std::string format_split(Split p, const TaxonSet& taxa) {
  uint64_t a = p.mask();
  uint64_t b = ~a & taxa.full_mask();
  std::string sa = join_side(a, taxa);
  std::string sb = join_side(b, taxa);
  if (std::popcount(b) < std::popcount(a) ||
      (std::popcount(b) == std::popcount(a) && sb < sa))
    std::swap(sa, sb);
  return sa + "|" + sb;
}

Split parse_split(const std::string& text, const TaxonSet& taxa) {
  std::string side = text.substr(0, text.find('|'));
  uint64_t mask = 0;
  std::stringstream ss(side);
  std::string label;
  while (std::getline(ss, label, ',')) {
    // trim surrounding whitespace
    size_t b = label.find_first_not_of(" \t");
    size_t e = label.find_last_not_of(" \t");
    if (b == std::string::npos)
      fail(ErrorCategory::parse, "empty taxon label in split '" + text + "'");
    label = label.substr(b, e - b + 1);
    int idx = taxa.index_of(label);
    if (idx < 0)
      fail(ErrorCategory::parse, "unknown taxon '" + label + "' in split '" + text + "'");
    mask |= uint64_t{1} << idx;
  }
  if (mask == 0) fail(ErrorCategory::parse, "empty split '" + text + "'");
  return Split::from_side(mask, taxa.full_mask());
}

}  // namespace treespace
