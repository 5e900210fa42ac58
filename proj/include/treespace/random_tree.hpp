#pragma once

#include <string>
#include <vector>

#include "treespace/rng.hpp"
#include "treespace/tree.hpp"

namespace treespace {

/// Shared taxon set "t0".."t{m-1}".
inline TaxonSetPtr make_taxa(int m) {
  std::vector<std::string> names;
  names.reserve(m);
  for (int i = 0; i < m; ++i) names.push_back("t" + std::to_string(i));
  return std::make_shared<TaxonSet>(std::move(names));
}

namespace detail {

// Random recursive bipartition of the taxa other than taxon 0; the proper
// clades of size >= 2 are exactly the internal splits of a random fully
// resolved unrooted tree (taxon 0 hangs at the root vertex).
inline void random_clades(uint64_t set, bool is_root, Rng& rng,
                          std::vector<uint64_t>& out) {
  int size = std::popcount(set);
  if (size < 2) return;
  if (!is_root) out.push_back(set);
  std::vector<int> bits;
  for (int i = 0; i < 64; ++i)
    if (set >> i & 1) bits.push_back(i);
  for (size_t i = bits.size(); i > 1; --i)
    std::swap(bits[i - 1], bits[rng.uniform_int(static_cast<int>(i))]);
  int k = 1 + rng.uniform_int(size - 1);
  uint64_t a = 0;
  for (int i = 0; i < k; ++i) a |= uint64_t{1} << bits[i];
  random_clades(a, false, rng, out);
  random_clades(set & ~a, false, rng, out);
}

}  // namespace detail

/// Uniform-ish random fully resolved tree with branch lengths in
/// [min_len, min_len + 1).
inline Tree random_tree(const TaxonSetPtr& taxa, Rng& rng,
                        double min_len = 0.05) {
  const uint64_t full = taxa->full_mask();
  std::vector<uint64_t> clades;
  detail::random_clades(full & ~uint64_t{1}, true, rng, clades);
  std::vector<std::pair<Split, double>> lengths;
  for (uint64_t c : clades)
    lengths.emplace_back(Split::from_side(c, full), min_len + rng.uniform());
  for (int i = 0; i < taxa->size(); ++i)
    lengths.emplace_back(terminal_split(i, full), min_len + rng.uniform());
  return Tree(taxa, std::move(lengths));
}

}  // namespace treespace
