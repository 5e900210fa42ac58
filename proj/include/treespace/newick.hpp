#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treespace/tree.hpp"

namespace treespace {

/// Parses a single Newick expression. Branch lengths are mandatory on every
/// edge, internal labels are ignored, square-bracket comments are stripped
/// and whitespace is tolerated. Rooted inputs (degree-2 root) are de-rooted
/// by fusing the two root edges. Zero-length internal edges are dropped;
/// zero or negative terminal lengths are rejected.
///
/// When `taxa` is empty a TaxonSet is built from the leaf labels in
/// lexicographic order; otherwise the leaf labels must match it exactly.
Tree parse_newick(const std::string& text, TaxonSetPtr taxa = nullptr);

/// Canonical serialization: the tree is written rooted at the internal
/// vertex next to the highest-index taxon, children ordered by smallest
/// taxon index, lengths in shortest round-trip decimal form.
std::string write_newick(const Tree& x);

/// Multi-tree file: one Newick expression per line; '#'-prefixed lines are
/// comments; blank lines are skipped. All trees must share one taxon set.
std::vector<Tree> read_trees_file(const std::string& path);
std::vector<Tree> parse_trees_text(const std::string& text,
                                   TaxonSetPtr taxa = nullptr);

}  // namespace treespace
