#pragma once

#include <string>
#include <vector>

#include "treespace/newick.hpp"
#include "treespace/projection.hpp"
#include "treespace/random_tree.hpp"
#include "treespace/simple_line.hpp"

namespace ts = treespace;

namespace test_support {

inline ts::TaxonSetPtr letters(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back(std::string(1, 'A' + i));
  return std::make_shared<ts::TaxonSet>(std::move(names));
}

inline ts::Split split(const ts::TaxonSetPtr& taxa, const std::string& side) {
  return ts::parse_split(side, *taxa);
}

inline ts::Tree tree(const std::string& newick, ts::TaxonSetPtr taxa = nullptr) {
  return ts::parse_newick(newick, std::move(taxa));
}

/// Tree built from (side, length) pairs for internal splits; all terminals
/// get the given length.
inline ts::Tree tree_from_splits(
    const ts::TaxonSetPtr& taxa,
    const std::vector<std::pair<std::string, double>>& internals,
    double terminal_len = 1.0) {
  std::vector<std::pair<ts::Split, double>> lengths;
  for (const auto& [side, len] : internals)
    lengths.emplace_back(split(taxa, side), len);
  for (int i = 0; i < taxa->size(); ++i)
    lengths.emplace_back(ts::terminal_split(i, taxa->full_mask()), terminal_len);
  return ts::Tree(taxa, std::move(lengths));
}

/// All internal splits on the taxon set (2^(m-1) - 1 - m of them).
inline std::vector<ts::Split> all_internal_splits(const ts::TaxonSet& taxa) {
  std::vector<ts::Split> out;
  const uint64_t full = taxa.full_mask();
  for (uint64_t side = 1; side < full; ++side) {
    int c = std::popcount(side);
    if (c < 2 || c > taxa.size() - 2) continue;
    out.push_back(ts::Split::from_side(side, full));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// f_par of a line, invariant to its parameterization: rescales the weights
/// to unit speed with a deterministic orientation, so two encodings of the
/// same geometric line score bit-identically.
inline double canonical_f_par(const ts::SimpleLine& line,
                              std::span<const ts::Tree> data) {
  if (line.num_pairs() == 0) return 0.0;
  double flip = line.pairs()[0].weight < 0.0 ? -1.0 : 1.0;
  std::vector<ts::SplitPair> pairs = line.pairs();
  for (ts::SplitPair& pr : pairs) pr.weight *= flip / line.speed();
  ts::SimpleLine canon(line.midpoint(), std::move(pairs));
  ts::ProjectOptions opts;
  opts.golden_tol = 1e-10;
  return ts::sums_of_squares(canon, data, opts).d2_par;
}

/// Random valid simple line through x0 with up to k pairs, built by feasible
/// random extensions.
inline ts::SimpleLine random_line(const ts::Tree& x0, int k, ts::Rng& rng,
                                  double cap = 3.0) {
  ts::SimpleLine line(x0);
  std::vector<ts::Split> pool = all_internal_splits(*x0.taxa());
  const uint64_t full = x0.full_mask();
  for (int round = 0; round < k; ++round) {
    struct Cand {
      ts::Split p, q;
      int interval, sign;
      double lo, hi;
    };
    std::vector<Cand> cands;
    auto used = [&](ts::Split s) {
      for (const ts::SplitPair& pr : line.pairs())
        if (pr.p == s || pr.p_prime == s) return true;
      return false;
    };
    for (const ts::Split& p : pool) {
      if (used(p)) continue;
      for (const ts::Split& q : pool) {
        if (used(q) || p == q || ts::compatible(p, q, full)) continue;
        for (int i = 0; i <= line.num_pairs(); ++i)
          for (int sign : {-1, 1}) {
            auto r = ts::try_extension(line, p, q, i, sign);
            if (!r) continue;
            double eps = 1e-3 * cap;
            double lo = r->hi <= 0.0 ? std::max(r->lo, -cap)
                                     : std::max(r->lo, eps);
            double hi = r->hi <= 0.0 ? std::min(r->hi, -eps)
                                     : std::min(r->hi, cap);
            if (lo <= hi) cands.push_back({p, q, i, sign, lo, hi});
          }
      }
    }
    if (cands.empty()) break;
    const Cand& c = cands[rng.uniform_int(static_cast<int>(cands.size()))];
    double w = c.lo + (c.hi - c.lo) * rng.uniform();
    line = line.extended(c.p, c.q, w);
  }
  return line;
}

}  // namespace test_support
