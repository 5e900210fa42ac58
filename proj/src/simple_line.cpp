#include "treespace/simple_line.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treespace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Breakpoints closer than this (relative) are treated as coincident.
constexpr double kTieTol = 1e-12;

bool same_break(double a, double b) {
  return std::abs(a - b) <= kTieTol * std::max({1.0, std::abs(a), std::abs(b)});
}

double break_of(double lambda0, double w) {
  return lambda0 == 0.0 ? 0.0 : -lambda0 / w;
}

}  // namespace

SimpleLine::SimpleLine(Tree midpoint) : midpoint_(std::move(midpoint)) {
  finalize();
}

SimpleLine::SimpleLine(Tree midpoint, std::vector<SplitPair> pairs)
    : midpoint_(std::move(midpoint)), pairs_(std::move(pairs)) {
  finalize();
}

double SimpleLine::interval_lower(int i) const {
  return i <= 0 ? -kInf : pairs_[i - 1].s_break;
}

double SimpleLine::interval_upper(int i) const {
  return i >= num_pairs() ? kInf : pairs_[i].s_break;
}

void SimpleLine::finalize() {
  const uint64_t full = midpoint_.full_mask();
  const TaxonSet& taxa = *midpoint_.taxa();
  const Topology t0 = midpoint_.topology();

  for (SplitPair& pr : pairs_) {
    if (pr.weight == 0.0)
      fail(ErrorCategory::validation, "zero weight on a line pair");
    if (!pr.p.valid() || !pr.p_prime.valid() || pr.p == pr.p_prime)
      fail(ErrorCategory::validation, "invalid split pair on line");
    if (pr.p.is_terminal(full) || pr.p_prime.is_terminal(full))
      fail(ErrorCategory::validation, "terminal split on a line pair");
    if (!compatible_with(pr.p, t0, full))
      fail(ErrorCategory::validation,
           "pair split incompatible with the midpoint topology");
    pr.s_break = break_of(midpoint_.length(pr.p), pr.weight);
  }

  std::sort(pairs_.begin(), pairs_.end(), [](const SplitPair& a, const SplitPair& b) {
    if (a.s_break != b.s_break) return a.s_break < b.s_break;
    if (a.p != b.p) return a.p < b.p;
    return a.p_prime < b.p_prime;
  });

  speed_ = 0.0;
  for (const SplitPair& pr : pairs_) speed_ += pr.weight * pr.weight;
  speed_ = std::sqrt(speed_);

  // all involved splits distinct
  {
    std::vector<Split> seen;
    for (const SplitPair& pr : pairs_) {
      seen.push_back(pr.p);
      seen.push_back(pr.p_prime);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      fail(ErrorCategory::validation, "split reused across line pairs");
  }

  // evaluation slots: constant midpoint coordinates plus the moving pairs
  slots_.clear();
  for (const SplitLen& e : midpoint_.entries()) {
    Split p = Split::from_side(e.mask, full);
    bool moving = false;
    for (const SplitPair& pr : pairs_)
      if (pr.p == p) {
        moving = true;
        break;
      }
    if (!moving) slots_.push_back({e.mask, e.len, 0.0, 0});
  }
  for (const SplitPair& pr : pairs_) {
    double l0 = midpoint_.length(pr.p);
    slots_.push_back({pr.p.mask(), l0, pr.weight, 1});
    slots_.push_back({pr.p_prime.mask(), l0, pr.weight, 2});
  }
  std::sort(slots_.begin(), slots_.end(),
            [](const Slot& a, const Slot& b) { return a.mask < b.mask; });

  // interval topologies t_0..t_k (internal splits only)
  const int k = num_pairs();
  topologies_.clear();
  topologies_.reserve(k + 1);
  std::vector<Split> constant;
  for (const Slot& s : slots_)
    if (s.kind == 0 && !Split::from_side(s.mask, full).is_terminal(full))
      constant.push_back(Split::from_side(s.mask, full));
  for (int j = 0; j <= k; ++j) {
    std::vector<Split> splits = constant;
    for (int r = 0; r < k; ++r) {
      const SplitPair& pr = pairs_[r];
      bool p_active = pr.weight > 0.0 ? (r < j) : (r >= j);
      splits.push_back(p_active ? pr.p : pr.p_prime);
    }
    // an empty interval between coincident breakpoints carries no tree;
    // validate only intervals of positive width
    bool empty_interval =
        j >= 1 && j <= k - 1 && same_break(pairs_[j - 1].s_break, pairs_[j].s_break);
    if (empty_interval) {
      topologies_.push_back(Topology());
      continue;
    }
    try {
      topologies_.push_back(Topology(std::move(splits), taxa));
    } catch (const Error& e) {
      fail(ErrorCategory::validation,
           std::string("invalid line: interval topology ") + std::to_string(j) +
               ": " + e.what());
    }
  }

  // XNNI relation at each breakpoint: in the tree at s_break (where both p
  // and p' vanish, along with any pair tied at the same breakpoint).
  for (int r = 0; r < k; ++r) {
    const SplitPair& pr = pairs_[r];
    std::vector<Split> present;
    for (const Split& q : constant) present.push_back(q);
    for (int r2 = 0; r2 < k; ++r2) {
      if (r2 == r || same_break(pairs_[r2].s_break, pr.s_break)) continue;
      bool p_active = pairs_[r2].weight > 0.0 ? (pairs_[r2].s_break < pr.s_break)
                                              : (pairs_[r2].s_break > pr.s_break);
      present.push_back(p_active ? pairs_[r2].p : pairs_[r2].p_prime);
    }
    Topology u(std::move(present), taxa);
    if (!compatible_with(pr.p, u, full))
      fail(ErrorCategory::validation, "pair split incompatible at its breakpoint");
    std::vector<Split> moves = xnni_replacements(u, pr.p, taxa);
    if (!std::binary_search(moves.begin(), moves.end(), pr.p_prime))
      fail(ErrorCategory::validation,
           "pair splits are not related by XNNI at the breakpoint");
  }
}

void SimpleLine::evaluate_into(double s, std::vector<SplitLen>& out) const {
  out.clear();
  out.reserve(slots_.size());
  for (const Slot& slot : slots_) {
    double len;
    if (slot.kind == 0) {
      len = slot.base;
    } else {
      double v = slot.base + s * slot.weight;
      len = slot.kind == 1 ? v : -v;
    }
    if (len > 0.0) out.push_back({slot.mask, len});
  }
}

Tree SimpleLine::evaluate(double s) const {
  std::vector<SplitLen> entries;
  evaluate_into(s, entries);
  const uint64_t full = midpoint_.full_mask();
  std::vector<std::pair<Split, double>> lengths;
  lengths.reserve(entries.size());
  for (const SplitLen& e : entries)
    lengths.emplace_back(Split::from_side(e.mask, full), e.len);
  return Tree(midpoint_.taxa(), std::move(lengths));
}

SimpleLine SimpleLine::extended(Split p, Split p_prime, double weight) const {
  std::vector<SplitPair> pairs = pairs_;
  pairs.push_back({p, p_prime, weight, 0.0});
  return SimpleLine(midpoint_, std::move(pairs));
}

SimpleLine SimpleLine::without_pair(int index) const {
  std::vector<SplitPair> pairs = pairs_;
  pairs.erase(pairs.begin() + index);
  return SimpleLine(midpoint_, std::move(pairs));
}

SimpleLine SimpleLine::back_transformed(const ScaleMap& scales,
                                        const Tree& unscaled_midpoint) const {
  std::vector<SplitPair> pairs = pairs_;
  for (SplitPair& pr : pairs) {
    pr.weight *= scales.factor(pr.p);
    pr.s_break = 0.0;  // recomputed against the new midpoint
  }
  return SimpleLine(unscaled_midpoint, std::move(pairs));
}

namespace {

std::optional<WeightInterval> extension_interval(const SimpleLine& line,
                                                 Split p, Split p_prime,
                                                 int interval_index, int w_sign,
                                                 bool throwing) {
  const Tree& x0 = line.midpoint();
  const uint64_t full = x0.full_mask();
  const TaxonSet& taxa = *x0.taxa();
  const int k = line.num_pairs();

  auto reject = [&](const char* msg) -> std::optional<WeightInterval> {
    if (throwing) fail(ErrorCategory::validation, msg);
    return std::nullopt;
  };

  if (interval_index < 0 || interval_index > k)
    return reject("interval index out of range");
  if (w_sign != 1 && w_sign != -1) return reject("weight sign must be +1 or -1");
  if (p.is_terminal(full) || p_prime.is_terminal(full))
    return reject("terminal splits cannot form a line pair");

  const Topology t0 = x0.topology();
  if (!compatible_with(p, t0, full))
    return reject("split is incompatible with the midpoint topology");

  // splits already used by the line are not available
  for (const SplitPair& pr : line.pairs())
    if (pr.p == p || pr.p_prime == p || pr.p == p_prime || pr.p_prime == p_prime)
      return reject("split already used by the line");

  const double lo_s = line.interval_lower(interval_index);
  const double hi_s = line.interval_upper(interval_index);
  if (std::isfinite(lo_s) && std::isfinite(hi_s) && same_break(lo_s, hi_s))
    return std::nullopt;  // zero-width interval between tied breakpoints
  const double lambda0 = x0.length(p);

  // XNNI relation at the candidate's breakpoint tree. For lambda0 > 0 the
  // breakpoint is generic inside the interval, so the interval topology
  // applies; a lambda0 = 0 candidate breaks exactly at s = 0 and any pair
  // tied there has both of its splits at zero length too.
  {
    const Topology& ti = line.interval_topologies()[interval_index];
    Topology u = ti.without(p);
    if (x0.length(p) == 0.0) {
      for (const SplitPair& pr : line.pairs())
        if (same_break(pr.s_break, 0.0)) {
          u = u.without(pr.p);
          u = u.without(pr.p_prime);
        }
    }
    if (!compatible_with(p, u, full))
      return reject("split is incompatible with the target interval");
    std::vector<Split> moves = xnni_replacements(u, p, taxa);
    if (!std::binary_search(moves.begin(), moves.end(), p_prime))
      return reject("splits are not related by XNNI on the target interval");
  }

  // Geometric constraint: the breakpoint -lambda0(p)/w must land in [lo_s, hi_s].
  WeightInterval range{};
  if (lambda0 == 0.0) {
    if (!(lo_s <= 0.0 && 0.0 <= hi_s)) return std::nullopt;
    range = w_sign > 0 ? WeightInterval{0.0, kInf} : WeightInterval{-kInf, 0.0};
  } else if (w_sign < 0) {
    // s_break = lambda0/|w| > 0, decreasing in |w|
    if (!(hi_s > 0.0)) return std::nullopt;
    double mag_lo = std::isinf(hi_s) ? 0.0 : lambda0 / hi_s;
    double mag_hi = lo_s > 0.0 ? lambda0 / lo_s : kInf;
    if (mag_lo > mag_hi) return std::nullopt;
    range = {-mag_hi, -mag_lo};
  } else {
    // s_break < 0, increasing in w
    if (!(lo_s < 0.0)) return std::nullopt;
    double w_lo = std::isinf(lo_s) ? 0.0 : lambda0 / (-lo_s);
    double w_hi = hi_s < 0.0 ? lambda0 / (-hi_s) : kInf;
    if (w_lo > w_hi) return std::nullopt;
    range = {w_lo, w_hi};
  }

  // Topological constraints along the whole line.
  const auto& tops = line.interval_topologies();
  auto p_ok = [&](int j) { return compatible_with(p, tops[j], full); };
  auto pp_ok = [&](int j) {
    return compatible_with(p_prime, tops[j].without(p), full);
  };
  if (w_sign < 0) {
    for (int j = 0; j <= interval_index; ++j)
      if (!p_ok(j)) return std::nullopt;
    for (int j = interval_index; j <= k; ++j)
      if (!pp_ok(j)) return std::nullopt;
  } else {
    for (int j = 0; j <= interval_index; ++j)
      if (!pp_ok(j)) return std::nullopt;
    for (int j = interval_index; j <= k; ++j)
      if (!p_ok(j)) return std::nullopt;
  }
  return range;
}

}  // namespace

std::optional<WeightInterval> validate_extension(const SimpleLine& line,
                                                 Split p, Split p_prime,
                                                 int interval_index, int w_sign) {
  return extension_interval(line, p, p_prime, interval_index, w_sign, true);
}

std::optional<WeightInterval> try_extension(const SimpleLine& line, Split p,
                                            Split p_prime, int interval_index,
                                            int w_sign) {
  try {
    return extension_interval(line, p, p_prime, interval_index, w_sign, false);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace treespace
