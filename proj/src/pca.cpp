#include "treespace/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treespace/parallel.hpp"
#include "treespace/rng.hpp"

namespace treespace {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

bool better(Objective obj, double a, double b) {
  return obj == Objective::f_parallel ? a > b : a < b;
}

double worst_score(Objective obj) {
  return obj == Objective::f_parallel ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::infinity();
}

double objective_of(Objective obj, const SquaredSums& sums) {
  return obj == Objective::f_parallel ? sums.d2_par : sums.d2_perp;
}

double default_weight_cap(std::span<const Tree> data, const Tree& x0) {
  double max_len = 0.0;
  for (const Tree& t : data)
    for (const SplitLen& e : t.entries()) max_len = std::max(max_len, e.len);
  double min_internal = std::numeric_limits<double>::infinity();
  const uint64_t full = x0.full_mask();
  for (const SplitLen& e : x0.entries())
    if (!Split::from_side(e.mask, full).is_terminal(full))
      min_internal = std::min(min_internal, e.len);
  if (!std::isfinite(min_internal)) min_internal = 1.0;  // star midpoint
  double cap = 10.0 * max_len / min_internal;
  return cap > 0.0 ? cap : 1.0;
}

// Clip a feasible interval to the searchable range: |w| in [1e-9, 1] * cap.
std::optional<WeightInterval> clip_range(WeightInterval r, double cap) {
  const double eps = 1e-9 * cap;
  double lo, hi;
  if (r.hi <= 0.0) {
    lo = std::max(r.lo, -cap);
    hi = std::min(r.hi, -eps);
  } else {
    lo = std::max(r.lo, eps);
    hi = std::min(r.hi, cap);
  }
  if (!(lo <= hi)) return std::nullopt;
  return WeightInterval{lo, hi};
}

struct Scorer {
  std::span<const Tree> data;
  Objective objective;
  ProjectOptions popts;
  bool parallel_over_trees;

  double operator()(const SimpleLine& line) const {
    std::vector<Projection> proj = parallel_over_trees
                                       ? project_all(data, line, popts)
                                       : project_all_serial(data, line, popts);
    SquaredSums sums;
    for (const Projection& p : proj) {
      sums.d2_par += p.d_par * p.d_par;
      sums.d2_perp += p.d_perp * p.d_perp;
    }
    return objective_of(objective, sums);
  }
};

WeightSearch golden_weight(const SimpleLine& line, Split p, Split p_prime,
                           WeightInterval range, const Scorer& scorer) {
  auto score_at = [&](double w) {
    try {
      return scorer(line.extended(p, p_prime, w));
    } catch (const Error&) {
      return worst_score(scorer.objective);
    }
  };
  double a = range.lo, b = range.hi;
  WeightSearch best{a, worst_score(scorer.objective)};
  auto consider = [&](double w, double s) {
    if (better(scorer.objective, s, best.score)) best = {w, s};
  };
  if (b - a <= 0.0) {
    double s = score_at(a);
    consider(a, s);
    return best;
  }
  const double tol = 1e-4 * (b - a) + 1e-12;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = score_at(c), fd = score_at(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (better(scorer.objective, fc, fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = score_at(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = score_at(d);
      consider(d, fd);
    }
  }
  // the optimum may sit at a range endpoint golden never probes exactly
  consider(range.lo, score_at(range.lo));
  consider(range.hi, score_at(range.hi));
  return best;
}

void check_search_inputs(std::span<const Tree> data, const Tree& x0) {
  if (data.empty()) fail(ErrorCategory::degenerate, "empty tree collection");
  for (const Tree& t : data) require_same_taxa(*t.taxa(), *x0.taxa());
}

PcaResult assemble_result(SimpleLine line, std::span<const Tree> data,
                          const Tree& x0, const ProjectOptions& popts) {
  PcaResult result{std::move(line), {}, {}, 0.0, 0.0, 0.0, 0.0, {}};
  result.projections = project_all(data, result.line, popts);
  for (const Projection& p : result.projections) {
    result.d2_par += p.d_par * p.d_par;
    result.d2_perp += p.d_perp * p.d_perp;
  }
  result.d2_0 = total_squared_distance(x0, data);
  // the per-point CAT(0) inequality bounds d2_par by d2_0; anything above 1
  // is golden-section rounding noise
  result.proportion = result.d2_0 > 0.0
                          ? std::min(1.0, result.d2_par / result.d2_0)
                          : std::numeric_limits<double>::quiet_NaN();
  double norm = 0.0;
  for (const SplitPair& pr : result.line.pairs())
    norm += pr.weight * pr.weight;
  norm = std::sqrt(norm);
  for (const SplitPair& pr : result.line.pairs())
    result.normalized_weights.push_back(norm > 0.0 ? pr.weight / norm : 0.0);
  return result;
}

struct Candidate {
  Split p, p_prime;
  int interval;
  int sign;
  WeightInterval range;
};

std::vector<Candidate> enumerate_candidates(const SimpleLine& line,
                                            std::span<const Split> feasible,
                                            std::span<const char> used,
                                            double cap, uint64_t full) {
  const Topology t0 = line.midpoint().topology();
  std::vector<Candidate> out;
  for (size_t ip = 0; ip < feasible.size(); ++ip) {
    if (used[ip]) continue;
    Split p = feasible[ip];
    if (!compatible_with(p, t0, full)) continue;
    for (size_t iq = 0; iq < feasible.size(); ++iq) {
      if (used[iq] || iq == ip) continue;
      Split q = feasible[iq];
      if (compatible(p, q, full)) continue;  // a replacement must conflict
      for (int i = 0; i <= line.num_pairs(); ++i) {
        for (int sign : {-1, +1}) {
          auto range = try_extension(line, p, q, i, sign);
          if (!range) continue;
          auto clipped = clip_range(*range, cap);
          if (!clipped) continue;
          out.push_back({p, q, i, sign, *clipped});
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Split> feasible_splits(std::span<const Tree> data) {
  if (data.empty()) fail(ErrorCategory::degenerate, "empty tree collection");
  for (const Tree& t : data) require_same_taxa(*t.taxa(), *data[0].taxa());
  std::vector<Split> out;
  for (const Tree& t : data)
    for (const Split& p : t.internal_splits()) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WeightSearch optimize_weight(const SimpleLine& line, Split p, Split p_prime,
                             int interval, WeightInterval range,
                             std::span<const Tree> data, Objective objective,
                             const PcaConfig& cfg) {
  (void)interval;
  double cap = cfg.weight_cap > 0.0 ? cfg.weight_cap
                                    : default_weight_cap(data, line.midpoint());
  auto clipped = clip_range(range, cap);
  if (!clipped)
    fail(ErrorCategory::infeasible, "weight range is empty after clipping");
  Scorer scorer{data, objective, ProjectOptions{cfg.golden_tol, -1.0}, true};
  return golden_weight(line, p, p_prime, *clipped, scorer);
}

PcaResult greedy_search(std::span<const Tree> data, const Tree& x0,
                        const PcaConfig& cfg) {
  check_search_inputs(data, x0);
  const uint64_t full = x0.full_mask();
  const int max_pairs = x0.num_taxa() - 3;
  const double cap = cfg.weight_cap > 0.0 ? cfg.weight_cap
                                          : default_weight_cap(data, x0);
  const ProjectOptions popts{cfg.golden_tol, -1.0};

  std::vector<Split> feasible = feasible_splits(data);
  std::vector<char> used(feasible.size(), 0);

  SimpleLine line(x0);
  const double d2_0 = total_squared_distance(x0, data);
  const double min_gain = 1e-10 * d2_0;
  double current =
      cfg.objective == Objective::f_parallel ? 0.0 : d2_0;

  for (int round = 0; round < max_pairs; ++round) {
    std::vector<Candidate> cands =
        enumerate_candidates(line, feasible, used, cap, full);
    if (cands.empty()) break;

    // independent scoring of every candidate; deterministic reduction below
    std::vector<WeightSearch> results(cands.size());
    Scorer scorer{data, cfg.objective, popts, /*parallel_over_trees=*/false};
    parallel_for(static_cast<int>(cands.size()), true, [&](int ci) {
      const Candidate& c = cands[ci];
      results[ci] = golden_weight(line, c.p, c.p_prime, c.range, scorer);
    });

    int best = -1;
    for (int ci = 0; ci < static_cast<int>(cands.size()); ++ci)
      if (best < 0 || better(cfg.objective, results[ci].score, results[best].score))
        best = ci;

    double gain = cfg.objective == Objective::f_parallel
                      ? results[best].score - current
                      : current - results[best].score;
    if (!(gain > min_gain)) break;

    const Candidate& c = cands[best];
    line = line.extended(c.p, c.p_prime, results[best].weight);
    current = results[best].score;
    for (size_t i = 0; i < feasible.size(); ++i)
      if (feasible[i] == c.p || feasible[i] == c.p_prime) used[i] = 1;
  }
  return assemble_result(std::move(line), data, x0, popts);
}

PcaResult anneal_search(std::span<const Tree> data, const Tree& x0,
                        const PcaConfig& cfg) {
  check_search_inputs(data, x0);
  const uint64_t full = x0.full_mask();
  const double m_minus_3 = x0.num_taxa() - 3.0;
  const double cap = cfg.weight_cap > 0.0 ? cfg.weight_cap
                                          : default_weight_cap(data, x0);
  const ProjectOptions popts{cfg.golden_tol, -1.0};
  const Topology t0 = x0.topology();

  std::vector<Split> feasible = feasible_splits(data);
  std::vector<char> used(feasible.size(), 0);

  Scorer scorer{data, cfg.objective, popts, /*parallel_over_trees=*/true};
  const double d2_0 = total_squared_distance(x0, data);

  SimpleLine state(x0);
  double f_state = cfg.objective == Objective::f_parallel ? 0.0 : d2_0;
  SimpleLine best_line = state;
  double f_best = f_state;

  Rng rng(cfg.seed);
  double tau = cfg.annealing.tau0;

  auto accepts = [&](double f_new) {
    if (better(cfg.objective, f_new, f_state)) return true;
    double delta = std::abs(f_new - f_state);
    double bound = cfg.objective == Objective::f_perpendicular
                       ? d2_0
                       : std::max(f_state, 1e-6 * d2_0);
    if (bound <= 0.0) return false;
    double base = 1.0 - delta / bound;
    if (base <= 0.0) return false;
    return rng.uniform() < std::pow(base, 1.0 / tau);
  };

  for (int it = 0; it < cfg.annealing.iterations; ++it) {
    const int k = state.num_pairs();
    const double pb =
        std::max(cfg.annealing.birth_floor, 1.0 - k / m_minus_3);
    bool birth = rng.uniform() < pb;

    if (birth) {
      std::vector<int> avail;
      for (size_t i = 0; i < feasible.size(); ++i)
        if (!used[i]) avail.push_back(static_cast<int>(i));
      if (!avail.empty()) {
        Split p = feasible[avail[rng.uniform_int(static_cast<int>(avail.size()))]];
        if (compatible_with(p, t0, full)) {
          // feasible replacement moves for the chosen p
          struct Move {
            Split q;
            int interval;
            int sign;
            WeightInterval range;
          };
          std::vector<Move> moves;
          std::vector<Split> qs;
          for (size_t iq = 0; iq < feasible.size(); ++iq) {
            if (used[iq] || feasible[iq] == p) continue;
            Split q = feasible[iq];
            if (compatible(p, q, full)) continue;
            for (int i = 0; i <= k; ++i)
              for (int sign : {-1, +1}) {
                auto range = try_extension(state, p, q, i, sign);
                if (!range) continue;
                auto clipped = clip_range(*range, cap);
                if (!clipped) continue;
                moves.push_back({q, i, sign, *clipped});
                qs.push_back(q);
              }
          }
          if (!moves.empty()) {
            std::sort(qs.begin(), qs.end());
            qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
            Split q = qs[rng.uniform_int(static_cast<int>(qs.size()))];
            std::vector<int> withq;
            for (int mi = 0; mi < static_cast<int>(moves.size()); ++mi)
              if (moves[mi].q == q) withq.push_back(mi);
            const Move& mv =
                moves[withq[rng.uniform_int(static_cast<int>(withq.size()))]];
            WeightSearch ws = golden_weight(state, p, mv.q, mv.range, scorer);
            if (std::isfinite(ws.score) && accepts(ws.score)) {
              state = state.extended(p, mv.q, ws.weight);
              f_state = ws.score;
              for (size_t i = 0; i < feasible.size(); ++i)
                if (feasible[i] == p || feasible[i] == mv.q) used[i] = 1;
            }
          }
        }
      }
    } else if (k > 0) {
      // death: drop the pair at one end of the line
      int pick = k == 1 ? 0 : (rng.bernoulli(0.5) ? 0 : k - 1);
      try {
        SimpleLine proposed = state.without_pair(pick);
        double f_new = scorer(proposed);
        if (accepts(f_new)) {
          Split p = state.pairs()[pick].p;
          Split q = state.pairs()[pick].p_prime;
          state = std::move(proposed);
          f_state = f_new;
          for (size_t i = 0; i < feasible.size(); ++i)
            if (feasible[i] == p || feasible[i] == q) used[i] = 0;
        }
      } catch (const Error&) {
        // removal made the line invalid; treat as a rejected proposal
      }
    }

    if (better(cfg.objective, f_state, f_best)) {
      f_best = f_state;
      best_line = state;
    }
    tau *= cfg.annealing.decay;
  }
  return assemble_result(std::move(best_line), data, x0, popts);
}

double proportion_of_variance(const PcaResult& result) {
  if (!(result.d2_0 > 0.0))
    fail(ErrorCategory::degenerate,
         "all trees coincide with the midpoint (d2_0 = 0)");
  return std::min(1.0, result.d2_par / result.d2_0);
}

}  // namespace treespace
