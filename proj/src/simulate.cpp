#include "treespace/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "treespace/rng.hpp"

namespace treespace {

namespace {

void check_pair(const Tree& base, Split p1, Split p2) {
  if (!(base.length(p1) > 0.0))
    fail(ErrorCategory::validation, "t1 split is not present in the base tree");
  Topology t = base.topology();
  std::vector<Split> moves = xnni_replacements(t, p1, *base.taxa());
  if (!std::binary_search(moves.begin(), moves.end(), p2))
    fail(ErrorCategory::validation,
         "t2 split is not an XNNI replacement of the t1 split");
}

Tree swap_split(const Tree& base, Split from, Split to) {
  const uint64_t full = base.full_mask();
  std::vector<std::pair<Split, double>> lengths;
  for (const SplitLen& e : base.entries()) {
    Split p = Split::from_side(e.mask, full);
    lengths.emplace_back(p == from ? to : p, e.len);
  }
  return Tree(base.taxa(), std::move(lengths));
}

Tree jitter(const Tree& tree, double sigma, Rng& rng) {
  if (sigma <= 0.0) return tree;
  const uint64_t full = tree.full_mask();
  std::vector<std::pair<Split, double>> lengths;
  for (const SplitLen& e : tree.entries())
    lengths.emplace_back(Split::from_side(e.mask, full),
                         e.len * std::exp(sigma * rng.normal()));
  return Tree(tree.taxa(), std::move(lengths));
}

void check_spec(const MixtureSpec& spec) {
  if (spec.n <= 0) fail(ErrorCategory::validation, "sample size must be positive");
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0))
    fail(ErrorCategory::validation, "theta must be in [0,1]");
  if (spec.jitter_sigma < 0.0)
    fail(ErrorCategory::validation, "jitter sigma must be non-negative");
  check_pair(spec.base, spec.t1_split, spec.t2_split);
}

}  // namespace

MixtureSample simulate_mixture(const MixtureSpec& spec) {
  check_spec(spec);
  if (spec.second_pair)
    fail(ErrorCategory::validation,
         "second pair given; use simulate_correlated");
  Rng root(spec.seed);
  MixtureSample out;
  out.trees.reserve(spec.n);
  out.indicator1.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    Rng rng = root.stream(i);
    bool keep_t1 = rng.uniform() < spec.theta;
    Tree t = keep_t1 ? spec.base
                     : swap_split(spec.base, spec.t1_split, spec.t2_split);
    out.trees.push_back(jitter(t, spec.jitter_sigma, rng));
    out.indicator1.push_back(keep_t1 ? 1 : 0);
  }
  return out;
}

MixtureSample simulate_correlated(const MixtureSpec& spec) {
  check_spec(spec);
  if (!spec.second_pair || !spec.rho)
    fail(ErrorCategory::validation, "correlated mixture needs second_pair and rho");
  auto [p1b, p2b] = *spec.second_pair;
  check_pair(spec.base, p1b, p2b);
  // the two exchanges must act on disjoint parts of the tree: all four
  // topology variants have to be valid
  for (bool first_swapped : {false, true})
    for (bool second_swapped : {false, true}) {
      Tree t = spec.base;
      if (first_swapped) t = swap_split(t, spec.t1_split, spec.t2_split);
      if (second_swapped) t = swap_split(t, p1b, p2b);  // throws if incompatible
    }

  const double r = copula_latent_correlation(spec.theta, *spec.rho);
  const double z = normal_quantile(spec.theta);

  Rng root(spec.seed);
  MixtureSample out;
  for (int i = 0; i < spec.n; ++i) {
    Rng rng = root.stream(i);
    double g1 = rng.normal();
    double g2 = rng.normal();
    double z1 = g1;
    double z2 = r * g1 + std::sqrt(std::max(0.0, 1.0 - r * r)) * g2;
    if (r >= 1.0) z2 = z1;
    if (r <= -1.0) z2 = -z1;
    bool keep1 = z1 <= z;
    bool keep2 = z2 <= z;
    Tree t = spec.base;
    if (!keep1) t = swap_split(t, spec.t1_split, spec.t2_split);
    if (!keep2) t = swap_split(t, p1b, p2b);
    out.trees.push_back(jitter(t, spec.jitter_sigma, rng));
    out.indicator1.push_back(keep1 ? 1 : 0);
    out.indicator2.push_back(keep2 ? 1 : 0);
  }
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorCategory::validation, "quantile argument must be in (0,1)");
  // bisection then Newton polish, plenty for the copula solve
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    double f = normal_cdf(x) - p;
    double d = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (d > 0.0) x -= f / d;
  }
  return x;
}

namespace {

// P(Z1 <= z, Z2 <= z) for standard bivariate normal with correlation r,
// by adaptive Simpson over the first coordinate.
double bivariate_orthant(double z, double r) {
  if (r >= 1.0) return normal_cdf(z);
  if (r <= -1.0) return std::max(0.0, 2.0 * normal_cdf(z) - 1.0);
  const double denom = std::sqrt(1.0 - r * r);
  auto f = [&](double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI) *
           normal_cdf((z - r * u) / denom);
  };
  // fixed-node Simpson on [-9, z]; the integrand is smooth and tiny at the
  // left end, 4k nodes give ~1e-12 here
  const double a = -9.0, b = z;
  if (b <= a) return 0.0;
  const int n = 4096;
  const double h = (b - a) / n;
  double total = f(a) + f(b);
  for (int i = 1; i < n; ++i) total += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return total * h / 3.0;
}

}  // namespace

double copula_latent_correlation(double theta, double rho) {
  if (!(theta > 0.0 && theta < 1.0))
    fail(ErrorCategory::validation, "theta must be strictly inside (0,1)");
  if (!(rho >= -1.0 && rho <= 1.0))
    fail(ErrorCategory::validation, "rho must be in [-1,1]");
  const double z = normal_quantile(theta);
  const double var = theta * (1.0 - theta);
  auto indicator_corr = [&](double r) {
    return (bivariate_orthant(z, r) - theta * theta) / var;
  };
  const double lo_c = indicator_corr(-1.0), hi_c = indicator_corr(1.0);
  const double tol = 1e-9;
  if (rho < lo_c - tol || rho > hi_c + tol)
    fail(ErrorCategory::infeasible,
         "requested correlation infeasible for Bernoulli margins");
  if (rho >= hi_c) return 1.0;
  if (rho <= lo_c) return -1.0;
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (indicator_corr(mid) < rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace treespace
