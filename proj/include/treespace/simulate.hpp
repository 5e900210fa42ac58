#pragma once

#include <optional>
#include <vector>

#include "treespace/tree.hpp"

namespace treespace {

/// Two-topology mixture generator: each tree adopts t1_split with
/// probability theta, otherwise t2_split replaces it at the same length, and
/// every branch is jittered by an independent log-normal factor. With
/// second_pair/rho set, two such exchanges act on disjoint parts of the tree
/// with correlated topology indicators.
struct MixtureSpec {
  Tree base;
  Split t1_split;  // present in base
  Split t2_split;  // an XNNI replacement of t1_split
  double theta = 0.5;
  double jitter_sigma = 0.0;  // log-normal sigma, 0 disables jitter
  int n = 100;
  uint64_t seed = 0;
  std::optional<std::pair<Split, Split>> second_pair;
  std::optional<double> rho;
};

struct MixtureSample {
  std::vector<Tree> trees;
  /// Per tree: 1 when the (first) pair kept t1_split, else 0.
  std::vector<int> indicator1;
  /// Present only for correlated draws.
  std::vector<int> indicator2;
};

MixtureSample simulate_mixture(const MixtureSpec& spec);
MixtureSample simulate_correlated(const MixtureSpec& spec);

/// Standard normal CDF and quantile (used by the Gaussian copula).
double normal_cdf(double z);
double normal_quantile(double p);

/// Latent Gaussian correlation that produces Bernoulli(theta) indicators
/// with correlation rho under a Gaussian copula; throws when (theta, rho)
/// is infeasible for Bernoulli margins.
double copula_latent_correlation(double theta, double rho);

}  // namespace treespace
