#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "treespace/simulate.hpp"

using namespace test_support;

namespace {

// balanced 8-taxon tree with two independent exchange regions
ts::Tree balanced8(const ts::TaxonSetPtr& taxa) {
  return tree_from_splits(taxa, {{"A,B", 1.0},
                                 {"C,D", 0.8},
                                 {"A,B,C,D", 0.9},
                                 {"E,F", 0.6},
                                 {"G,H", 0.7}});
}

}  // namespace

TEST_CASE("simulate_mixture") {
  auto taxa = letters(8);
  ts::Tree base = balanced8(taxa);
  ts::MixtureSpec spec{base,
                       split(taxa, "A,B"),
                       split(taxa, "B,C,D"),
                       1.0,
                       0.0,
                       20,
                       1,
                       std::nullopt,
                       std::nullopt};

  SUBCASE("theta = 1 with no jitter copies the base") {
    ts::MixtureSample s = ts::simulate_mixture(spec);
    REQUIRE(s.trees.size() == 20);
    for (const ts::Tree& t : s.trees) CHECK(t == base);
    for (int ind : s.indicator1) CHECK(ind == 1);
  }
  SUBCASE("theta = 0 swaps the split everywhere, keeping its length") {
    spec.theta = 0.0;
    ts::MixtureSample s = ts::simulate_mixture(spec);
    for (const ts::Tree& t : s.trees) {
      CHECK_FALSE(t.contains(split(taxa, "A,B")));
      CHECK(t.length(split(taxa, "B,C,D")) == doctest::Approx(1.0));
    }
  }
  SUBCASE("theta = 0.5 concentrates near half") {
    spec.theta = 0.5;
    spec.n = 1000;
    ts::MixtureSample s = ts::simulate_mixture(spec);
    double freq = 0.0;
    for (int ind : s.indicator1) freq += ind;
    freq /= spec.n;
    CHECK(freq >= 0.45);
    CHECK(freq <= 0.55);
  }
  SUBCASE("jitter keeps trees valid and is reproducible") {
    spec.jitter_sigma = 0.2;
    spec.theta = 0.5;
    spec.n = 50;
    ts::MixtureSample a = ts::simulate_mixture(spec);
    ts::MixtureSample b = ts::simulate_mixture(spec);
    REQUIRE(a.trees.size() == b.trees.size());
    for (size_t i = 0; i < a.trees.size(); ++i) CHECK(a.trees[i] == b.trees[i]);
    // at most two distinct topologies even with jitter
    for (const ts::Tree& t : a.trees) {
      bool t1 = t.contains(split(taxa, "A,B"));
      bool t2 = t.contains(split(taxa, "B,C,D"));
      CHECK(t1 != t2);
    }
  }
  SUBCASE("bad specs are rejected") {
    spec.t1_split = split(taxa, "A,C");  // absent from the base tree
    CHECK_THROWS_AS(ts::simulate_mixture(spec), ts::Error);
    spec.t1_split = split(taxa, "A,B");
    spec.t2_split = split(taxa, "E,F");  // not an XNNI replacement
    CHECK_THROWS_AS(ts::simulate_mixture(spec), ts::Error);
  }
}

TEST_CASE("simulate_correlated") {
  auto taxa = letters(8);
  ts::Tree base = balanced8(taxa);
  ts::MixtureSpec spec{base,
                       split(taxa, "A,B"),
                       split(taxa, "B,C,D"),
                       0.5,
                       0.0,
                       1000,
                       11,
                       std::pair<ts::Split, ts::Split>{split(taxa, "E,F"),
                                                       split(taxa, "F,G,H")},
                       0.9};

  auto sample_corr = [](const ts::MixtureSample& s) {
    double n = static_cast<double>(s.indicator1.size());
    double m1 = 0.0, m2 = 0.0, cov = 0.0, v1 = 0.0, v2 = 0.0;
    for (size_t i = 0; i < s.indicator1.size(); ++i) {
      m1 += s.indicator1[i];
      m2 += s.indicator2[i];
    }
    m1 /= n;
    m2 /= n;
    for (size_t i = 0; i < s.indicator1.size(); ++i) {
      cov += (s.indicator1[i] - m1) * (s.indicator2[i] - m2);
      v1 += (s.indicator1[i] - m1) * (s.indicator1[i] - m1);
      v2 += (s.indicator2[i] - m2) * (s.indicator2[i] - m2);
    }
    return cov / std::sqrt(v1 * v2);
  };

  SUBCASE("rho = 1 makes the indicators agree") {
    spec.rho = 1.0;
    spec.n = 200;
    ts::MixtureSample s = ts::simulate_correlated(spec);
    for (size_t i = 0; i < s.indicator1.size(); ++i)
      CHECK(s.indicator1[i] == s.indicator2[i]);
  }
  SUBCASE("rho = 0 gives near-zero sample correlation") {
    spec.rho = 0.0;
    spec.n = 2000;
    ts::MixtureSample s = ts::simulate_correlated(spec);
    CHECK(std::abs(sample_corr(s)) <= 0.07);
  }
  SUBCASE("rho = 0.9 lands in [0.8, 0.97]") {
    ts::MixtureSample s = ts::simulate_correlated(spec);
    double r = sample_corr(s);
    CHECK(r >= 0.8);
    CHECK(r <= 0.97);
  }
  SUBCASE("four topology variants appear, all valid") {
    spec.rho = 0.0;
    spec.n = 200;
    ts::MixtureSample s = ts::simulate_correlated(spec);
    int seen[4] = {0, 0, 0, 0};
    for (size_t i = 0; i < s.trees.size(); ++i)
      ++seen[2 * s.indicator1[i] + s.indicator2[i]];
    for (int c : seen) CHECK(c > 0);
  }
  SUBCASE("infeasible margins are rejected") {
    spec.theta = 0.1;
    spec.rho = -0.9;
    CHECK_THROWS_AS(ts::simulate_correlated(spec), ts::Error);
  }
}

TEST_CASE("copula latent correlation endpoints") {
  CHECK(ts::copula_latent_correlation(0.5, 1.0) == doctest::Approx(1.0));
  CHECK(ts::copula_latent_correlation(0.5, -1.0) == doctest::Approx(-1.0));
  CHECK(ts::copula_latent_correlation(0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-6));
  // normal quantile sanity
  CHECK(ts::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ts::normal_cdf(ts::normal_quantile(0.975)) == doctest::Approx(0.975));
}
