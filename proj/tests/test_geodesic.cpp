#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_unfolding.hpp"
#include "support.hpp"
#include "treespace/geodesic.hpp"

using namespace test_support;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ts::Tree jitter_lengths(const ts::Tree& t, ts::Rng& rng) {
  const uint64_t full = t.full_mask();
  std::vector<std::pair<ts::Split, double>> lengths;
  for (const ts::SplitLen& e : t.entries())
    lengths.emplace_back(ts::Split::from_side(e.mask, full),
                         e.len * (0.5 + rng.uniform()));
  return ts::Tree(t.taxa(), std::move(lengths));
}

}  // namespace

TEST_CASE("same-topology distances are Euclidean") {
  ts::Rng rng(1);
  auto taxa = ts::make_taxa(8);
  for (int rep = 0; rep < 100; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = jitter_lengths(x, rng);
    CHECK(ts::distance(x, y) ==
          doctest::Approx(ts::euclidean_distance(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("identity and simple cone cases") {
  auto taxa = letters(5);
  ts::Tree x = tree_from_splits(taxa, {{"A,B", 1.0}, {"D,E", 3.0}});
  CHECK(ts::distance(x, x) == 0.0);
  CHECK(ts::cone_path_distance(x, x) == 0.0);
  CHECK(ts::geodesic(x, x).support().empty());

  SUBCASE("4 taxa, incompatible single splits pass through the star") {
    auto t4 = letters(4);
    ts::Tree a = tree_from_splits(t4, {{"A,B", 1.0}});
    ts::Tree b = tree_from_splits(t4, {{"A,C", 2.0}});
    CHECK(ts::distance(a, b) == doctest::Approx(3.0));
    CHECK(ts::cone_path_distance(a, b) == doctest::Approx(3.0));
  }
  SUBCASE("disjoint compatible splits are not a cone path") {
    auto t5 = letters(5);
    ts::Tree a = tree_from_splits(t5, {{"A,B", 1.0}});
    ts::Tree b = tree_from_splits(t5, {{"D,E", 2.0}});
    CHECK(ts::distance(a, b) == doctest::Approx(std::sqrt(5.0)));
    CHECK(ts::cone_path_distance(a, b) == doctest::Approx(3.0));
  }
}

TEST_CASE("five-taxon derived example: 4*sqrt(2)") {
  auto taxa = letters(5);
  ts::Tree x = tree_from_splits(taxa, {{"A,B", 1.0}, {"D,E", 3.0}});
  ts::Tree y = tree_from_splits(taxa, {{"A,C", 3.0}, {"B,E", 1.0}});

  const double expected = 4.0 * kSqrt2;
  CHECK(ts::distance(x, y) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ts::oracle::oracle_distance(x, y) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(ts::cone_path_distance(x, y) ==
        doctest::Approx(2.0 * std::sqrt(10.0)).epsilon(1e-12));
  CHECK(expected < 2.0 * std::sqrt(10.0));

  SUBCASE("geodesic path structure") {
    ts::GeodesicPath g = ts::geodesic(x, y);
    CHECK(g.length() == doctest::Approx(expected));
    CHECK(g.support().size() == 2);
    // support validity: non-decreasing leg ratios
    double prev = -1.0;
    for (const ts::SupportLeg& leg : g.support()) {
      double ratio = leg.gain_norm > 0.0
                         ? leg.drop_norm / leg.gain_norm
                         : std::numeric_limits<double>::infinity();
      CHECK(ratio >= prev - 1e-12);
      prev = ratio;
    }
  }
}

TEST_CASE("kernel agrees with the unfolding oracle on random 5-taxon pairs") {
  ts::Rng rng(5);
  auto taxa = ts::make_taxa(5);
  for (int rep = 0; rep < 300; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = ts::random_tree(taxa, rng);
    double got = ts::distance(x, y);
    double want = ts::oracle::oracle_distance(x, y);
    REQUIRE(got == doctest::Approx(want).epsilon(1e-8));
  }
}

namespace {

// Second independent oracle: the geodesic distance is the minimum of
//   sqrt( sum_i (|A_i| + |B_i|)^2 + sum_shared (dlen)^2 )
// over every ordered partition of the two disjoint split sets such that
// (a) splits dropped later are compatible with splits gained earlier and
// (b) the leg ratios |A_i|/|B_i| are non-decreasing (only then does the
// straight-segment path realize the formula). At m = 6 the disjoint sets
// have at most 3 splits each, so enumerating every block labeling is
// exhaustive.
double exhaustive_support_distance(const ts::Tree& x, const ts::Tree& y) {
  const uint64_t full = x.full_mask();
  std::vector<ts::SplitLen> ax, by;
  double common_sq = 0.0;
  for (const ts::SplitLen& e : x.entries()) {
    ts::Split p = ts::Split::from_side(e.mask, full);
    double ly = y.length(p);
    if (ly > 0.0) {
      common_sq += (e.len - ly) * (e.len - ly);
    } else {
      ax.push_back(e);
    }
  }
  for (const ts::SplitLen& e : y.entries())
    if (!x.contains(ts::Split::from_side(e.mask, full))) by.push_back(e);

  const int na = static_cast<int>(ax.size());
  const int nb = static_cast<int>(by.size());
  if (na == 0 && nb == 0) return std::sqrt(common_sq);
  const int K = na + nb;  // enough blocks for every possible support

  std::vector<int> la(na), lb(nb);
  double best = 1e300;
  auto evaluate = [&]() {
    // P1: a split dropped in leg i must be compatible with every split
    // gained in legs j < i
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        if (la[i] > lb[j] &&
            !ts::compatible(ts::Split::from_side(ax[i].mask, full),
                            ts::Split::from_side(by[j].mask, full), full))
          return;
    double total = common_sq;
    double prev_a = 0.0, prev_b = 1.0;  // ratio 0 sentinel
    for (int leg = 0; leg < K; ++leg) {
      double a2 = 0.0, b2 = 0.0;
      for (int i = 0; i < na; ++i)
        if (la[i] == leg) a2 += ax[i].len * ax[i].len;
      for (int j = 0; j < nb; ++j)
        if (lb[j] == leg) b2 += by[j].len * by[j].len;
      if (a2 == 0.0 && b2 == 0.0) continue;
      double a = std::sqrt(a2), b = std::sqrt(b2);
      if (a * prev_b < prev_a * b - 1e-15) return;  // ratios must not decrease
      prev_a = a;
      prev_b = b;
      total += (a + b) * (a + b);
    }
    best = std::min(best, std::sqrt(total));
  };
  // enumerate all K^(na+nb) labelings
  int total_digits = na + nb;
  std::vector<int> digits(total_digits, 0);
  for (;;) {
    for (int i = 0; i < na; ++i) la[i] = digits[i];
    for (int j = 0; j < nb; ++j) lb[j] = digits[na + j];
    evaluate();
    int pos = 0;
    while (pos < total_digits && ++digits[pos] == K) digits[pos++] = 0;
    if (pos == total_digits) break;
  }
  return best;
}

}  // namespace

TEST_CASE("kernel agrees with exhaustive support enumeration at m = 6") {
  ts::Rng rng(71);
  auto taxa = ts::make_taxa(6);
  for (int rep = 0; rep < 40; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = ts::random_tree(taxa, rng);
    double got = ts::distance(x, y);
    double want = exhaustive_support_distance(x, y);
    REQUIRE(got == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("support validity on random pairs") {
  ts::Rng rng(73);
  auto taxa = ts::make_taxa(9);
  for (int rep = 0; rep < 50; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = ts::random_tree(taxa, rng);
    ts::GeodesicPath g = ts::geodesic(x, y);
    // leg ratios non-decreasing; drop/gain sets partition the disjoint sets
    double prev = -1.0;
    size_t drops = 0, gains = 0;
    for (const ts::SupportLeg& leg : g.support()) {
      drops += leg.drop.size();
      gains += leg.gain.size();
      double ratio = leg.gain_norm > 0.0
                         ? leg.drop_norm / leg.gain_norm
                         : std::numeric_limits<double>::infinity();
      CHECK(ratio >= prev - 1e-9 * (1.0 + ratio));
      prev = ratio;
    }
    size_t expect_drops = 0, expect_gains = 0;
    for (const ts::SplitLen& e : x.entries())
      if (!y.contains(ts::Split::from_side(e.mask, taxa->full_mask())))
        ++expect_drops;
    for (const ts::SplitLen& e : y.entries())
      if (!x.contains(ts::Split::from_side(e.mask, taxa->full_mask())))
        ++expect_gains;
    CHECK(drops == expect_drops);
    CHECK(gains == expect_gains);
    // length formula consistency
    double total = 0.0;
    for (const ts::SupportLeg& leg : g.support()) {
      double s = leg.drop_norm + leg.gain_norm;
      total += s * s;
    }
    for (const ts::CarriedSplit& c : g.common_splits())
      total += (c.len_x - c.len_y) * (c.len_x - c.len_y);
    CHECK(std::sqrt(total) == doctest::Approx(g.length()).epsilon(1e-12));
  }
}

TEST_CASE("metric properties on random pairs") {
  ts::Rng rng(17);
  for (int m : {5, 7, 10}) {
    auto taxa = ts::make_taxa(m);
    for (int rep = 0; rep < 60; ++rep) {
      ts::Tree x = ts::random_tree(taxa, rng);
      ts::Tree y = ts::random_tree(taxa, rng);
      double d = ts::distance(x, y);
      double d2 = ts::euclidean_distance(x, y);
      // Euclidean sandwich and the cone-path bound
      CHECK(d >= d2 - 1e-12);
      CHECK(d <= kSqrt2 * d2 + 1e-12);
      CHECK(d <= ts::cone_path_distance(x, y) + 1e-12);
      // exact symmetry
      CHECK(ts::distance(y, x) == d);
    }
  }
}

TEST_CASE("triangle inequality on random triples") {
  ts::Rng rng(23);
  auto taxa = ts::make_taxa(7);
  for (int rep = 0; rep < 100; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = ts::random_tree(taxa, rng);
    ts::Tree z = ts::random_tree(taxa, rng);
    CHECK(ts::distance(x, z) <=
          ts::distance(x, y) + ts::distance(y, z) + 1e-9);
  }
}

TEST_CASE("relabeling invariance is exact") {
  ts::Rng rng(31);
  auto taxa = ts::make_taxa(7);
  // permuted taxon set: reverse the names
  std::vector<std::string> rev(taxa->names().rbegin(), taxa->names().rend());
  auto taxa_rev = std::make_shared<ts::TaxonSet>(rev);
  const uint64_t full = taxa->full_mask();
  auto relabel = [&](const ts::Tree& t) {
    std::vector<std::pair<ts::Split, double>> lengths;
    for (const ts::SplitLen& e : t.entries()) {
      uint64_t side = 0;
      for (int i = 0; i < 7; ++i)
        if (e.mask >> i & 1) side |= uint64_t{1} << (6 - i);
      lengths.emplace_back(ts::Split::from_side(side, full), e.len);
    }
    return ts::Tree(taxa_rev, std::move(lengths));
  };
  for (int rep = 0; rep < 60; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = ts::random_tree(taxa, rng);
    CHECK(ts::distance(relabel(x), relabel(y)) == ts::distance(x, y));
  }
}

TEST_CASE("point_along") {
  auto taxa = letters(5);
  ts::Tree x = tree_from_splits(taxa, {{"A,B", 1.0}, {"D,E", 3.0}});
  ts::Tree y = tree_from_splits(taxa, {{"A,C", 3.0}, {"B,E", 1.0}});
  ts::GeodesicPath g = ts::geodesic(x, y);

  SUBCASE("endpoints") {
    CHECK(g.point_along(0.0) == x);
    CHECK(g.point_along(1.0) == y);
    CHECK_THROWS_AS(g.point_along(1.5), ts::Error);
  }
  SUBCASE("same-topology midpoint averages lengths") {
    ts::Tree x2 = tree_from_splits(taxa, {{"A,B", 2.0}, {"D,E", 1.0}});
    ts::GeodesicPath seg = ts::geodesic(x, x2);
    ts::Tree mid = seg.point_along(0.5);
    CHECK(mid.length(split(taxa, "A,B")) == doctest::Approx(1.5));
    CHECK(mid.length(split(taxa, "D,E")) == doctest::Approx(2.0));
  }
  SUBCASE("arc-length additivity at quarter points") {
    double len = g.length();
    double total = 0.0;
    std::vector<double> stops = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (size_t i = 0; i + 1 < stops.size(); ++i) {
      total += ts::distance(g.point_along(stops[i]), g.point_along(stops[i + 1]));
    }
    CHECK(total == doctest::Approx(len).epsilon(1e-8));
    CHECK(ts::distance(g.point_along(0.25), g.point_along(0.75)) ==
          doctest::Approx(0.5 * len).epsilon(1e-8));
  }
  SUBCASE("common splits interpolate linearly") {
    ts::Rng rng(2);
    auto t8 = ts::make_taxa(8);
    ts::Tree a = ts::random_tree(t8, rng);
    ts::Tree b = ts::random_tree(t8, rng);
    ts::GeodesicPath path = ts::geodesic(a, b);
    for (double t : {0.2, 0.6}) {
      ts::Tree mid = path.point_along(t);
      for (const ts::CarriedSplit& c : path.common_splits()) {
        CHECK(mid.length(c.split) ==
              doctest::Approx((1 - t) * c.len_x + t * c.len_y).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("CAT(0) skinny triangles") {
  ts::Rng rng(41);
  auto taxa = ts::make_taxa(6);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    ts::Tree x = ts::random_tree(taxa, rng);
    ts::Tree y = ts::random_tree(taxa, rng);
    ts::Tree z = ts::random_tree(taxa, rng);
    double a = ts::distance(x, y);
    if (a <= 0.0) continue;
    double b = ts::distance(x, z);
    double c = ts::distance(y, z);
    ts::GeodesicPath g = ts::geodesic(x, y);
    // planar comparison triangle: x'=(0,0), y'=(a,0), z'=(u,v)
    double u = (a * a + b * b - c * c) / (2.0 * a);
    double v = std::sqrt(std::max(0.0, b * b - u * u));
    for (double t : {0.25, 0.5, 0.75}) {
      double in_tree = ts::distance(z, g.point_along(t));
      double planar = std::hypot(u - t * a, v);
      CHECK(in_tree <= planar + 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("geodesic requires matching taxa") {
  ts::Rng rng(3);
  ts::Tree a = ts::random_tree(ts::make_taxa(5), rng);
  ts::Tree b = ts::random_tree(ts::make_taxa(6), rng);
  CHECK_THROWS_AS(ts::distance(a, b), ts::Error);
}
