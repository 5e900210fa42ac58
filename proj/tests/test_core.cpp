#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"

using namespace test_support;

TEST_CASE("taxon set rejects bad inputs") {
  CHECK_THROWS_AS(ts::TaxonSet({"A", "B", "C"}), ts::Error);          // m < 4
  CHECK_THROWS_AS(ts::TaxonSet({"A", "B", "B", "C"}), ts::Error);     // dup
  CHECK_THROWS_AS(ts::TaxonSet({"A", "B", "", "C"}), ts::Error);      // empty
  ts::TaxonSet ok({"A", "B", "C", "D"});
  CHECK(ok.size() == 4);
  CHECK(ok.index_of("C") == 2);
  CHECK(ok.index_of("Z") == -1);
}

TEST_CASE("split canonical form excludes taxon 0") {
  auto taxa = letters(5);
  ts::Split p = split(taxa, "A,B");
  ts::Split q = split(taxa, "C,D,E");
  CHECK(p == q);  // complementary sides, same canonical split
  CHECK((p.mask() & 1) == 0);
  CHECK_THROWS_AS(ts::Split::from_side(0, taxa->full_mask()), ts::Error);
  CHECK_THROWS_AS(ts::Split::from_side(taxa->full_mask(), taxa->full_mask()),
                  ts::Error);
}

TEST_CASE("split compatibility") {
  auto taxa = letters(5);
  const uint64_t full = taxa->full_mask();
  ts::Split ab = split(taxa, "A,B");
  ts::Split ac = split(taxa, "A,C");
  ts::Split de = split(taxa, "D,E");
  ts::Split be = split(taxa, "B,E");

  CHECK_FALSE(ts::compatible(ab, ac, full));  // cannot share a tree
  CHECK(ts::compatible(ab, de, full));        // figure-2 quadrant pair
  CHECK(ts::compatible(ab, ab, full));        // identity
  CHECK_FALSE(ts::compatible(de, be, full));
  // terminal splits are compatible with everything
  for (int i = 0; i < 5; ++i) {
    CHECK(ts::compatible(ab, ts::terminal_split(i, full), full));
    CHECK(ts::compatible(ac, ts::terminal_split(i, full), full));
  }
  // symmetry on all internal pairs
  std::vector<ts::Split> all = {ab, ac, de, be, split(taxa, "C,D")};
  for (auto& p : all)
    for (auto& q : all)
      CHECK(ts::compatible(p, q, full) == ts::compatible(q, p, full));
}

TEST_CASE("compatible_with topology") {
  auto taxa = letters(5);
  const uint64_t full = taxa->full_mask();
  ts::Topology t({split(taxa, "D,E")}, *taxa);
  CHECK(ts::compatible_with(split(taxa, "A,B"), t, full));
  ts::Topology t2({split(taxa, "A,B")}, *taxa);
  CHECK_FALSE(ts::compatible_with(split(taxa, "B,E"), t2, full));
  CHECK(ts::compatible_with(split(taxa, "B,E"), ts::Topology(), full));
}

TEST_CASE("parse_newick basics") {
  ts::Tree t = tree("((A:1,B:1):1,(C:1,D:1):1,E:1);");
  CHECK(t.num_taxa() == 5);
  auto taxa = t.taxa();
  CHECK(t.length(split(taxa, "A,B")) == 1.0);
  CHECK(t.length(split(taxa, "C,D")) == 1.0);
  CHECK(t.internal_splits().size() == 2);

  SUBCASE("rooted input is de-rooted with summed lengths") {
    ts::Tree r = tree("((A:1,B:1):0.5,(C:1,D:1):0.5);");
    CHECK(r.internal_splits().size() == 1);
    CHECK(r.length(split(r.taxa(), "A,B")) == doctest::Approx(1.0));
  }
  SUBCASE("duplicate labels rejected") {
    CHECK_THROWS_AS(tree("((A:1,A:1):1,C:1,D:1);"), ts::Error);
  }
  SUBCASE("missing branch length rejected") {
    CHECK_THROWS_AS(tree("((A:1,B):1,C:1,D:1);"), ts::Error);
  }
  SUBCASE("m < 4 rejected") {
    CHECK_THROWS_AS(tree("(A:1,B:1,C:1);"), ts::Error);
  }
  SUBCASE("negative length rejected") {
    CHECK_THROWS_AS(tree("((A:1,B:1):-1,C:1,D:1);"), ts::Error);
  }
  SUBCASE("zero terminal length rejected") {
    CHECK_THROWS_AS(tree("((A:0,B:1):1,C:1,D:1);"), ts::Error);
  }
  SUBCASE("zero internal length dropped") {
    ts::Tree u = tree("((A:1,B:1):0,C:1,D:1);");
    CHECK(u.internal_splits().empty());
  }
  SUBCASE("whitespace and comments tolerated") {
    ts::Tree u = tree(" ( (A:1, B:1):2 [a comment], C:1, D:1) ; ");
    CHECK(u.length(split(u.taxa(), "A,B")) == 2.0);
  }
  SUBCASE("internal labels are ignored") {
    ts::Tree u = tree("((A:1,B:1)clade95:2,C:1,D:1);");
    CHECK(u.length(split(u.taxa(), "A,B")) == 2.0);
  }
  SUBCASE("multifurcations parse as unresolved trees") {
    ts::Tree u = tree("((A:1,B:1,C:1):2,D:1,E:1,F:1);");
    CHECK(u.internal_splits().size() == 1);
  }
  SUBCASE("labels checked against a supplied taxon set") {
    auto taxa4 = letters(4);
    CHECK_THROWS_AS(tree("((A:1,B:1):1,C:1,E:1);", taxa4), ts::Error);
    CHECK_NOTHROW(tree("((A:1,B:1):1,C:1,D:1);", taxa4));
  }
}

TEST_CASE("write_newick canonical forms") {
  auto taxa = letters(5);
  ts::Tree t = tree_from_splits(taxa, {{"A,B", 1.0}});
  CHECK(ts::write_newick(t) == "((A:1,B:1):1,C:1,D:1,E:1);");

  ts::Tree star = tree_from_splits(letters(4), {});
  CHECK(ts::write_newick(star) == "(A:1,B:1,C:1,D:1);");
}

TEST_CASE("parse/write round-trip on random trees") {
  ts::Rng rng(42);
  for (int m : {4, 5, 8, 12, 20}) {
    auto taxa = ts::make_taxa(m);
    for (int rep = 0; rep < 200; ++rep) {
      ts::Tree t = ts::random_tree(taxa, rng);
      ts::Tree back = ts::parse_newick(ts::write_newick(t), taxa);
      REQUIRE(back.entries().size() == t.entries().size());
      for (size_t i = 0; i < t.entries().size(); ++i) {
        REQUIRE(back.entries()[i].mask == t.entries()[i].mask);
        REQUIRE(back.entries()[i].len ==
                doctest::Approx(t.entries()[i].len).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("parsed trees satisfy the tree invariants") {
  ts::Rng rng(7);
  auto taxa = ts::make_taxa(9);
  const uint64_t full = taxa->full_mask();
  for (int rep = 0; rep < 100; ++rep) {
    ts::Tree t = ts::random_tree(taxa, rng);
    CHECK(static_cast<int>(t.entries().size()) <= 2 * 9 - 3);
    int terminals = 0;
    for (const ts::SplitLen& e : t.entries()) {
      CHECK(e.len > 0.0);
      if (ts::Split::from_side(e.mask, full).is_terminal(full)) ++terminals;
    }
    CHECK(terminals == 9);
  }
}

TEST_CASE("euclidean distance") {
  auto taxa = letters(5);
  ts::Tree x = tree_from_splits(taxa, {{"A,B", 1.0}, {"D,E", 3.0}});
  ts::Tree y = tree_from_splits(taxa, {{"A,C", 3.0}, {"B,E", 1.0}});
  CHECK(ts::euclidean_distance(x, y) == doctest::Approx(std::sqrt(20.0)));
  CHECK(ts::euclidean_distance(x, x) == 0.0);

  SUBCASE("one-coordinate difference") {
    ts::Tree z = tree_from_splits(taxa, {{"A,B", 1.5}, {"D,E", 3.0}});
    CHECK(ts::euclidean_distance(x, z) == doctest::Approx(0.5));
  }
  SUBCASE("metric axioms on random triples") {
    ts::Rng rng(3);
    auto t8 = ts::make_taxa(8);
    for (int rep = 0; rep < 200; ++rep) {
      ts::Tree a = ts::random_tree(t8, rng);
      ts::Tree b = ts::random_tree(t8, rng);
      ts::Tree c = ts::random_tree(t8, rng);
      double ab = ts::euclidean_distance(a, b);
      double ba = ts::euclidean_distance(b, a);
      CHECK(ab == ba);
      CHECK(ts::euclidean_distance(a, c) <=
            ab + ts::euclidean_distance(b, c) + 1e-12);
    }
  }
  SUBCASE("mismatched taxa rejected") {
    ts::Tree other = tree_from_splits(ts::make_taxa(5), {});
    CHECK_THROWS_AS(ts::euclidean_distance(x, other), ts::Error);
  }
}

TEST_CASE("xnni replacements") {
  auto taxa = letters(5);
  ts::Topology t({split(taxa, "A,B"), split(taxa, "D,E")}, *taxa);

  SUBCASE("figure-1 moves across the DE edge") {
    auto moves = ts::xnni_replacements(t, split(taxa, "D,E"), *taxa);
    std::set<ts::Split> got(moves.begin(), moves.end());
    std::set<ts::Split> want = {split(taxa, "C,D"), split(taxa, "C,E")};
    CHECK(got == want);
  }
  SUBCASE("binary topology always yields exactly 2 moves") {
    ts::Rng rng(11);
    auto t8 = ts::make_taxa(8);
    const uint64_t full = t8->full_mask();
    for (int rep = 0; rep < 50; ++rep) {
      ts::Tree x = ts::random_tree(t8, rng);
      ts::Topology top = x.topology();
      REQUIRE(top.fully_resolved(*t8));
      for (const ts::Split& p : top.splits()) {
        auto moves = ts::xnni_replacements(top, p, *t8);
        CHECK(moves.size() == 2);
        for (const ts::Split& q : moves) {
          CHECK_FALSE(ts::compatible(p, q, full));
          CHECK(ts::compatible_with(q, top.without(p), full));
        }
      }
    }
  }
  SUBCASE("terminal splits are never exchanged") {
    CHECK_THROWS_AS(
        ts::xnni_replacements(t, ts::terminal_split(2, taxa->full_mask()), *taxa),
        ts::Error);
  }
  SUBCASE("star topology: all crossing splits, via single swaps") {
    auto moves = ts::xnni_replacements(ts::Topology(), split(taxa, "A,B"), *taxa);
    CHECK(moves.size() == 6);
  }
}
