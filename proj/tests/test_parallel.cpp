// The OpenMP kernels must match the serial reference implementations bit for
// bit: every parallel map writes per-item slots and reductions run serially in
// index order.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "support.hpp"
#include "treespace/distance_matrix.hpp"
#include "treespace/parallel.hpp"
#include "treespace/projection.hpp"

using namespace test_support;

namespace {

std::vector<ts::Tree> sample_trees(int n, int m, uint64_t seed) {
  ts::Rng rng(seed);
  auto taxa = ts::make_taxa(m);
  std::vector<ts::Tree> trees;
  for (int i = 0; i < n; ++i) trees.push_back(ts::random_tree(taxa, rng));
  return trees;
}

}  // namespace

TEST_CASE("distance matrix: parallel equals serial exactly") {
  std::vector<ts::Tree> trees = sample_trees(40, 9, 5);
  std::vector<double> serial = ts::distance_matrix_serial(trees);
  std::vector<double> parallel = ts::distance_matrix(trees);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) REQUIRE(serial[i] == parallel[i]);
  // symmetry and zero diagonal
  int n = 40;
  for (int i = 0; i < n; ++i) {
    CHECK(serial[i * n + i] == 0.0);
    for (int j = 0; j < n; ++j) CHECK(serial[i * n + j] == serial[j * n + i]);
  }
}

TEST_CASE("projection batch: parallel equals serial exactly") {
  std::vector<ts::Tree> trees = sample_trees(30, 7, 9);
  ts::Rng rng(2);
  ts::Tree x0 = ts::majority_consensus(trees);
  ts::SimpleLine line = random_line(x0, 2, rng);
  auto serial = ts::project_all_serial(trees, line);
  auto parallel = ts::project_all(trees, line);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    REQUIRE(serial[i].s_star == parallel[i].s_star);
    REQUIRE(serial[i].d_perp == parallel[i].d_perp);
    REQUIRE(serial[i].d_par == parallel[i].d_par);
  }
}

TEST_CASE("total squared distance: parallel equals serial exactly") {
  std::vector<ts::Tree> trees = sample_trees(50, 8, 13);
  CHECK(ts::total_squared_distance_serial(trees[0], trees) ==
        ts::total_squared_distance(trees[0], trees));
}

TEST_CASE("TREESPACE_THREADS caps the worker count") {
  setenv("TREESPACE_THREADS", "1", 1);
  CHECK(ts::max_workers() == 1);
  unsetenv("TREESPACE_THREADS");
  CHECK(ts::max_workers() >= 1);
}
