// Benchmark: OpenMP kernels against their serial reference implementations.
// Generates a random tree collection, then times the distance matrix and the
// batch projections used by the searches.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "treespace/consensus.hpp"
#include "treespace/distance_matrix.hpp"
#include "treespace/parallel.hpp"
#include "treespace/projection.hpp"
#include "treespace/random_tree.hpp"

namespace ts = treespace;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 120;
  int m = argc > 2 ? std::atoi(argv[2]) : 12;

  ts::TaxonSetPtr taxa = ts::make_taxa(m);
  ts::Rng rng(7);
  std::vector<ts::Tree> trees;
  trees.reserve(n);
  for (int i = 0; i < n; ++i) trees.push_back(ts::random_tree(taxa, rng));

  std::printf("benchmark: %d trees, %d taxa, %d workers\n", n, m,
              ts::max_workers());

  {
    auto t0 = Clock::now();
    std::vector<double> serial = ts::distance_matrix_serial(trees);
    double dt_serial = seconds_since(t0);
    t0 = Clock::now();
    std::vector<double> parallel = ts::distance_matrix(trees);
    double dt_parallel = seconds_since(t0);
    std::printf(
        "distance matrix:  serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
        dt_serial, dt_parallel, dt_serial / dt_parallel,
        serial == parallel ? "bit-identical" : "MISMATCH");
  }

  {
    ts::Tree x0 = ts::majority_consensus(trees);
    ts::SimpleLine line(x0);
    auto t0 = Clock::now();
    auto serial = ts::project_all_serial(trees, line);
    double dt_serial = seconds_since(t0);
    t0 = Clock::now();
    auto parallel = ts::project_all(trees, line);
    double dt_parallel = seconds_since(t0);
    bool equal = true;
    for (size_t i = 0; i < serial.size(); ++i)
      if (serial[i].s_star != parallel[i].s_star ||
          serial[i].d_perp != parallel[i].d_perp)
        equal = false;
    std::printf(
        "projection batch: serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
        dt_serial, dt_parallel, dt_serial / dt_parallel,
        equal ? "bit-identical" : "MISMATCH");
  }

  {
    auto t0 = Clock::now();
    double serial = ts::total_squared_distance_serial(trees[0], trees);
    double dt_serial = seconds_since(t0);
    t0 = Clock::now();
    double parallel = ts::total_squared_distance(trees[0], trees);
    double dt_parallel = seconds_since(t0);
    std::printf(
        "total squared:    serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
        dt_serial, dt_parallel, dt_serial / dt_parallel,
        serial == parallel ? "bit-identical" : "MISMATCH");
  }
  return 0;
}
