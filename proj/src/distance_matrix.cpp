#include "treespace/distance_matrix.hpp"

#include "treespace/geodesic.hpp"
#include "treespace/parallel.hpp"
#include "treespace/report.hpp"

namespace treespace {

namespace {

std::vector<double> matrix_impl(std::span<const Tree> trees, bool parallel) {
  const int n = static_cast<int>(trees.size());
  for (const Tree& t : trees) require_same_taxa(*trees[0].taxa(), *t.taxa());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
  parallel_for(static_cast<int>(pairs.size()), parallel, [&](int k) {
    static thread_local GeodesicScratch scratch;
    auto [i, j] = pairs[k];
    double d = geodesic_distance_kernel(trees[i].entries(), trees[j].entries(),
                                        scratch, false);
    out[static_cast<size_t>(i) * n + j] = d;
    out[static_cast<size_t>(j) * n + i] = d;
  });
  return out;
}

}  // namespace

std::vector<double> distance_matrix(std::span<const Tree> trees) {
  return matrix_impl(trees, true);
}

std::vector<double> distance_matrix_serial(std::span<const Tree> trees) {
  return matrix_impl(trees, false);
}

std::string distance_matrix_csv(std::span<const Tree> trees) {
  const int n = static_cast<int>(trees.size());
  std::vector<double> d = distance_matrix(trees);
  std::string out = "tree";
  for (int j = 0; j < n; ++j) out += "," + std::to_string(j);
  out += "\n";
  for (int i = 0; i < n; ++i) {
    out += std::to_string(i);
    for (int j = 0; j < n; ++j)
      out += "," + format_g12(d[static_cast<size_t>(i) * n + j]);
    out += "\n";
  }
  return out;
}

}  // namespace treespace
