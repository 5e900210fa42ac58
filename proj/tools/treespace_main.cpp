#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "treespace/cli.hpp"

namespace ts = treespace;

int main(int argc, char** argv) {
  CLI::App app{"tree-space geometry toolkit: geodesic distances and principal paths"};
  app.require_subcommand(1);

  // distance
  std::string d_trees, d_out;
  auto* dist = app.add_subcommand("distance", "pairwise geodesic distance matrix");
  dist->add_option("--trees", d_trees, "multi-tree Newick file")->required();
  dist->add_option("--out", d_out, "output CSV path")->required();

  // consensus
  ts::cli::ConsensusOptions c_opts;
  auto* cons = app.add_subcommand("consensus", "majority consensus tree");
  cons->add_option("--trees", c_opts.trees_file, "multi-tree Newick file")->required();
  cons->add_option("--out", c_opts.out_file, "output Newick path")->required();
  cons->add_flag("--normalize", c_opts.normalize,
                 "normalize branch lengths to unit per-split mean first");
  cons->add_option("--normalized-out", c_opts.normalized_out,
                   "write the scaled trees here (with --normalize)");
  cons->add_option("--scales", c_opts.scales_csv,
                   "write the per-split scale factors here (with --normalize)");

  // pca
  ts::cli::PcaOptions p_opts;
  double p_weight_cap = 0.0, p_golden_tol = 0.0;
  uint64_t p_seed = 0;
  int p_iterations = 0;
  auto* pca = app.add_subcommand("pca", "first principal geodesic path");
  pca->add_option("--trees", p_opts.trees_file, "multi-tree Newick file")->required();
  pca->add_option("--out", p_opts.out_dir, "output directory")->required();
  pca->add_option("--objective", p_opts.objective, "par (default) or perp");
  pca->add_option("--algorithm", p_opts.algorithm, "greedy (default) or anneal");
  pca->add_flag("--normalize", p_opts.normalize, "per-split branch length normalization");
  pca->add_option("--midpoint", p_opts.midpoint_file, "Newick file overriding the consensus midpoint");
  pca->add_option("--config", p_opts.config_file, "flat key=value config file");
  auto* seed_opt = pca->add_option("--seed", p_seed, "random seed (annealing)");
  auto* cap_opt = pca->add_option("--weight-cap", p_weight_cap, "cap on |w| during search");
  auto* tol_opt = pca->add_option("--golden-tol", p_golden_tol, "golden-section tolerance");
  auto* iter_opt = pca->add_option("--iterations", p_iterations, "annealing iterations");

  // simulate
  ts::cli::SimulateOptions s_opts;
  double s_rho = 0.0;
  auto* sim = app.add_subcommand("simulate", "two-topology mixture generator");
  sim->add_option("--base", s_opts.base_file, "base tree Newick file")->required();
  sim->add_option("--split1", s_opts.split1, "t1 split (taxon list, e.g. A,B)")->required();
  sim->add_option("--split2", s_opts.split2, "t2 replacement split")->required();
  sim->add_option("--theta", s_opts.theta, "probability of t1");
  sim->add_option("--jitter", s_opts.jitter, "log-normal branch jitter sigma");
  sim->add_option("--n", s_opts.n, "number of trees");
  sim->add_option("--seed", s_opts.seed, "random seed");
  sim->add_option("--out", s_opts.out_trees, "output trees file")->required();
  sim->add_option("--truth", s_opts.truth_csv, "output indicator CSV");
  sim->add_option("--split1b", s_opts.split1b, "second pair t1 split");
  sim->add_option("--split2b", s_opts.split2b, "second pair t2 split");
  auto* rho_opt = sim->add_option("--rho", s_rho, "indicator correlation for the second pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: usage: %s\n", e.what());
    return 2;
  }

  try {
    if (dist->parsed()) {
      ts::cli::run_distance(d_trees, d_out);
    } else if (cons->parsed()) {
      ts::cli::run_consensus(c_opts);
    } else if (pca->parsed()) {
      if (seed_opt->count()) p_opts.seed = p_seed;
      if (cap_opt->count()) p_opts.weight_cap = p_weight_cap;
      if (tol_opt->count()) p_opts.golden_tol = p_golden_tol;
      if (iter_opt->count()) p_opts.iterations = p_iterations;
      ts::cli::run_pca(p_opts);
    } else if (sim->parsed()) {
      if (rho_opt->count()) s_opts.rho = s_rho;
      ts::cli::run_simulate(s_opts);
    }
  } catch (const ts::Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", ts::to_string(e.category()), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
  return 0;
}
