#include "treespace/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "treespace/distance_matrix.hpp"
#include "treespace/newick.hpp"
#include "treespace/simulate.hpp"

namespace treespace::cli {

namespace {

std::vector<Tree> load_trees(const std::string& path, size_t min_count) {
  std::vector<Tree> trees = read_trees_file(path);
  if (trees.size() < min_count)
    fail(ErrorCategory::validation, "need at least " + std::to_string(min_count) +
                                        " trees, got " + std::to_string(trees.size()));
  return trees;
}

std::string scales_csv_text(const ScaleMap& scales, const TaxonSet& taxa) {
  std::string out = "split,factor\n";
  for (const auto& [split, factor] : scales.factors)
    out += format_split(split, taxa) + "," + format_g12(factor) + "\n";
  return out;
}

}  // namespace

void run_distance(const std::string& trees_file, const std::string& out_csv) {
  std::vector<Tree> trees = load_trees(trees_file, 2);
  write_file_atomic(out_csv, distance_matrix_csv(trees));
}

void run_consensus(const ConsensusOptions& opts) {
  std::vector<Tree> trees = load_trees(opts.trees_file, 1);
  const TaxonSet& taxa = *trees[0].taxa();
  if (!opts.normalize) {
    Tree consensus = majority_consensus(trees);
    write_file_atomic(opts.out_file, write_newick(consensus) + "\n");
    return;
  }
  auto [scaled, scales] = normalize_lengths(trees);
  Tree consensus = majority_consensus(scaled);
  write_file_atomic(opts.out_file, write_newick(consensus) + "\n");
  if (!opts.normalized_out.empty()) {
    std::string out;
    for (const Tree& t : scaled) out += write_newick(t) + "\n";
    write_file_atomic(opts.normalized_out, out);
  }
  if (!opts.scales_csv.empty())
    write_file_atomic(opts.scales_csv, scales_csv_text(scales, taxa));
}

namespace {

struct ConfigFile {
  std::optional<std::string> objective;
  std::optional<double> weight_cap, golden_tol, tau0, decay, birth_floor;
  std::optional<int> iterations;
  std::optional<uint64_t> seed;
  std::optional<bool> normalize;
};

ConfigFile parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::io, "cannot open config '" + path + "'");
  ConfigFile cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCategory::parse,
           path + ": line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      size_t x = s.find_first_not_of(" \t\r");
      size_t y = s.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "objective") cfg.objective = value;
      else if (key == "weight_cap") cfg.weight_cap = std::stod(value);
      else if (key == "golden_tol") cfg.golden_tol = std::stod(value);
      else if (key == "iterations") cfg.iterations = std::stoi(value);
      else if (key == "tau0") cfg.tau0 = std::stod(value);
      else if (key == "decay") cfg.decay = std::stod(value);
      else if (key == "birth_floor") cfg.birth_floor = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "normalize") cfg.normalize = (value == "true" || value == "1");
      else
        fail(ErrorCategory::parse,
             path + ": unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      fail(ErrorCategory::parse,
           path + ": bad value for '" + key + "': " + value);
    }
  }
  return cfg;
}

Objective parse_objective(const std::string& name) {
  if (name == "par") return Objective::f_parallel;
  if (name == "perp") return Objective::f_perpendicular;
  fail(ErrorCategory::usage, "objective must be 'par' or 'perp'");
}

// Scale a user-supplied midpoint into the normalized coordinate system.
Tree scale_tree(const Tree& t, const ScaleMap& scales) {
  const uint64_t full = t.full_mask();
  std::vector<std::pair<Split, double>> lengths;
  for (const SplitLen& e : t.entries()) {
    Split p = Split::from_side(e.mask, full);
    lengths.emplace_back(p, e.len / scales.factor(p));
  }
  return Tree(t.taxa(), std::move(lengths));
}

std::string path_export_text(const SimpleLine& line, const PcaResult& result) {
  // sample points: every breakpoint plus 20 evenly spaced values spanning
  // the breakpoints and the data projections, with a margin
  std::vector<double> svals;
  double lo = 0.0, hi = 0.0;
  for (const SplitPair& pr : line.pairs()) {
    svals.push_back(pr.s_break);
    lo = std::min(lo, pr.s_break);
    hi = std::max(hi, pr.s_break);
  }
  for (const Projection& p : result.projections) {
    lo = std::min(lo, p.s_star);
    hi = std::max(hi, p.s_star);
  }
  double margin = 0.1 * (hi - lo);
  if (margin <= 0.0) margin = 1.0;
  lo -= margin;
  hi += margin;
  for (int i = 0; i < 20; ++i)
    svals.push_back(lo + (hi - lo) * i / 19.0);
  std::sort(svals.begin(), svals.end());
  svals.erase(std::unique(svals.begin(), svals.end(),
                          [](double a, double b) {
                            return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
                          }),
              svals.end());
  std::string out = "# principal path samples; one tree per line, ordered by s\n";
  for (double s : svals) {
    out += "# s=" + format_g12(s) + "\n";
    out += write_newick(line.evaluate(s)) + "\n";
  }
  return out;
}

}  // namespace

RunReport run_pca(const PcaOptions& opts) {
  auto t_start = std::chrono::steady_clock::now();

  ConfigFile file_cfg;
  if (!opts.config_file.empty()) file_cfg = parse_config(opts.config_file);

  PcaConfig cfg;
  std::string objective_name = opts.objective;
  if (objective_name.empty() && file_cfg.objective)
    objective_name = *file_cfg.objective;
  if (objective_name.empty()) objective_name = "par";
  cfg.objective = parse_objective(objective_name);
  cfg.weight_cap = opts.weight_cap.value_or(file_cfg.weight_cap.value_or(0.0));
  cfg.golden_tol = opts.golden_tol.value_or(file_cfg.golden_tol.value_or(1e-8));
  cfg.annealing.iterations =
      opts.iterations.value_or(file_cfg.iterations.value_or(5000));
  if (file_cfg.tau0) cfg.annealing.tau0 = *file_cfg.tau0;
  if (file_cfg.decay) cfg.annealing.decay = *file_cfg.decay;
  if (file_cfg.birth_floor) cfg.annealing.birth_floor = *file_cfg.birth_floor;
  cfg.seed = opts.seed.value_or(file_cfg.seed.value_or(0));
  cfg.normalize = opts.normalize || file_cfg.normalize.value_or(false);

  if (opts.algorithm != "greedy" && opts.algorithm != "anneal")
    fail(ErrorCategory::usage, "algorithm must be 'greedy' or 'anneal'");

  std::vector<Tree> trees = load_trees(opts.trees_file, 1);
  TaxonSetPtr taxa = trees[0].taxa();

  std::optional<ScaleMap> scales;
  if (cfg.normalize) {
    auto [scaled, sm] = normalize_lengths(trees);
    trees = std::move(scaled);
    scales = std::move(sm);
  }

  std::optional<Tree> midpoint;
  if (!opts.midpoint_file.empty()) {
    std::ifstream in(opts.midpoint_file);
    if (!in) fail(ErrorCategory::io, "cannot open '" + opts.midpoint_file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::vector<Tree> mid = parse_trees_text(ss.str(), taxa);
    if (mid.size() != 1)
      fail(ErrorCategory::validation, "midpoint file must hold exactly one tree");
    midpoint = cfg.normalize ? scale_tree(mid[0], *scales) : mid[0];
  } else {
    midpoint = majority_consensus(trees);
  }

  if (!(total_squared_distance(*midpoint, trees) > 0.0))
    fail(ErrorCategory::degenerate,
         "all trees coincide with the midpoint (d2_0 = 0)");

  PcaResult result = opts.algorithm == "greedy"
                         ? greedy_search(trees, *midpoint, cfg)
                         : anneal_search(trees, *midpoint, cfg);
  result.scale_map = scales;

  RunReport report{static_cast<int>(trees.size()),
                   taxa->size(),
                   taxa->names(),
                   write_newick(*midpoint),
                   objective_name,
                   opts.algorithm,
                   cfg.normalize,
                   cfg.seed,
                   cfg,
                   std::move(result),
                   0.0};
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    const std::string dir = opts.out_dir + "/";
    write_file_atomic(dir + "report.json", report_json(report));
    write_file_atomic(dir + "report.txt", report_text(report));
    write_file_atomic(dir + "projections.csv", projections_csv(report.result));
    // path export, back-transformed onto the original scale when normalized
    SimpleLine export_line = report.result.line;
    if (scales) {
      Tree unscaled_midpoint = back_transform(*midpoint, *scales);
      export_line = export_line.back_transformed(*scales, unscaled_midpoint);
    }
    write_file_atomic(dir + "path.nwk",
                      path_export_text(export_line, report.result));
    if (scales)
      write_file_atomic(dir + "scales.csv", scales_csv_text(*scales, *taxa));
  }
  return report;
}

void run_simulate(const SimulateOptions& opts) {
  std::vector<Tree> base = load_trees(opts.base_file, 1);
  if (base.size() != 1)
    fail(ErrorCategory::validation, "base file must hold exactly one tree");
  const TaxonSet& taxa = *base[0].taxa();

  MixtureSpec spec{base[0],
                   parse_split(opts.split1, taxa),
                   parse_split(opts.split2, taxa),
                   opts.theta,
                   opts.jitter,
                   opts.n,
                   opts.seed,
                   std::nullopt,
                   std::nullopt};
  bool correlated = !opts.split1b.empty() || !opts.split2b.empty() ||
                    opts.rho.has_value();
  if (correlated) {
    if (opts.split1b.empty() || opts.split2b.empty() || !opts.rho)
      fail(ErrorCategory::usage,
           "correlated simulation needs --split1b, --split2b and --rho");
    spec.second_pair = {parse_split(opts.split1b, taxa),
                        parse_split(opts.split2b, taxa)};
    spec.rho = opts.rho;
  }

  MixtureSample sample =
      correlated ? simulate_correlated(spec) : simulate_mixture(spec);

  std::string trees_out;
  for (const Tree& t : sample.trees) trees_out += write_newick(t) + "\n";
  write_file_atomic(opts.out_trees, trees_out);

  if (!opts.truth_csv.empty()) {
    std::string truth = correlated ? "index,indicator1,indicator2\n"
                                   : "index,indicator1\n";
    for (size_t i = 0; i < sample.trees.size(); ++i) {
      truth += std::to_string(i) + "," + std::to_string(sample.indicator1[i]);
      if (correlated) truth += "," + std::to_string(sample.indicator2[i]);
      truth += "\n";
    }
    write_file_atomic(opts.truth_csv, truth);
  }
}

}  // namespace treespace::cli
