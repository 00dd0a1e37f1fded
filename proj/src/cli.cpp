#include "epd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "epd/epd.hpp"
#include "epd/instance_gen.hpp"
#include "epd/newick.hpp"
#include "epd/oracle_check.hpp"
#include "epd/report.hpp"
#include "epd/sensitivity.hpp"
#include "epd/species_table.hpp"

namespace epd {

namespace {

CategoryIntervals preset_intervals(const std::string& name) {
  if (name == "table1") return kBroadIntervals;
  if (name == "table2") return kNarrowIntervals;
  throw CLI::ValidationError("--intervals-preset", "must be 'table1' or 'table2'");
}

ProbMode parse_prob_mode(const std::string& name) {
  if (name == "per-category") return ProbMode::PerCategory;
  if (name == "per-species") return ProbMode::PerSpecies;
  throw CLI::ValidationError("--prob-mode", "must be 'per-category' or 'per-species'");
}

int cmd_epd(const std::string& tree_path, const std::string& table_path) {
  const Phylogeny tree = read_newick_file(tree_path);
  const auto probs = probs_for_tree(read_species_table(table_path), tree);
  std::printf("n_species = %d\n", tree.n_species());
  std::printf("total_pd = %.4f\n", tree.total_pd());
  std::printf("epd1 = %.4f\n", epd(tree, probs[0]));
  std::printf("epd2 = %.4f\n", epd(tree, probs[1]));
  return 0;
}

int cmd_hedge(const std::string& tree_path, const std::string& table_path) {
  const Phylogeny tree = read_newick_file(tree_path);
  const auto probs = probs_for_tree(read_species_table(table_path), tree);
  const std::vector<double> scores = hedge_scores(tree, probs[0]);
  std::printf("base ePD = %.4f\n", epd(tree, probs[0]));
  int32_t best = 0;
  for (int32_t s = 0; s < tree.n_species(); ++s) {
    std::printf("species %s: %.4f\n", tree.label(s).c_str(),
                scores[static_cast<size_t>(s)]);
    const double g = scores[static_cast<size_t>(s)];
    const double b = scores[static_cast<size_t>(best)];
    if (g > b && g - b > kGainTieRelTol * g) best = s;
  }
  std::printf("max: species %s (%.4f)\n", tree.label(best).c_str(),
              scores[static_cast<size_t>(best)]);
  return 0;
}

int cmd_greedy(const std::string& tree_path, const std::string& table_path,
               const std::optional<int32_t>& k_opt, const std::optional<double>& rho) {
  const Phylogeny tree = read_newick_file(tree_path);
  const auto probs = probs_for_tree(read_species_table(table_path), tree);
  int32_t k = 0;
  if (k_opt && rho) throw std::invalid_argument("give either --k or --rho, not both");
  if (k_opt)
    k = *k_opt;
  else if (rho)
    k = budget_from_rho(*rho, tree.n_species());
  else
    throw std::invalid_argument("greedy needs --k or --rho");

  const GreedyResult res = greedy_protect(tree, probs[0], k);
  std::printf("base ePD = %.4f\n", res.base_epd);
  for (size_t i = 0; i < res.picks.size(); ++i)
    std::printf("pick %zu: species %s (gain %.4f)\n", i + 1,
                tree.label(res.picks[i]).c_str(), res.gains[i]);
  std::printf("final ePD = %.4f\n", res.final_epd);
  return 0;
}

std::string probs_csv(const Instance& inst) {
  std::string o = "species,p1,p2\n";
  for (int32_t s = 0; s < inst.tree.n_species(); ++s) {
    char row[128];
    std::snprintf(row, sizeof row, "%s,%.17g,%.17g\n", inst.tree.label(s).c_str(),
                  inst.probs[0][static_cast<size_t>(s)],
                  inst.probs[1][static_cast<size_t>(s)]);
    o += row;
  }
  return o;
}

std::string categories_csv(const Instance& inst) {
  std::string o = "species,category\n";
  for (int32_t s = 0; s < inst.tree.n_species(); ++s)
    o += inst.tree.label(s) + ',' +
         std::to_string(inst.categories[static_cast<size_t>(s)]) + '\n';
  return o;
}

int cmd_gen(uint64_t seed, int64_t instances, const std::string& tree_kind,
            const std::string& prob_mode, const std::optional<double>& rho,
            const std::string& preset, const std::string& out_dir) {
  GenParams params;
  params.intervals = preset_intervals(preset);
  params.prob_mode = parse_prob_mode(prob_mode);
  params.fixed_rho = rho;
  if (tree_kind == "ultrametric")
    params.ultrametric = true;
  else if (tree_kind != "nonultrametric")
    throw std::invalid_argument("gen --tree-kind must be 'nonultrametric' or 'ultrametric'");

  for (int64_t i = 0; i < instances; ++i) {
    const Instance inst = gen_instance(seed, static_cast<uint64_t>(i), params);
    char sub[32];
    std::snprintf(sub, sizeof sub, "instance_%05lld", static_cast<long long>(i));
    const std::filesystem::path dir = std::filesystem::path(out_dir) / sub;
    std::filesystem::create_directories(dir);
    write_newick_file(inst.tree, (dir / "tree.nwk").string());
    write_text_file((dir / "probs.csv").string(), probs_csv(inst));
    write_text_file((dir / "categories.csv").string(), categories_csv(inst));
    write_text_file((dir / "manifest.json").string(), format_gen_manifest(inst));
  }
  std::printf("wrote %lld instance(s) under %s\n", static_cast<long long>(instances),
              out_dir.c_str());
  return 0;
}

int cmd_experiment(const std::string& tree_path, const std::string& table_path,
                   uint64_t seed, int64_t instances, const std::string& tree_kind,
                   const std::string& prob_mode, double perturb,
                   const std::optional<double>& rho, const std::string& preset,
                   const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.instances = instances;
  cfg.prob_mode = parse_prob_mode(prob_mode);
  cfg.intervals = preset_intervals(preset);
  cfg.perturb_fraction = perturb;
  cfg.fixed_rho = rho;
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  if (tree_kind == "nonultrametric") {
    cfg.family = Family::RandomNonUltrametric;
  } else if (tree_kind == "ultrametric") {
    cfg.family = Family::RandomUltrametric;
  } else if (tree_kind == "fixed-scenarios") {
    cfg.family = Family::FixedTreeScenarios;
  } else if (tree_kind == "fixed-perturbation") {
    cfg.family = Family::FixedTreePerturbation;
  } else {
    throw std::invalid_argument(
        "--tree-kind must be one of nonultrametric, ultrametric, fixed-scenarios, "
        "fixed-perturbation");
  }

  const bool fixed = cfg.family == Family::FixedTreeScenarios ||
                     cfg.family == Family::FixedTreePerturbation;
  std::optional<Phylogeny> base;
  if (fixed) {
    if (tree_path.empty() || table_path.empty())
      throw std::invalid_argument("fixed-tree experiments need TREE and TABLE arguments");
    base = read_newick_file(tree_path);
    const SpeciesTable table = read_species_table(table_path);
    cfg.base_tree = &*base;
    if (cfg.family == Family::FixedTreeScenarios)
      cfg.base_categories = categories_for_tree(table, *base);
    else
      cfg.base_probs = probs_for_tree(table, *base)[0];
  } else if (!tree_path.empty() || !table_path.empty()) {
    throw std::invalid_argument(
        "TREE and TABLE arguments only apply to fixed-tree experiments");
  }

  const std::vector<InstanceResult> results = run_batch(cfg, seed);
  const BatchStats stats = summarize(results);
  const std::string summary = format_summary(stats, cfg, seed);
  const std::filesystem::path dir(out_dir);
  write_text_file((dir / "summary.txt").string(), summary);
  write_text_file((dir / "results.csv").string(), format_results_csv(results));
  std::fputs(summary.c_str(), stdout);
  std::printf("\nwrote %s and %s\n", (dir / "summary.txt").string().c_str(),
              (dir / "results.csv").string().c_str());
  return 0;
}

int cmd_check(uint64_t seed, int64_t instances) {
  const OracleReport rep = run_oracle_checks(seed, instances);
  std::fputs(rep.describe().c_str(), stdout);
  std::printf("oracle checks %s\n", rep.ok() ? "passed" : "FAILED");
  return rep.ok() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Expected phylogenetic diversity: computation, optimal protection, "
               "and scenario sensitivity experiments"};
  app.require_subcommand(1);

  std::string tree_path, table_path, out_dir;
  std::string tree_kind = "nonultrametric";
  std::string prob_mode = "per-category";
  std::string preset = "table1";
  uint64_t seed = kDefaultSeed;
  int64_t instances = 0;
  double perturb = 0.25;
  std::optional<int32_t> k_opt;
  std::optional<double> rho;
  int exit_code = 0;

  CLI::App* c_epd = app.add_subcommand("epd", "ePD of both scenarios, nothing protected");
  c_epd->add_option("tree", tree_path, "Newick tree file")->required();
  c_epd->add_option("table", table_path, "species table (species,p1,p2)")->required();
  c_epd->callback([&] { exit_code = cmd_epd(tree_path, table_path); });

  CLI::App* c_hedge =
      app.add_subcommand("hedge", "single-species protection scores (scenario 1)");
  c_hedge->add_option("tree", tree_path, "Newick tree file")->required();
  c_hedge->add_option("table", table_path, "species table (species,p1,p2)")->required();
  c_hedge->callback([&] { exit_code = cmd_hedge(tree_path, table_path); });

  CLI::App* c_greedy =
      app.add_subcommand("greedy", "optimal k-species protection set (scenario 1)");
  c_greedy->add_option("tree", tree_path, "Newick tree file")->required();
  c_greedy->add_option("table", table_path, "species table (species,p1,p2)")->required();
  c_greedy->add_option("--k", k_opt, "number of species to protect");
  c_greedy->add_option("--rho", rho, "protect floor(rho * n_species) species");
  c_greedy->callback([&] { exit_code = cmd_greedy(tree_path, table_path, k_opt, rho); });

  CLI::App* c_gen = app.add_subcommand("gen", "generate experiment instances");
  c_gen->add_option("--seed", seed, "master seed (default 42)");
  c_gen->add_option("--instances", instances, "how many instances (default 1)");
  c_gen->add_option("--tree-kind", tree_kind, "nonultrametric | ultrametric");
  c_gen->add_option("--prob-mode", prob_mode, "per-category | per-species");
  c_gen->add_option("--rho", rho, "fix the budget fraction instead of drawing it");
  c_gen->add_option("--intervals-preset", preset, "table1 | table2");
  c_gen->add_option("--out", out_dir, "output directory")->required();
  c_gen->callback([&] {
    exit_code = cmd_gen(seed, instances == 0 ? 1 : instances, tree_kind, prob_mode, rho,
                        preset, out_dir);
  });

  CLI::App* c_exp =
      app.add_subcommand("experiment", "run a sensitivity batch and write reports");
  c_exp->add_option("tree", tree_path, "Newick tree file (fixed-tree families only)");
  c_exp->add_option("table", table_path, "species table (fixed-tree families only)");
  c_exp->add_option("--seed", seed, "master seed (default 42)");
  c_exp->add_option("--instances", instances, "batch size (default 10000)");
  c_exp->add_option("--tree-kind", tree_kind,
                    "nonultrametric | ultrametric | fixed-scenarios | fixed-perturbation");
  c_exp->add_option("--prob-mode", prob_mode, "per-category | per-species");
  c_exp->add_option("--perturb", perturb,
                    "branch-length error fraction for fixed-perturbation (default 0.25)");
  c_exp->add_option("--rho", rho, "fix the budget fraction instead of drawing it");
  c_exp->add_option("--intervals-preset", preset, "table1 | table2");
  c_exp->add_option("--out", out_dir, "output directory")->required();
  c_exp->callback([&] {
    exit_code = cmd_experiment(tree_path, table_path, seed,
                               instances == 0 ? 10000 : instances, tree_kind, prob_mode,
                               perturb, rho, preset, out_dir);
  });

  CLI::App* c_check = app.add_subcommand("check", "exhaustive-oracle self-checks");
  c_check->add_option("--seed", seed, "master seed (default 42)");
  c_check->add_option("--instances", instances, "number of random trees (default 500)");
  c_check->callback(
      [&] { exit_code = cmd_check(seed, instances == 0 ? 500 : instances); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}

}  // namespace epd
