#pragma once
// Deterministic, seeded generation of experiment instances: random tree
// topologies with integer branch lengths, species categories, extinction
// probability scenarios, protection budgets, and branch-length
// perturbations. Every random quantity is drawn from a purpose-specific
// sub-stream of the master seed (see epd/rng.hpp), so instance `index` is
// the same no matter how many instances are generated, in what order, or
// on how many threads.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "epd/phylogeny.hpp"
#include "epd/rng.hpp"

namespace epd {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// One closed extinction-probability interval per category; category 1 is
// the most threatened, so the intervals decrease.
using CategoryIntervals = std::array<Interval, 5>;

// Broad preset used with randomly generated trees.
inline constexpr CategoryIntervals kBroadIntervals = {
    {{0.50, 1.00}, {0.20, 0.50}, {0.10, 0.20}, {0.05, 0.10}, {0.00, 0.05}}};

// Narrow preset used with the Madagascar primate dataset.
inline constexpr CategoryIntervals kNarrowIntervals = {
    {{0.90, 1.00}, {0.65, 0.85}, {0.40, 0.60}, {0.15, 0.35}, {0.00, 0.10}}};

// Real-world-like share of species per category (most species least
// threatened), applied i.i.d. per species in skewed mode.
inline constexpr std::array<double, 5> kSkewedCategoryWeights = {0.02, 0.04, 0.09,
                                                                 0.09, 0.76};

// Protection budget fractions; one is drawn uniformly per instance.
inline constexpr std::array<double, 5> kRhoChoices = {0.1, 0.2, 0.3, 0.4, 0.5};

enum class CategoryMode {
  Uniform,  // categories i.i.d. uniform on {1..5}
  Skewed,   // categories i.i.d. with kSkewedCategoryWeights
  Mixed,    // a fair coin per instance decides between the two
};

enum class ProbMode {
  PerCategory,  // one probability per category and scenario, shared by its species
  PerSpecies,   // every species draws its own probability from its category's interval
};

struct GenParams {
  int32_t internal_lo = 50;  // internal node count drawn uniformly from
  int32_t internal_hi = 1000;  // [internal_lo, internal_hi]
  int32_t dmax_lo = 2;  // the per-tree child-count ceiling d_max is uniform
  int32_t dmax_hi = 4;  // on [dmax_lo, dmax_hi]
  int32_t lambda_max_lo = 5;  // the per-tree length ceiling lambda_max is
  int32_t lambda_max_hi = 20;  // uniform on [lambda_max_lo, lambda_max_hi]
  CategoryIntervals intervals = kBroadIntervals;
  CategoryMode category_mode = CategoryMode::Mixed;
  ProbMode prob_mode = ProbMode::PerCategory;
  bool ultrametric = false;
  std::optional<double> fixed_rho;  // overrides the kRhoChoices draw when set
};

// Everything that was drawn while building one instance; enough to
// reproduce or describe it.
struct Provenance {
  uint64_t master_seed = 0;
  uint64_t instance_index = 0;
  int32_t n_internal = 0;   // 0 for fixed-tree instances
  int32_t d_max = 0;        // 0 for fixed-tree instances
  int32_t lambda_max = 0;   // 0 for fixed-tree instances
  bool skewed_categories = false;
  bool ultrametric = false;
  double rho = 0.0;
  int32_t n_species = 0;
  int32_t k = 0;
};

// One experiment instance: a tree (two trees for length-perturbation
// instances, which share probabilities instead of sharing lengths), species
// categories, one extinction-probability vector per scenario, and the
// protection budget k.
struct Instance {
  Phylogeny tree;                 // scenario-1 tree
  std::optional<Phylogeny> tree2;  // scenario-2 tree; unset = same as scenario 1
  std::vector<int32_t> categories;  // 1..5 per species; empty when not drawn
  std::array<std::vector<double>, 2> probs;  // extinction probabilities per scenario
  std::array<std::array<double, 5>, 2> category_probs{};  // per-category draws
  bool per_species = false;  // probs drawn per species (category_probs unused)
  int32_t k = 0;
  Provenance prov;

  const Phylogeny& scenario_tree(int scenario) const {
    return (scenario == 1 && tree2) ? *tree2 : tree;
  }
};

// Random rooted topology with integer branch lengths:
//  1. every internal node draws its child count uniformly from [2, d_max]
//     when created; internal nodes are created one at a time, each attached
//     to the earliest-created node that still has an open child slot;
//  2. once n_internal internal nodes exist, every remaining open slot
//     becomes a leaf;
//  3. each arc's length is an integer drawn uniformly from [1, lambda_max],
//     in ascending node-id order.
// Leaves are labeled "s0".."s{n-1}" in species order.
Phylogeny gen_topology(Rng& rng, int32_t n_internal, int32_t d_max, int32_t lambda_max);

// i.i.d. categories in {1..5}: uniform, or kSkewedCategoryWeights when skewed.
std::vector<int32_t> assign_categories(Rng& rng, int32_t n, bool skewed);

// One probability per category, drawn uniformly from its interval.
std::array<double, 5> draw_scenario(Rng& rng, const CategoryIntervals& intervals);

// Per-category mode: p_i = scenario[category_i].
std::vector<double> species_probs(std::span<const int32_t> categories,
                                  const std::array<double, 5>& scenario);

// Per-species mode: each p_i drawn uniformly from its category's interval.
std::vector<double> species_probs_per_species(Rng& rng,
                                              std::span<const int32_t> categories,
                                              const CategoryIntervals& intervals);

// floor(rho * n), computed exactly for the tenth-valued rho choices.
int32_t budget_from_rho(double rho, int32_t n_species);

// Draws rho (uniform over kRhoChoices unless fixed) and derives k, using
// the instance's Budget sub-stream.
double draw_rho(Rng& rng, const std::optional<double>& fixed_rho);

// A full random-tree instance: topology + lengths (ultrametrized when
// params.ultrametric), categories, two independent scenarios, budget.
// A pure function of (master_seed, instance_index, params).
Instance gen_instance(uint64_t master_seed, uint64_t instance_index,
                      const GenParams& params);

// Fixed-tree instance: categories come from data, only the two scenarios
// and the budget are drawn.
Instance gen_fixed_tree_instance(uint64_t master_seed, uint64_t instance_index,
                                 const Phylogeny& base, std::vector<int32_t> categories,
                                 const CategoryIntervals& intervals, ProbMode prob_mode,
                                 const std::optional<double>& fixed_rho);

// Length-perturbation instance: both scenarios share `probs`; each scenario
// redraws every branch length independently and uniformly from
// [(1-fraction)*lambda, (1+fraction)*lambda] (fraction in [0,1)).
Instance gen_perturbation_instance(uint64_t master_seed, uint64_t instance_index,
                                   const Phylogeny& base, std::span<const double> probs,
                                   double fraction,
                                   const std::optional<double>& fixed_rho);

// The perturbation primitive by itself: topology and labels unchanged,
// every branch length redrawn uniformly from [(1-f)*lambda, (1+f)*lambda].
Phylogeny perturb_lengths(Rng& rng, const Phylogeny& tree, double fraction);

}  // namespace epd
