#pragma once
// The scenario-sensitivity experiment: solve each instance under both of
// its scenarios, cross-evaluate the two optimal protection sets, and
// aggregate gap/dissimilarity statistics over a batch.
//
// Notation: epd{w}{s} is the ePD evaluated with scenario w's data while
// protecting the set that is optimal in scenario s. gap1 measures how much
// scenario-1 ePD is lost by protecting scenario 2's optimal set instead of
// scenario 1's own, and symmetrically for gap2:
//     gap1 = (epd11 - epd12) / epd11,   gap2 = (epd22 - epd21) / epd22.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "epd/instance_gen.hpp"
#include "epd/phylogeny.hpp"

namespace epd {

struct InstanceResult {
  uint64_t index = 0;
  std::vector<int32_t> s1, s2;  // optimal protection sets, ascending
  int32_t n_species = 0;
  int32_t k = 0;
  int32_t intersection_size = 0;  // |s1 and s2|
  double total_pd1 = 0.0, total_pd2 = 0.0;  // differ only for perturbed lengths
  double base_epd1 = 0.0, base_epd2 = 0.0;  // nothing protected
  double epd11 = 0.0, epd12 = 0.0, epd21 = 0.0, epd22 = 0.0;
  double gap1 = 0.0, gap2 = 0.0;  // fractions in [0,1]
  double dissimilarity = 0.0;     // |s1 xor s2| / |s1 or s2|, 0 when both empty
  std::array<int32_t, 5> species_by_cat{};     // all zero when categories unknown
  std::array<int32_t, 5> protected_by_cat1{};  // category histogram of s1
  std::array<int32_t, 5> protected_by_cat2{};  // category histogram of s2
  std::array<std::array<double, 5>, 2> category_probs{};  // per-category draws
  bool per_species = false;
  Provenance prov;
};

struct GapPair {
  double gap1 = 0.0;
  double gap2 = 0.0;
};

// The relative losses defined above. Requires epd11 > 0 and epd22 > 0
// (throws std::invalid_argument otherwise) and epd11 >= epd12, epd22 >=
// epd21 up to floating-point noise (throws std::logic_error beyond 1e-9
// relative — the protecting set was then not optimal); sub-noise negative
// numerators clamp to 0.
GapPair gaps(double epd11, double epd12, double epd21, double epd22);

// |a xor b| / |a or b| for ascending duplicate-free species sets; 0 when
// both are empty (the undefined case, reported by convention as identical).
double dissimilarity(std::span<const int32_t> a, std::span<const int32_t> b);

// Greedy-solves both scenarios and fills every InstanceResult field.
InstanceResult solve_instance(const Instance& inst);

enum class Family {
  RandomNonUltrametric,
  RandomUltrametric,
  FixedTreeScenarios,     // fixed tree + categories; scenarios drawn per instance
  FixedTreePerturbation,  // fixed tree + probabilities; lengths redrawn per scenario
};

struct ExperimentConfig {
  Family family = Family::RandomNonUltrametric;
  int64_t instances = 10000;
  ProbMode prob_mode = ProbMode::PerCategory;
  CategoryIntervals intervals = kBroadIntervals;
  CategoryMode category_mode = CategoryMode::Mixed;
  double perturb_fraction = 0.25;  // FixedTreePerturbation only
  std::optional<double> fixed_rho;
  int threads = 1;  // any value yields identical results
  // Fixed-tree families only:
  const Phylogeny* base_tree = nullptr;
  std::vector<int32_t> base_categories;  // FixedTreeScenarios
  std::vector<double> base_probs;        // FixedTreePerturbation
};

// Generates and solves cfg.instances instances. results[i] always belongs
// to instance index i: the outcome is identical for any thread count.
// Throws std::invalid_argument on an inconsistent config.
std::vector<InstanceResult> run_batch(const ExperimentConfig& cfg, uint64_t master_seed);

struct BatchStats {
  int64_t instances = 0;
  int64_t gap_count = 0;  // 2 * instances
  double mean_gap = 0.0;  // over the pooled gap values, as fractions
  double std_gap = 0.0;   // population standard deviation
  double max_gap = 0.0;
  uint64_t argmax_index = 0;          // instance holding the largest gap
  InstanceResult argmax;              // snapshot of that instance
  double max_dissimilarity = 0.0;     // over all instances
  double dissim_at_max_gap = 0.0;     // the argmax instance's dissimilarity
  int64_t empty_set_pairs = 0;        // instances where k = 0 (dissimilarity 0 by convention)
  int32_t min_species = 0, max_species = 0;
};

// Pure fold over the results in index order; recomputable from the
// per-instance rows. Throws std::invalid_argument on an empty list.
BatchStats summarize(std::span<const InstanceResult> results);

}  // namespace epd
