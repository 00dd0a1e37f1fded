#include "epd/instance_gen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace epd {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Phylogeny gen_topology(Rng& rng, int32_t n_internal, int32_t d_max, int32_t lambda_max) {
  require(n_internal >= 1, "gen_topology: need at least one internal node");
  require(d_max >= 2, "gen_topology: d_max must be at least 2");
  require(lambda_max >= 1, "gen_topology: lambda_max must be at least 1");

  // Internal nodes get ids 0..n_internal-1 in creation order; each draws its
  // child count on creation and new internal nodes attach to the
  // earliest-created node with an open slot, so the internal skeleton fills
  // level by level.
  std::vector<int32_t> child_budget(static_cast<size_t>(n_internal));
  std::vector<int32_t> used(static_cast<size_t>(n_internal), 0);
  std::vector<NodeId> parent(static_cast<size_t>(n_internal), kNoNode);
  int32_t cursor = 0;
  child_budget[0] = rng.next_int(2, d_max);
  for (int32_t j = 1; j < n_internal; ++j) {
    while (used[static_cast<size_t>(cursor)] == child_budget[static_cast<size_t>(cursor)])
      ++cursor;
    parent[static_cast<size_t>(j)] = cursor;
    ++used[static_cast<size_t>(cursor)];
    child_budget[static_cast<size_t>(j)] = rng.next_int(2, d_max);
  }

  // Every remaining open slot becomes a leaf, in owner-creation order.
  for (int32_t i = 0; i < n_internal; ++i)
    for (int32_t s = used[static_cast<size_t>(i)]; s < child_budget[static_cast<size_t>(i)];
         ++s)
      parent.push_back(i);

  const size_t n_nodes = parent.size();
  std::vector<double> lengths(n_nodes, 0.0);
  for (size_t v = 1; v < n_nodes; ++v)
    lengths[v] = static_cast<double>(rng.next_int(1, lambda_max));

  const size_t n_leaves = n_nodes - static_cast<size_t>(n_internal);
  std::vector<std::string> labels;
  labels.reserve(n_leaves);
  for (size_t i = 0; i < n_leaves; ++i) labels.push_back("s" + std::to_string(i));
  return build_tree(parent, lengths, std::move(labels));
}

std::vector<int32_t> assign_categories(Rng& rng, int32_t n, bool skewed) {
  require(n >= 1, "assign_categories: need at least one species");
  std::vector<int32_t> cats(static_cast<size_t>(n));
  if (!skewed) {
    for (auto& c : cats) c = 1 + static_cast<int32_t>(rng.next_below(5));
    return cats;
  }
  for (auto& c : cats) {
    const double u = rng.next_unit();
    double acc = 0.0;
    c = 5;  // the accumulated weights sum to 1, so this is only a guard
    for (int32_t g = 0; g < 5; ++g) {
      acc += kSkewedCategoryWeights[static_cast<size_t>(g)];
      if (u < acc) {
        c = g + 1;
        break;
      }
    }
  }
  return cats;
}

std::array<double, 5> draw_scenario(Rng& rng, const CategoryIntervals& intervals) {
  std::array<double, 5> out{};
  for (size_t g = 0; g < 5; ++g) {
    require(intervals[g].lo >= 0.0 && intervals[g].hi <= 1.0 &&
                intervals[g].lo <= intervals[g].hi,
            "draw_scenario: malformed interval");
    out[g] = rng.next_real(intervals[g].lo, intervals[g].hi);
  }
  return out;
}

std::vector<double> species_probs(std::span<const int32_t> categories,
                                  const std::array<double, 5>& scenario) {
  std::vector<double> p(categories.size());
  for (size_t i = 0; i < categories.size(); ++i) {
    require(categories[i] >= 1 && categories[i] <= 5, "species_probs: category outside 1..5");
    p[i] = scenario[static_cast<size_t>(categories[i] - 1)];
  }
  return p;
}

std::vector<double> species_probs_per_species(Rng& rng,
                                              std::span<const int32_t> categories,
                                              const CategoryIntervals& intervals) {
  std::vector<double> p(categories.size());
  for (size_t i = 0; i < categories.size(); ++i) {
    require(categories[i] >= 1 && categories[i] <= 5,
            "species_probs_per_species: category outside 1..5");
    const Interval& iv = intervals[static_cast<size_t>(categories[i] - 1)];
    p[i] = rng.next_real(iv.lo, iv.hi);
  }
  return p;
}

int32_t budget_from_rho(double rho, int32_t n_species) {
  require(rho >= 0.0 && rho <= 1.0, "budget_from_rho: rho outside [0,1]");
  // The canonical choices are exact tenths; integer arithmetic sidesteps
  // floor(0.3 * 10) style misrounding for them.
  const auto tenths = static_cast<int64_t>(std::llround(rho * 10.0));
  if (std::abs(rho - static_cast<double>(tenths) / 10.0) < 1e-12)
    return static_cast<int32_t>(static_cast<int64_t>(n_species) * tenths / 10);
  return static_cast<int32_t>(std::floor(rho * static_cast<double>(n_species)));
}

double draw_rho(Rng& rng, const std::optional<double>& fixed_rho) {
  if (fixed_rho) {
    require(*fixed_rho >= 0.0 && *fixed_rho <= 1.0, "rho outside [0,1]");
    return *fixed_rho;
  }
  return kRhoChoices[rng.next_below(kRhoChoices.size())];
}

Instance gen_instance(uint64_t master_seed, uint64_t instance_index,
                      const GenParams& params) {
  Rng topo = Rng::stream(master_seed, instance_index, Stream::Topology);
  const int32_t n_internal = topo.next_int(params.internal_lo, params.internal_hi);
  const int32_t d_max = topo.next_int(params.dmax_lo, params.dmax_hi);
  const int32_t lambda_max = topo.next_int(params.lambda_max_lo, params.lambda_max_hi);
  Phylogeny tree = gen_topology(topo, n_internal, d_max, lambda_max);
  if (params.ultrametric) tree = ultrametrize(tree);
  const int32_t n = tree.n_species();

  Rng cat_rng = Rng::stream(master_seed, instance_index, Stream::Categories);
  bool skewed = false;
  switch (params.category_mode) {
    case CategoryMode::Uniform: skewed = false; break;
    case CategoryMode::Skewed: skewed = true; break;
    case CategoryMode::Mixed: skewed = cat_rng.next_below(2) == 1; break;
  }
  std::vector<int32_t> categories = assign_categories(cat_rng, n, skewed);

  Instance inst{std::move(tree), std::nullopt, std::move(categories), {}, {}, false, 0, {}};
  for (int w = 0; w < 2; ++w) {
    Rng srng = Rng::stream(master_seed, instance_index,
                           w == 0 ? Stream::Scenario1 : Stream::Scenario2);
    if (params.prob_mode == ProbMode::PerSpecies) {
      inst.per_species = true;
      inst.probs[static_cast<size_t>(w)] =
          species_probs_per_species(srng, inst.categories, params.intervals);
    } else {
      inst.category_probs[static_cast<size_t>(w)] = draw_scenario(srng, params.intervals);
      inst.probs[static_cast<size_t>(w)] =
          species_probs(inst.categories, inst.category_probs[static_cast<size_t>(w)]);
    }
  }

  Rng budget = Rng::stream(master_seed, instance_index, Stream::Budget);
  const double rho = draw_rho(budget, params.fixed_rho);
  inst.k = budget_from_rho(rho, n);

  inst.prov = Provenance{master_seed, instance_index, n_internal,  d_max, lambda_max,
                         skewed,      params.ultrametric, rho,     n,     inst.k};
  return inst;
}

Instance gen_fixed_tree_instance(uint64_t master_seed, uint64_t instance_index,
                                 const Phylogeny& base, std::vector<int32_t> categories,
                                 const CategoryIntervals& intervals, ProbMode prob_mode,
                                 const std::optional<double>& fixed_rho) {
  require(static_cast<int32_t>(categories.size()) == base.n_species(),
          "gen_fixed_tree_instance: one category per species expected");
  Instance inst{base, std::nullopt, std::move(categories), {}, {}, false, 0, {}};
  for (int w = 0; w < 2; ++w) {
    Rng srng = Rng::stream(master_seed, instance_index,
                           w == 0 ? Stream::Scenario1 : Stream::Scenario2);
    if (prob_mode == ProbMode::PerSpecies) {
      inst.per_species = true;
      inst.probs[static_cast<size_t>(w)] =
          species_probs_per_species(srng, inst.categories, intervals);
    } else {
      inst.category_probs[static_cast<size_t>(w)] = draw_scenario(srng, intervals);
      inst.probs[static_cast<size_t>(w)] =
          species_probs(inst.categories, inst.category_probs[static_cast<size_t>(w)]);
    }
  }
  Rng budget = Rng::stream(master_seed, instance_index, Stream::Budget);
  const double rho = draw_rho(budget, fixed_rho);
  inst.k = budget_from_rho(rho, base.n_species());
  inst.prov = Provenance{master_seed, instance_index, 0,   0, 0,
                         false,       false,          rho, base.n_species(), inst.k};
  return inst;
}

Instance gen_perturbation_instance(uint64_t master_seed, uint64_t instance_index,
                                   const Phylogeny& base, std::span<const double> probs,
                                   double fraction,
                                   const std::optional<double>& fixed_rho) {
  require(static_cast<int32_t>(probs.size()) == base.n_species(),
          "gen_perturbation_instance: one probability per species expected");
  Rng r1 = Rng::stream(master_seed, instance_index, Stream::Perturb1);
  Rng r2 = Rng::stream(master_seed, instance_index, Stream::Perturb2);
  Phylogeny t1 = perturb_lengths(r1, base, fraction);
  Phylogeny t2 = perturb_lengths(r2, base, fraction);
  std::vector<double> p(probs.begin(), probs.end());
  Instance inst{std::move(t1), std::move(t2), {}, {p, p}, {}, false, 0, {}};
  Rng budget = Rng::stream(master_seed, instance_index, Stream::Budget);
  const double rho = draw_rho(budget, fixed_rho);
  inst.k = budget_from_rho(rho, base.n_species());
  inst.prov = Provenance{master_seed, instance_index, 0,   0, 0,
                         false,       false,          rho, base.n_species(), inst.k};
  return inst;
}

Phylogeny perturb_lengths(Rng& rng, const Phylogeny& tree, double fraction) {
  require(fraction >= 0.0 && fraction < 1.0, "perturb_lengths: fraction outside [0,1)");
  std::vector<double> lengths(tree.branch_lengths().begin(), tree.branch_lengths().end());
  for (NodeId v = 0; v < tree.n_nodes(); ++v) {
    if (v == tree.root()) continue;
    const double l = lengths[static_cast<size_t>(v)];
    lengths[static_cast<size_t>(v)] = rng.next_real((1.0 - fraction) * l, (1.0 + fraction) * l);
  }
  return with_branch_lengths(tree, lengths);
}

}  // namespace epd
