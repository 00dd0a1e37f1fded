#include "epd/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "epd/epd.hpp"

namespace epd {

GapPair gaps(double epd11, double epd12, double epd21, double epd22) {
  if (!(epd11 > 0.0) || !(epd22 > 0.0))
    throw std::invalid_argument("gaps: the optimal ePD of each scenario must be positive");
  const auto one_gap = [](double own, double swapped, const char* which) {
    if (swapped - own > 1e-9 * own)
      throw std::logic_error(std::string("gaps: ") + which +
                             " exceeds the scenario's optimal ePD; the optimal set was "
                             "not optimal");
    return std::max(0.0, (own - swapped) / own);
  };
  return {one_gap(epd11, epd12, "epd12"), one_gap(epd22, epd21, "epd21")};
}

double dissimilarity(std::span<const int32_t> a, std::span<const int32_t> b) {
  size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const size_t union_size = a.size() + b.size() - common;
  if (union_size == 0) return 0.0;
  const size_t sym_diff = a.size() + b.size() - 2 * common;
  return static_cast<double>(sym_diff) / static_cast<double>(union_size);
}

InstanceResult solve_instance(const Instance& inst) {
  const Phylogeny& t1 = inst.tree;
  const Phylogeny& t2 = inst.scenario_tree(1);

  InstanceResult r;
  r.index = inst.prov.instance_index;
  r.n_species = t1.n_species();
  r.k = inst.k;
  r.per_species = inst.per_species;
  r.category_probs = inst.category_probs;
  r.prov = inst.prov;
  r.total_pd1 = t1.total_pd();
  r.total_pd2 = t2.total_pd();
  r.base_epd1 = epd(t1, inst.probs[0]);
  r.base_epd2 = epd(t2, inst.probs[1]);

  GreedyResult g1 = greedy_protect(t1, inst.probs[0], inst.k);
  GreedyResult g2 = greedy_protect(t2, inst.probs[1], inst.k);
  r.s1 = std::move(g1.picks);
  r.s2 = std::move(g2.picks);
  std::sort(r.s1.begin(), r.s1.end());
  std::sort(r.s2.begin(), r.s2.end());

  // All four cross values from the same code path, so that comparisons
  // between them are apples to apples.
  r.epd11 = epd_with_protection(t1, inst.probs[0], r.s1);
  r.epd12 = epd_with_protection(t1, inst.probs[0], r.s2);
  r.epd21 = epd_with_protection(t2, inst.probs[1], r.s1);
  r.epd22 = epd_with_protection(t2, inst.probs[1], r.s2);

  const GapPair g = gaps(r.epd11, r.epd12, r.epd21, r.epd22);
  r.gap1 = g.gap1;
  r.gap2 = g.gap2;
  r.dissimilarity = dissimilarity(r.s1, r.s2);
  {
    size_t i = 0, j = 0;
    int32_t common = 0;
    while (i < r.s1.size() && j < r.s2.size()) {
      if (r.s1[i] == r.s2[j]) ++common, ++i, ++j;
      else if (r.s1[i] < r.s2[j]) ++i;
      else ++j;
    }
    r.intersection_size = common;
  }

  if (!inst.categories.empty()) {
    for (const int32_t c : inst.categories) ++r.species_by_cat[static_cast<size_t>(c - 1)];
    for (const int32_t s : r.s1)
      ++r.protected_by_cat1[static_cast<size_t>(inst.categories[static_cast<size_t>(s)] - 1)];
    for (const int32_t s : r.s2)
      ++r.protected_by_cat2[static_cast<size_t>(inst.categories[static_cast<size_t>(s)] - 1)];
  }
  return r;
}

namespace {

Instance make_instance(const ExperimentConfig& cfg, uint64_t master_seed, uint64_t index) {
  switch (cfg.family) {
    case Family::RandomNonUltrametric:
    case Family::RandomUltrametric: {
      GenParams params;
      params.intervals = cfg.intervals;
      params.category_mode = cfg.category_mode;
      params.prob_mode = cfg.prob_mode;
      params.ultrametric = cfg.family == Family::RandomUltrametric;
      params.fixed_rho = cfg.fixed_rho;
      return gen_instance(master_seed, index, params);
    }
    case Family::FixedTreeScenarios:
      return gen_fixed_tree_instance(master_seed, index, *cfg.base_tree,
                                     cfg.base_categories, cfg.intervals, cfg.prob_mode,
                                     cfg.fixed_rho);
    case Family::FixedTreePerturbation:
      return gen_perturbation_instance(master_seed, index, *cfg.base_tree, cfg.base_probs,
                                       cfg.perturb_fraction, cfg.fixed_rho);
  }
  throw std::invalid_argument("run_batch: unknown experiment family");
}

void check_config(const ExperimentConfig& cfg) {
  if (cfg.instances < 1)
    throw std::invalid_argument("run_batch: need at least one instance");
  const bool fixed = cfg.family == Family::FixedTreeScenarios ||
                     cfg.family == Family::FixedTreePerturbation;
  if (fixed && cfg.base_tree == nullptr)
    throw std::invalid_argument("run_batch: this experiment family needs a base tree");
  if (cfg.family == Family::FixedTreeScenarios &&
      static_cast<int32_t>(cfg.base_categories.size()) != cfg.base_tree->n_species())
    throw std::invalid_argument("run_batch: one category per species expected");
  if (cfg.family == Family::FixedTreePerturbation &&
      static_cast<int32_t>(cfg.base_probs.size()) != cfg.base_tree->n_species())
    throw std::invalid_argument("run_batch: one probability per species expected");
}

}  // namespace

std::vector<InstanceResult> run_batch(const ExperimentConfig& cfg, uint64_t master_seed) {
  check_config(cfg);
  const int64_t n = cfg.instances;
  std::vector<InstanceResult> results(static_cast<size_t>(n));

  const int64_t max_threads = std::max(1, cfg.threads);
  const int64_t n_workers = std::min<int64_t>(max_threads, n);
  if (n_workers <= 1) {
    for (int64_t i = 0; i < n; ++i)
      results[static_cast<size_t>(i)] =
          solve_instance(make_instance(cfg, master_seed, static_cast<uint64_t>(i)));
    return results;
  }

  std::atomic<int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    try {
      while (true) {
        const int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) break;
        results[static_cast<size_t>(i)] =
            solve_instance(make_instance(cfg, master_seed, static_cast<uint64_t>(i)));
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      next.store(n, std::memory_order_relaxed);  // stop the other workers
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_workers));
  for (int64_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

BatchStats summarize(std::span<const InstanceResult> results) {
  if (results.empty()) throw std::invalid_argument("summarize: empty result list");

  BatchStats st;
  st.instances = static_cast<int64_t>(results.size());
  st.gap_count = 2 * st.instances;
  st.min_species = results.front().n_species;
  st.max_species = results.front().n_species;

  double sum = 0.0;
  size_t argmax_pos = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    const InstanceResult& r = results[i];
    sum += r.gap1 + r.gap2;
    const double inst_max = std::max(r.gap1, r.gap2);
    if (inst_max > st.max_gap) {
      st.max_gap = inst_max;
      argmax_pos = i;
    }
    st.max_dissimilarity = std::max(st.max_dissimilarity, r.dissimilarity);
    st.min_species = std::min(st.min_species, r.n_species);
    st.max_species = std::max(st.max_species, r.n_species);
    if (r.s1.empty() && r.s2.empty()) ++st.empty_set_pairs;
  }
  st.mean_gap = sum / static_cast<double>(st.gap_count);
  double sq = 0.0;
  for (const InstanceResult& r : results) {
    sq += (r.gap1 - st.mean_gap) * (r.gap1 - st.mean_gap);
    sq += (r.gap2 - st.mean_gap) * (r.gap2 - st.mean_gap);
  }
  st.std_gap = std::sqrt(sq / static_cast<double>(st.gap_count));
  st.argmax = results[argmax_pos];
  st.argmax_index = results[argmax_pos].index;
  st.dissim_at_max_gap = results[argmax_pos].dissimilarity;
  return st;
}

}  // namespace epd
