#include "epd/epd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace epd {

namespace {

void check_probs(const Phylogeny& tree, std::span<const double> probs) {
  if (static_cast<int>(probs.size()) != tree.n_species())
    throw std::invalid_argument("probability vector has " + std::to_string(probs.size()) +
                                " entries for " + std::to_string(tree.n_species()) +
                                " species");
  for (size_t i = 0; i < probs.size(); ++i)
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
      throw std::invalid_argument("extinction probability of species " + std::to_string(i) +
                                  " is outside [0,1]");
}

// P_a per arc (indexed by terminal node; the root entry stays unused), via
// one bottom-up pass: a leaf arc carries its species' probability, an
// internal arc the product of its children's.
void arc_extinction_probs(const Phylogeny& tree, std::span<const double> probs,
                          std::vector<double>& out) {
  out.assign(static_cast<size_t>(tree.n_nodes()), 1.0);
  for (const NodeId v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      out[static_cast<size_t>(v)] = probs[static_cast<size_t>(tree.species_of(v))];
    } else {
      double prod = 1.0;
      for (const NodeId c : tree.children(v)) prod *= out[static_cast<size_t>(c)];
      out[static_cast<size_t>(v)] = prod;
    }
  }
}

// Summed in ascending node order so that the all-zeros probability vector
// reproduces total_pd() bit-for-bit.
double epd_from_arc_probs(const Phylogeny& tree, const std::vector<double>& arc_p) {
  double sum = 0.0;
  for (NodeId v = 0; v < tree.n_nodes(); ++v) {
    if (v == tree.root()) continue;
    sum += tree.branch_length(v) * (1.0 - arc_p[static_cast<size_t>(v)]);
  }
  return sum;
}

void check_species_set(const Phylogeny& tree, std::span<const int32_t> set,
                       const char* what) {
  for (const int32_t s : set)
    if (s < 0 || s >= tree.n_species())
      throw std::invalid_argument(std::string(what) + ": unknown species " +
                                  std::to_string(s));
}

}  // namespace

double epd(const Phylogeny& tree, std::span<const double> probs) {
  check_probs(tree, probs);
  std::vector<double> arc_p;
  arc_extinction_probs(tree, probs, arc_p);
  return epd_from_arc_probs(tree, arc_p);
}

double epd_with_protection(const Phylogeny& tree, std::span<const double> probs,
                           std::span<const int32_t> protect) {
  check_probs(tree, probs);
  check_species_set(tree, protect, "epd_with_protection");
  std::vector<double> adjusted(probs.begin(), probs.end());
  for (const int32_t s : protect) adjusted[static_cast<size_t>(s)] = 0.0;
  std::vector<double> arc_p;
  arc_extinction_probs(tree, adjusted, arc_p);
  return epd_from_arc_probs(tree, arc_p);
}

std::vector<double> hedge_scores(const Phylogeny& tree, std::span<const double> probs) {
  check_probs(tree, probs);
  std::vector<double> arc_p;
  arc_extinction_probs(tree, probs, arc_p);
  std::vector<double> scores(static_cast<size_t>(tree.n_species()), 0.0);
  for (int32_t s = 0; s < tree.n_species(); ++s) {
    double g = 0.0;
    for (const NodeId a : tree.root_path_arcs(s))
      g += tree.branch_length(a) * arc_p[static_cast<size_t>(a)];
    scores[static_cast<size_t>(s)] = g;
  }
  return scores;
}

GreedyResult greedy_protect(const Phylogeny& tree, std::span<const double> probs,
                            int32_t k) {
  check_probs(tree, probs);
  if (k < 0 || k > tree.n_species())
    throw std::invalid_argument("k = " + std::to_string(k) + " is outside [0, " +
                                std::to_string(tree.n_species()) + "]");

  GreedyResult res;
  std::vector<double> arc_p;
  arc_extinction_probs(tree, probs, arc_p);
  res.base_epd = epd_from_arc_probs(tree, arc_p);
  res.final_epd = res.base_epd;
  res.picks.reserve(static_cast<size_t>(k));
  res.gains.reserve(static_cast<size_t>(k));

  std::vector<char> taken(static_cast<size_t>(tree.n_species()), 0);
  for (int32_t round = 0; round < k; ++round) {
    int32_t best = -1;
    double best_gain = 0.0;
    for (int32_t s = 0; s < tree.n_species(); ++s) {
      if (taken[static_cast<size_t>(s)]) continue;
      double g = 0.0;
      for (const NodeId a : tree.root_path_arcs(s))
        g += tree.branch_length(a) * arc_p[static_cast<size_t>(a)];
      // Strictly-better-beyond-tolerance replacement: ties within
      // kGainTieRelTol keep the earlier (smaller) species index.
      if (best < 0 || (g > best_gain && g - best_gain > kGainTieRelTol * g)) {
        best = s;
        best_gain = g;
      }
    }
    taken[static_cast<size_t>(best)] = 1;
    // Protecting `best` makes every arc on its root path certain to survive.
    for (const NodeId a : tree.root_path_arcs(best)) arc_p[static_cast<size_t>(a)] = 0.0;
    res.picks.push_back(best);
    res.gains.push_back(best_gain);
    res.final_epd += best_gain;
  }
  return res;
}

BruteForceResult brute_force_protect(const Phylogeny& tree, std::span<const double> probs,
                                     int32_t k, int32_t cap) {
  check_probs(tree, probs);
  const int32_t n = tree.n_species();
  if (n > cap)
    throw std::invalid_argument("brute_force_protect: " + std::to_string(n) +
                                " species exceeds the cap of " + std::to_string(cap));
  if (k < 0 || k > n)
    throw std::invalid_argument("k = " + std::to_string(k) + " is outside [0, " +
                                std::to_string(n) + "]");

  BruteForceResult res;
  // First subset in lexicographic order; strict improvement keeps the
  // lexicographically smallest maximizer.
  std::vector<int32_t> subset(static_cast<size_t>(k));
  for (int32_t i = 0; i < k; ++i) subset[static_cast<size_t>(i)] = i;
  res.best = subset;
  res.epd = epd_with_protection(tree, probs, subset);
  while (k > 0) {
    // next k-combination of {0..n-1} in lexicographic order
    int32_t i = k - 1;
    while (i >= 0 && subset[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<size_t>(i)];
    for (int32_t j = i + 1; j < k; ++j)
      subset[static_cast<size_t>(j)] = subset[static_cast<size_t>(j - 1)] + 1;
    const double value = epd_with_protection(tree, probs, subset);
    if (value > res.epd) {
      res.epd = value;
      res.best = subset;
    }
  }
  return res;
}

double epd_by_outcome_enumeration(const Phylogeny& tree, std::span<const double> probs,
                                  int32_t cap) {
  check_probs(tree, probs);
  const int32_t n = tree.n_species();
  if (n > cap || n >= 63)
    throw std::invalid_argument("epd_by_outcome_enumeration: " + std::to_string(n) +
                                " species exceeds the cap of " + std::to_string(cap));

  // Per-arc survivor masks: arc a survives in outcome m iff m intersects
  // the species below a.
  std::vector<double> lengths;
  std::vector<uint64_t> masks;
  for (NodeId v = 0; v < tree.n_nodes(); ++v) {
    if (v == tree.root()) continue;
    uint64_t m = 0;
    for (const int32_t s : tree.clade(v)) m |= uint64_t{1} << s;
    lengths.push_back(tree.branch_length(v));
    masks.push_back(m);
  }

  double total = 0.0;
  const uint64_t outcomes = uint64_t{1} << n;
  for (uint64_t m = 0; m < outcomes; ++m) {
    double prob = 1.0;
    for (int32_t i = 0; i < n; ++i)
      prob *= (m >> i & 1) ? 1.0 - probs[static_cast<size_t>(i)]
                           : probs[static_cast<size_t>(i)];
    if (prob == 0.0) continue;
    double pd = 0.0;
    for (size_t a = 0; a < masks.size(); ++a)
      if (masks[a] & m) pd += lengths[a];
    total += prob * pd;
  }
  return total;
}

}  // namespace epd
