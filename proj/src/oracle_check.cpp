#include "epd/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "epd/epd.hpp"
#include "epd/instance_gen.hpp"
#include "epd/phylogeny.hpp"
#include "epd/rng.hpp"

namespace epd {

std::string OracleReport::describe() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "trees = %lld\n"
                "epd vs outcome enumeration: %lld checks, %lld failures, max rel err %.3g\n"
                "greedy vs exhaustive search: %lld checks, %lld failures, max rel err %.3g\n",
                static_cast<long long>(trees), static_cast<long long>(epd_checks),
                static_cast<long long>(epd_failures), max_epd_rel_err,
                static_cast<long long>(greedy_checks),
                static_cast<long long>(greedy_failures), max_greedy_rel_err);
  return buf;
}

namespace {

double rel_err(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

}  // namespace

OracleReport run_oracle_checks(uint64_t seed, int64_t trees, int32_t max_species,
                               int32_t max_k, double rel_tol) {
  OracleReport rep;
  for (int64_t t = 0; t < trees; ++t) {
    Rng rng = Rng::stream(seed, static_cast<uint64_t>(t), Stream::Topology);
    // Redraw until the tree is small enough for 2^n enumeration.
    Phylogeny tree = [&] {
      while (true) {
        const int32_t n_internal = rng.next_int(1, 6);
        const int32_t d_max = rng.next_int(2, 3);
        const int32_t lambda_max = rng.next_int(1, 12);
        Phylogeny cand = gen_topology(rng, n_internal, d_max, lambda_max);
        if (cand.n_species() <= max_species) return cand;
      }
    }();
    const int32_t n = tree.n_species();

    Rng prng = Rng::stream(seed, static_cast<uint64_t>(t), Stream::Scenario1);
    std::vector<double> probs(static_cast<size_t>(n));
    for (auto& p : probs) {
      // Mostly uniform draws, with occasional exact 0/1 edge values.
      if (prng.next_below(8) == 0)
        p = static_cast<double>(prng.next_below(2));
      else
        p = prng.next_unit();
    }

    ++rep.trees;
    const double closed_form = epd(tree, probs);
    const double enumerated = epd_by_outcome_enumeration(tree, probs);
    ++rep.epd_checks;
    const double e1 = rel_err(closed_form, enumerated);
    rep.max_epd_rel_err = std::max(rep.max_epd_rel_err, e1);
    if (e1 > rel_tol) ++rep.epd_failures;

    Rng krng = Rng::stream(seed, static_cast<uint64_t>(t), Stream::Budget);
    const int32_t k =
        static_cast<int32_t>(krng.next_below(static_cast<uint64_t>(std::min(max_k, n)) + 1));
    const GreedyResult greedy = greedy_protect(tree, probs, k);
    const BruteForceResult brute = brute_force_protect(tree, probs, k);
    ++rep.greedy_checks;
    const double e2 = rel_err(greedy.final_epd, brute.epd);
    rep.max_greedy_rel_err = std::max(rep.max_greedy_rel_err, e2);
    if (e2 > rel_tol || greedy.final_epd < brute.epd - rel_tol * brute.epd)
      ++rep.greedy_failures;
  }
  return rep;
}

}  // namespace epd
