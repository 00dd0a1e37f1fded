#pragma once
// Exhaustive cross-checks on small random instances: the closed-form ePD
// against full 2^n outcome enumeration, and the greedy optimizer against
// exhaustive size-k subset search. Used by the `check` subcommand and the
// acceptance suite.

#include <cstdint>
#include <string>

namespace epd {

struct OracleReport {
  int64_t trees = 0;
  int64_t epd_checks = 0;
  int64_t epd_failures = 0;
  double max_epd_rel_err = 0.0;
  int64_t greedy_checks = 0;
  int64_t greedy_failures = 0;
  double max_greedy_rel_err = 0.0;
  bool ok() const { return trees > 0 && epd_failures == 0 && greedy_failures == 0; }
  std::string describe() const;
};

// Generates `trees` seeded random trees with at most max_species leaves
// (and random probabilities, occasionally snapped to exactly 0 or 1), then
// checks epd() against epd_by_outcome_enumeration() and greedy_protect()
// against brute_force_protect() with a random k <= max_k, both at
// `rel_tol` relative tolerance.
OracleReport run_oracle_checks(uint64_t seed, int64_t trees, int32_t max_species = 12,
                               int32_t max_k = 4, double rel_tol = 1e-9);

}  // namespace epd
