#pragma once
// Expected phylogenetic diversity (ePD) under independent species
// extinction, single-species protection scores, the greedy protection
// optimizer, and two exhaustive oracles used for verification.
//
// Throughout, `probs[i]` is the extinction probability of species i when
// unprotected, and protecting a species drops its extinction probability
// to 0. An arc survives iff at least one species below it survives, so
// with P_a = prod of probs over the arc's clade,
//     ePD = sum over arcs a of lambda_a * (1 - P_a).

#include <cstdint>
#include <span>
#include <vector>

#include "epd/phylogeny.hpp"

namespace epd {

// Two gains within this relative tolerance count as tied; ties go to the
// smallest species index so results are identical across runs and platforms.
inline constexpr double kGainTieRelTol = 1e-12;

// ePD with nothing protected. Throws std::invalid_argument when probs has
// the wrong dimension or an entry outside [0,1]. Result is in [0, total_pd].
double epd(const Phylogeny& tree, std::span<const double> probs);

// ePD with every species in `protect` made safe (extinction probability 0).
// Arcs whose clade meets `protect` contribute their full length. Throws on
// bad probs or unknown/duplicate-tolerant species ids out of range.
double epd_with_protection(const Phylogeny& tree, std::span<const double> probs,
                           std::span<const int32_t> protect);

// score[i] = epd_with_protection({i}) - epd(): the ePD increase bought by
// protecting species i alone. All scores are >= 0.
std::vector<double> hedge_scores(const Phylogeny& tree, std::span<const double> probs);

struct GreedyResult {
  std::vector<int32_t> picks;  // protected species, in selection order
  std::vector<double> gains;   // marginal ePD gain of each pick (non-increasing)
  double base_epd = 0.0;       // ePD before any protection
  double final_epd = 0.0;      // base_epd + sum of gains
};

// Picks k species one at a time, each round protecting the species with the
// largest marginal ePD gain (ties: smallest index, see kGainTieRelTol).
// For this objective the greedy set attains the true size-k maximum.
// Throws when k is outside [0, n_species].
GreedyResult greedy_protect(const Phylogeny& tree, std::span<const double> probs,
                            int32_t k);

struct BruteForceResult {
  std::vector<int32_t> best;  // lexicographically smallest maximizer, ascending
  double epd = 0.0;
};

// Exhaustive maximum of epd_with_protection over all size-k subsets, for
// cross-checking greedy_protect. Throws when n_species > cap.
BruteForceResult brute_force_protect(const Phylogeny& tree, std::span<const double> probs,
                                     int32_t k, int32_t cap = 20);

// ePD computed from first principles: sum over all 2^n survival outcomes of
// outcome probability times the PD of the surviving subset. Agrees with
// epd() to ~1e-9 relative; exponential, so throws when n_species > cap.
double epd_by_outcome_enumeration(const Phylogeny& tree, std::span<const double> probs,
                                  int32_t cap = 20);

}  // namespace epd
