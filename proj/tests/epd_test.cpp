#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "epd/epd.hpp"
#include "epd/instance_gen.hpp"
#include "epd/newick.hpp"
#include "epd/rng.hpp"
#include "epd/species_table.hpp"

using namespace epd;

namespace {

const std::string kData = EPD_DATA_DIR;

struct Example8 {
  Phylogeny tree;
  std::vector<double> probs;
};

Example8 example8() {
  Phylogeny t = read_newick_file(kData + "/example8.nwk");
  SpeciesTable table = read_species_table(kData + "/example8_probs.csv");
  auto probs = probs_for_tree(table, t);
  return {std::move(t), std::move(probs[0])};
}

std::vector<double> random_probs(Rng& rng, int n) {
  std::vector<double> p(static_cast<size_t>(n));
  for (auto& v : p) v = rng.next_unit();
  return p;
}

}  // namespace

TEST_CASE("certain extinction and certain survival") {
  Rng rng(41);
  Phylogeny t = gen_topology(rng, 20, 4, 15);
  std::vector<double> zeros(static_cast<size_t>(t.n_species()), 0.0);
  std::vector<double> ones(static_cast<size_t>(t.n_species()), 1.0);
  CHECK(epd::epd(t, zeros) == t.total_pd());  // bit-exact by construction
  CHECK(epd::epd(t, ones) == 0.0);
}

TEST_CASE("single species") {
  Phylogeny t = parse_newick("(A:10);");
  std::vector<double> p = {0.3};
  CHECK(epd::epd(t, p) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(epd::epd(t, p) == epd_by_outcome_enumeration(t, p));
}

TEST_CASE("eight-species example: ePD, scores, greedy") {
  auto [t, p] = example8();
  REQUIRE(t.n_species() == 8);
  CHECK(t.total_pd() == 75.0);
  CHECK(epd::epd(t, p) == doctest::Approx(30.8416).epsilon(1e-9));

  // single-protection scores, species in label order "1".."8"
  std::vector<double> expected = {10.7520, 6.5520, 4.0760, 5.7464,
                                  3.2464,  8.0064, 5.0064, 6.0000};
  auto scores = hedge_scores(t, p);
  REQUIRE(scores.size() == 8);
  for (size_t i = 0; i < 8; ++i)
    CHECK(scores[i] == doctest::Approx(expected[i]).epsilon(1e-9));

  GreedyResult g = greedy_protect(t, p, 3);
  REQUIRE(g.picks.size() == 3);
  CHECK(t.label(g.picks[0]) == "1");
  CHECK(t.label(g.picks[1]) == "6");
  CHECK(t.label(g.picks[2]) == "8");
  CHECK(g.gains[0] == doctest::Approx(10.7520).epsilon(1e-9));
  CHECK(g.gains[1] == doctest::Approx(8.0064).epsilon(1e-9));
  CHECK(g.gains[2] == doctest::Approx(6.0000).epsilon(1e-9));
  CHECK(g.base_epd == doctest::Approx(30.8416).epsilon(1e-9));
  CHECK(g.final_epd == doctest::Approx(55.6).epsilon(1e-9));
  // the identity final = base + sum(gains) holds exactly, by construction
  double acc = g.base_epd;
  for (double gain : g.gains) acc += gain;
  CHECK(g.final_epd == acc);
}

TEST_CASE("protection makes the protected clade certain") {
  auto [t, p] = example8();
  std::vector<int32_t> all(8);
  for (int32_t i = 0; i < 8; ++i) all[static_cast<size_t>(i)] = i;
  CHECK(epd_with_protection(t, p, all) == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(epd_with_protection(t, p, {}) == epd::epd(t, p));
}

TEST_CASE("scores equal the two-ePD difference") {
  Rng rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(3 + rng.next_below(12)), 3, 9);
    auto p = random_probs(rng, t.n_species());
    auto scores = hedge_scores(t, p);
    double base = epd::epd(t, p);
    for (int32_t s = 0; s < t.n_species(); ++s) {
      std::vector<int32_t> one = {s};
      double direct = epd_with_protection(t, p, one) - base;
      CHECK(scores[static_cast<size_t>(s)] ==
            doctest::Approx(direct).epsilon(1e-9));
      CHECK(scores[static_cast<size_t>(s)] >= 0.0);
    }
  }
}

TEST_CASE("greedy boundaries: k = 0 and k = n") {
  auto [t, p] = example8();
  GreedyResult none = greedy_protect(t, p, 0);
  CHECK(none.picks.empty());
  CHECK(none.final_epd == none.base_epd);

  GreedyResult all = greedy_protect(t, p, 8);
  CHECK(all.picks.size() == 8);
  CHECK(all.final_epd == doctest::Approx(t.total_pd()).epsilon(1e-9));
  // every species picked exactly once
  std::vector<int32_t> sorted = all.picks;
  std::sort(sorted.begin(), sorted.end());
  for (int32_t i = 0; i < 8; ++i) CHECK(sorted[static_cast<size_t>(i)] == i);
}

TEST_CASE("greedy gains never increase") {
  Rng rng(44);
  for (int rep = 0; rep < 10; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(5 + rng.next_below(30)), 4, 12);
    auto p = random_probs(rng, t.n_species());
    int32_t k = std::min<int32_t>(t.n_species(), 8);
    GreedyResult g = greedy_protect(t, p, k);
    for (size_t i = 1; i < g.gains.size(); ++i) CHECK(g.gains[i] <= g.gains[i - 1]);
  }
}

TEST_CASE("first greedy pick is the best single score") {
  Rng rng(45);
  for (int rep = 0; rep < 10; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(3 + rng.next_below(10)), 3, 9);
    auto p = random_probs(rng, t.n_species());
    auto scores = hedge_scores(t, p);
    GreedyResult g = greedy_protect(t, p, 1);
    REQUIRE(g.picks.size() == 1);
    // recompute the argmax with the same tie rule: strictly-better wins
    int32_t best = 0;
    for (int32_t s = 1; s < t.n_species(); ++s) {
      double a = scores[static_cast<size_t>(s)], b = scores[static_cast<size_t>(best)];
      if (a > b && a - b > kGainTieRelTol * a) best = s;
    }
    CHECK(g.picks[0] == best);
    CHECK(g.gains[0] == doctest::Approx(scores[static_cast<size_t>(best)]).epsilon(1e-12));
  }
}

TEST_CASE("exact ties go to the smallest species index") {
  // four identical leaves: every pick is a tie
  Phylogeny t = parse_newick("(A:5,B:5,C:5,D:5);");
  std::vector<double> p(4, 0.5);
  GreedyResult g = greedy_protect(t, p, 2);
  REQUIRE(g.picks.size() == 2);
  CHECK(g.picks[0] == 0);
  CHECK(g.picks[1] == 1);
}

TEST_CASE("protection can only help, never hurt") {
  Rng rng(46);
  for (int rep = 0; rep < 10; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(4 + rng.next_below(12)), 3, 8);
    auto p = random_probs(rng, t.n_species());
    std::vector<int32_t> grow;
    double prev = epd::epd(t, p);
    for (int32_t s = 0; s < t.n_species(); ++s) {
      grow.push_back(s);
      double cur = epd_with_protection(t, p, grow);
      CHECK(cur >= prev);  // exact: zeroing factors shrinks every product
      prev = cur;
    }
  }
}

TEST_CASE("raising an extinction probability cannot raise ePD") {
  Rng rng(47);
  Phylogeny t = gen_topology(rng, 10, 3, 9);
  auto p = random_probs(rng, t.n_species());
  double base = epd::epd(t, p);
  for (int32_t s = 0; s < t.n_species(); ++s) {
    auto bumped = p;
    size_t i = static_cast<size_t>(s);
    bumped[i] = std::min(1.0, bumped[i] + 0.25);
    CHECK(epd::epd(t, bumped) <= base);
  }
}

TEST_CASE("marginal gains are submodular") {
  Rng rng(48);
  for (int rep = 0; rep < 8; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(3 + rng.next_below(8)), 3, 9);
    int n = t.n_species();
    auto p = random_probs(rng, n);
    // S subset of S', i outside S': gain at S >= gain at S'
    std::vector<int32_t> small, large;
    for (int32_t s = 0; s < n; ++s) {
      uint64_t r = rng.next_below(3);
      if (r == 0) small.push_back(s);
      if (r <= 1) large.push_back(s);
    }
    for (int32_t i = 0; i < n; ++i) {
      if (std::find(large.begin(), large.end(), i) != large.end()) continue;
      auto with = [&](std::vector<int32_t> set) {
        double before = epd_with_protection(t, p, set);
        set.push_back(i);
        return epd_with_protection(t, p, set) - before;
      };
      CHECK(with(small) >= with(large) - 1e-9 * t.total_pd());
    }
  }
}

TEST_CASE("closed form matches full outcome enumeration") {
  Rng rng(49);
  for (int rep = 0; rep < 30; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(2 + rng.next_below(5)), 3, 9);
    if (t.n_species() > 14) continue;
    auto p = random_probs(rng, t.n_species());
    if (rng.next_below(4) == 0) {  // exercise the exact-0/1 paths too
      p[0] = 0.0;
      p[p.size() - 1] = 1.0;
    }
    double closed = epd::epd(t, p);
    double enumed = epd_by_outcome_enumeration(t, p);
    CHECK(closed == doctest::Approx(enumed).epsilon(1e-9));
  }
}

TEST_CASE("greedy matches exhaustive search on small instances") {
  Rng rng(50);
  for (int rep = 0; rep < 20; ++rep) {
    Phylogeny t = gen_topology(rng, static_cast<int32_t>(2 + rng.next_below(5)), 3, 9);
    if (t.n_species() > 12) continue;
    auto p = random_probs(rng, t.n_species());
    int32_t k = static_cast<int32_t>(rng.next_below(
        static_cast<uint64_t>(std::min(t.n_species(), 4)) + 1));
    GreedyResult g = greedy_protect(t, p, k);
    BruteForceResult b = brute_force_protect(t, p, k);
    CHECK(g.final_epd == doctest::Approx(b.epd).epsilon(1e-9));
  }
}

TEST_CASE("exhaustive k = 1 agrees with the best single score") {
  Rng rng(51);
  Phylogeny t = gen_topology(rng, 5, 3, 9);
  auto p = random_probs(rng, t.n_species());
  auto scores = hedge_scores(t, p);
  BruteForceResult b = brute_force_protect(t, p, 1);
  REQUIRE(b.best.size() == 1);
  double best = *std::max_element(scores.begin(), scores.end());
  CHECK(scores[static_cast<size_t>(b.best[0])] == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("input validation") {
  auto [t, p] = example8();
  std::vector<double> short_p(p.begin(), p.end() - 1);
  CHECK_THROWS_AS(epd::epd(t, short_p), std::invalid_argument);
  auto bad = p;
  bad[0] = 1.5;
  CHECK_THROWS_AS(epd::epd(t, bad), std::invalid_argument);
  bad[0] = -0.1;
  CHECK_THROWS_AS(epd::epd(t, bad), std::invalid_argument);
  bad[0] = std::nan("");
  CHECK_THROWS_AS(epd::epd(t, bad), std::invalid_argument);
  std::vector<int32_t> out_of_range = {8};
  CHECK_THROWS_AS(epd_with_protection(t, p, out_of_range), std::invalid_argument);
  CHECK_THROWS_AS(greedy_protect(t, p, -1), std::invalid_argument);
  CHECK_THROWS_AS(greedy_protect(t, p, 9), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_protect(t, p, 2, /*cap=*/4), std::invalid_argument);
  CHECK_THROWS_AS(epd_by_outcome_enumeration(t, p, /*cap=*/4), std::invalid_argument);
}
