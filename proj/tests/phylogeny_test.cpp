#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "epd/instance_gen.hpp"
#include "epd/phylogeny.hpp"
#include "epd/rng.hpp"

using namespace epd;

namespace {

// root with three leaf children, unit lengths
Phylogeny star3() {
  std::vector<NodeId> parent = {kNoNode, 0, 0, 0};
  std::vector<double> len = {0, 1, 1, 1};
  return build_tree(parent, len, {"A", "B", "C"});
}

// ((A,B),C) with lengths A:2 B:2 AB:3 C:5
Phylogeny cherry_plus_one() {
  std::vector<NodeId> parent = {kNoNode, 0, 0, 1, 1};
  std::vector<double> len = {0, 3, 5, 2, 2};
  return build_tree(parent, len, {"C", "A", "B"});
}

}  // namespace

TEST_CASE("star tree basics") {
  Phylogeny t = star3();
  CHECK(t.n_nodes() == 4);
  CHECK(t.n_arcs() == 3);
  CHECK(t.n_species() == 3);
  CHECK(t.root() == 0);
  CHECK(t.total_pd() == 3.0);
  CHECK(t.is_ultrametric(0.0));
  for (int32_t s = 0; s < 3; ++s) {
    NodeId v = t.species_node(s);
    CHECK(t.is_leaf(v));
    CHECK(t.species_of(v) == s);
    CHECK(t.clade(v).size() == 1);
    CHECK(t.clade(v)[0] == s);
    CHECK(t.root_path_arcs(s).size() == 1);
    CHECK(t.root_path_arcs(s)[0] == v);
    CHECK(t.dist_from_root(v) == 1.0);
    CHECK(t.depth(v) == 1);
  }
  CHECK(t.depth(t.root()) == 0);
  CHECK(!t.is_leaf(t.root()));
  // the root is not an arc, so it has no clade
  CHECK_THROWS_AS(t.clade(t.root()), std::invalid_argument);
}

TEST_CASE("nested tree: clades, paths, distances") {
  Phylogeny t = cherry_plus_one();
  CHECK(t.n_species() == 3);
  CHECK(t.total_pd() == 12.0);
  CHECK(t.is_ultrametric(1e-12));

  int32_t a = -1, b = -1, c = -1;
  for (int32_t s = 0; s < 3; ++s) {
    if (t.label(s) == "A") a = s;
    if (t.label(s) == "B") b = s;
    if (t.label(s) == "C") c = s;
  }
  REQUIRE(a >= 0);
  REQUIRE(b >= 0);
  REQUIRE(c >= 0);

  CHECK(t.root_path_length(a) == 5.0);
  CHECK(t.root_path_length(c) == 5.0);
  CHECK(t.root_path_arcs(a).size() == 2);
  CHECK(t.root_path_arcs(c).size() == 1);

  // the cherry's internal arc holds exactly {A,B}
  NodeId ab = t.parent(t.species_node(a));
  REQUIRE(ab != t.root());
  auto clade = t.clade(ab);
  std::set<int32_t> got(clade.begin(), clade.end());
  CHECK(got == std::set<int32_t>{a, b});
  CHECK(t.min_species(ab) == std::min(a, b));

  // root-first order: the path to A starts at the cherry arc
  auto path = t.root_path_arcs(a);
  CHECK(path[0] == ab);
  CHECK(path[1] == t.species_node(a));
}

TEST_CASE("postorder visits children before parents") {
  Rng rng(5);
  Phylogeny t = gen_topology(rng, 40, 4, 10);
  std::vector<bool> seen(static_cast<size_t>(t.n_nodes()), false);
  for (NodeId v : t.postorder()) {
    for (NodeId c : t.children(v)) CHECK(seen[static_cast<size_t>(c)]);
    seen[static_cast<size_t>(v)] = true;
  }
  CHECK(t.postorder().size() == static_cast<size_t>(t.n_nodes()));
  CHECK(t.postorder().back() == t.root());
}

TEST_CASE("clade of an internal arc is the union of its children's clades") {
  Rng rng(6);
  Phylogeny t = gen_topology(rng, 30, 3, 8);
  for (NodeId v = 0; v < t.n_nodes(); ++v) {
    if (t.is_leaf(v) || v == t.root()) continue;
    std::set<int32_t> merged;
    for (NodeId c : t.children(v)) {
      auto sub = t.clade(c);
      merged.insert(sub.begin(), sub.end());
    }
    auto own = t.clade(v);
    CHECK(merged == std::set<int32_t>(own.begin(), own.end()));
    CHECK(*merged.begin() == t.min_species(v));
  }
}

TEST_CASE("root paths are consistent with parent pointers") {
  Rng rng(7);
  Phylogeny t = gen_topology(rng, 25, 4, 9);
  for (int32_t s = 0; s < t.n_species(); ++s) {
    auto path = t.root_path_arcs(s);
    REQUIRE(!path.empty());
    CHECK(t.parent(path[0]) == t.root());
    CHECK(path.back() == t.species_node(s));
    double length = 0.0;
    for (size_t i = 0; i < path.size(); ++i) {
      if (i > 0) CHECK(t.parent(path[i]) == path[i - 1]);
      length += t.branch_length(path[i]);
    }
    CHECK(t.root_path_length(s) == doctest::Approx(length).epsilon(1e-12));
  }
}

TEST_CASE("pd_of_subset: corner cases and monotonicity") {
  Phylogeny t = cherry_plus_one();
  std::vector<int32_t> all = {0, 1, 2};
  CHECK(t.pd_of_subset(all) == t.total_pd());
  CHECK(t.pd_of_subset({}) == 0.0);

  Rng rng(8);
  Phylogeny r = gen_topology(rng, 20, 4, 12);
  std::vector<int32_t> subset;
  double prev = 0.0;
  for (int32_t s = 0; s < r.n_species(); ++s) {
    subset.push_back(s);
    double pd = r.pd_of_subset(subset);
    CHECK(pd >= prev);
    prev = pd;
  }
  CHECK(prev == r.total_pd());
}

TEST_CASE("pd_of_subset matches a naive arc walk") {
  Rng rng(9);
  Phylogeny t = gen_topology(rng, 15, 3, 7);
  Rng pick(10);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int32_t> subset;
    for (int32_t s = 0; s < t.n_species(); ++s)
      if (pick.next_below(2) == 1) subset.push_back(s);
    double naive = 0.0;
    for (NodeId v = 0; v < t.n_nodes(); ++v) {
      if (v == t.root()) continue;
      auto clade = t.clade(v);
      bool alive = false;
      for (int32_t s : subset)
        alive |= std::find(clade.begin(), clade.end(), s) != clade.end();
      if (alive) naive += t.branch_length(v);
    }
    CHECK(t.pd_of_subset(subset) == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("single-species degenerate tree is allowed") {
  std::vector<NodeId> parent = {kNoNode, 0};
  std::vector<double> len = {0, 10};
  Phylogeny t = build_tree(parent, len, {"only"});
  CHECK(t.n_species() == 1);
  CHECK(t.total_pd() == 10.0);
  CHECK(t.label(0) == "only");
}

TEST_CASE("build_tree rejects malformed input") {
  std::vector<std::string> two = {"A", "B"};
  // no root
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{1, 0}, std::vector<double>{1, 1}, two),
                  std::invalid_argument);
  // two roots
  CHECK_THROWS_AS(
      build_tree(std::vector<NodeId>{kNoNode, kNoNode}, std::vector<double>{0, 0}, two),
      std::invalid_argument);
  // parent out of range
  CHECK_THROWS_AS(
      build_tree(std::vector<NodeId>{kNoNode, 9, 0}, std::vector<double>{0, 1, 1}, two),
      std::invalid_argument);
  // cycle disconnected from the root
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 3, 2},
                             std::vector<double>{0, 1, 1, 1}, two),
                  std::invalid_argument);
  // unary internal node
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 0, 1},
                             std::vector<double>{0, 1, 1, 1}, two),
                  std::invalid_argument);
  // unary root above a real subtree
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 1, 1},
                             std::vector<double>{0, 1, 1, 1}, two),
                  std::invalid_argument);
  // negative length
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 0},
                             std::vector<double>{0, -1, 1}, two),
                  std::invalid_argument);
  // non-finite length
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 0},
                             std::vector<double>{0, std::nan(""), 1}, two),
                  std::invalid_argument);
  // duplicate labels
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 0},
                             std::vector<double>{0, 1, 1},
                             std::vector<std::string>{"A", "A"}),
                  std::invalid_argument);
  // label count mismatch
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 0},
                             std::vector<double>{0, 1, 1},
                             std::vector<std::string>{"A"}),
                  std::invalid_argument);
  // empty label
  CHECK_THROWS_AS(build_tree(std::vector<NodeId>{kNoNode, 0, 0},
                             std::vector<double>{0, 1, 1},
                             std::vector<std::string>{"A", ""}),
                  std::invalid_argument);
}

TEST_CASE("with_branch_lengths keeps topology and labels") {
  Phylogeny t = cherry_plus_one();
  std::vector<double> lens(t.branch_lengths().begin(), t.branch_lengths().end());
  for (auto& l : lens) l *= 2;
  lens[static_cast<size_t>(t.root())] = 0.0;
  Phylogeny u = with_branch_lengths(t, lens);
  CHECK(u.total_pd() == 24.0);
  CHECK(u.n_species() == t.n_species());
  for (int32_t s = 0; s < t.n_species(); ++s) CHECK(u.label(s) == t.label(s));
  CHECK(u.root() == t.root());
}

TEST_CASE("ultrametrize levels every leaf and is idempotent") {
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    Phylogeny t = gen_topology(rng, 12, 4, 9);
    Phylogeny u = ultrametrize(t);
    CHECK(u.is_ultrametric(1e-9));
    // internal arcs untouched, leaf arcs only ever grow
    for (NodeId v = 0; v < t.n_nodes(); ++v) {
      if (v == t.root()) continue;
      if (t.is_leaf(v))
        CHECK(u.branch_length(v) >= t.branch_length(v));
      else
        CHECK(u.branch_length(v) == t.branch_length(v));
    }
    Phylogeny uu = ultrametrize(u);
    for (NodeId v = 0; v < u.n_nodes(); ++v)
      CHECK(uu.branch_length(v) == u.branch_length(v));
  }
}
