#include "epd/phylogeny.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace epd {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

std::span<const int32_t> Phylogeny::clade(NodeId arc) const {
  if (arc < 0 || arc >= n_nodes()) fail("clade: unknown arc " + std::to_string(arc));
  if (arc == root_) fail("clade: the root has no incoming arc");
  return {species_dfs_.data() + clade_begin_[static_cast<size_t>(arc)],
          species_dfs_.data() + clade_end_[static_cast<size_t>(arc)]};
}

std::span<const NodeId> Phylogeny::root_path_arcs(int32_t species) const {
  if (species < 0 || species >= n_species())
    fail("root_path_arcs: unknown species " + std::to_string(species));
  return {path_arcs_.data() + path_off_[static_cast<size_t>(species)],
          path_arcs_.data() + path_off_[static_cast<size_t>(species) + 1]};
}

double Phylogeny::pd_of_subset(std::span<const int32_t> survivors) const {
  // Count survivors per clade through the DFS layout: each clade is a
  // contiguous range of species_dfs_, so a prefix sum answers "does any
  // survivor fall below this arc" in O(1) per arc.
  std::vector<int32_t> prefix(species_dfs_.size() + 1, 0);
  for (int32_t s : survivors) {
    if (s < 0 || s >= n_species())
      fail("pd_of_subset: unknown species " + std::to_string(s));
    prefix[static_cast<size_t>(species_dfs_pos_[static_cast<size_t>(s)]) + 1] = 1;
  }
  for (size_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];
  double pd = 0.0;
  for (NodeId v = 0; v < n_nodes(); ++v) {
    if (v == root_) continue;
    if (prefix[static_cast<size_t>(clade_end_[static_cast<size_t>(v)])] >
        prefix[static_cast<size_t>(clade_begin_[static_cast<size_t>(v)])])
      pd += length_[static_cast<size_t>(v)];
  }
  return pd;
}

bool Phylogeny::is_ultrametric(double tol) const {
  if (tol < 0) fail("is_ultrametric: tol must be >= 0");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (NodeId leaf : species_node_) {
    const double d = dist_root_[static_cast<size_t>(leaf)];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return n_species() == 0 || hi - lo <= tol;
}

void Phylogeny::build_index() {
  const size_t n = parent_.size();

  // children in CSR form, ordered by node id
  child_off_.assign(n + 1, 0);
  for (size_t v = 0; v < n; ++v)
    if (parent_[v] != kNoNode) ++child_off_[static_cast<size_t>(parent_[v]) + 1];
  for (size_t i = 1; i <= n; ++i) child_off_[i] += child_off_[i - 1];
  children_.resize(n - 1);
  {
    std::vector<int32_t> cursor(child_off_.begin(), child_off_.end() - 1);
    for (size_t v = 0; v < n; ++v)
      if (parent_[v] != kNoNode)
        children_[static_cast<size_t>(cursor[static_cast<size_t>(parent_[v])]++)] =
            static_cast<NodeId>(v);
  }

  // species = leaves in ascending node id order
  node_species_.assign(n, -1);
  species_node_.clear();
  for (size_t v = 0; v < n; ++v) {
    if (child_off_[v] == child_off_[v + 1]) {
      node_species_[v] = static_cast<int32_t>(species_node_.size());
      species_node_.push_back(static_cast<NodeId>(v));
    }
  }

  // iterative DFS from the root: depth, distances, DFS leaf layout, postorder
  depth_.assign(n, 0);
  dist_root_.assign(n, 0.0);
  clade_begin_.assign(n, 0);
  clade_end_.assign(n, 0);
  min_species_.assign(n, std::numeric_limits<int32_t>::max());
  species_dfs_.clear();
  species_dfs_.reserve(species_node_.size());
  postorder_.clear();
  postorder_.reserve(n);

  std::vector<std::pair<NodeId, int32_t>> stack;  // (node, next child slot)
  stack.emplace_back(root_, 0);
  clade_begin_[static_cast<size_t>(root_)] = 0;
  size_t visited = 1;
  while (!stack.empty()) {
    auto& [v, slot] = stack.back();
    const auto kids = children(v);
    if (slot == 0) {
      clade_begin_[static_cast<size_t>(v)] = static_cast<int32_t>(species_dfs_.size());
      if (kids.empty()) species_dfs_.push_back(node_species_[static_cast<size_t>(v)]);
    }
    if (slot < static_cast<int32_t>(kids.size())) {
      const NodeId c = kids[static_cast<size_t>(slot++)];
      depth_[static_cast<size_t>(c)] = depth_[static_cast<size_t>(v)] + 1;
      dist_root_[static_cast<size_t>(c)] =
          dist_root_[static_cast<size_t>(v)] + length_[static_cast<size_t>(c)];
      ++visited;
      stack.emplace_back(c, 0);
    } else {
      clade_end_[static_cast<size_t>(v)] = static_cast<int32_t>(species_dfs_.size());
      postorder_.push_back(v);
      stack.pop_back();
    }
  }
  if (visited != n) fail("build_tree: cycle detected or tree not connected");

  species_dfs_pos_.assign(species_node_.size(), 0);
  for (size_t i = 0; i < species_dfs_.size(); ++i)
    species_dfs_pos_[static_cast<size_t>(species_dfs_[i])] = static_cast<int32_t>(i);

  for (NodeId v : postorder_) {
    if (is_leaf(v)) {
      min_species_[static_cast<size_t>(v)] = node_species_[static_cast<size_t>(v)];
    } else {
      for (NodeId c : children(v))
        min_species_[static_cast<size_t>(v)] = std::min(
            min_species_[static_cast<size_t>(v)], min_species_[static_cast<size_t>(c)]);
    }
  }

  // root paths per species, root-first (CSR)
  path_off_.assign(species_node_.size() + 1, 0);
  for (size_t s = 0; s < species_node_.size(); ++s)
    path_off_[s + 1] = path_off_[s] + depth_[static_cast<size_t>(species_node_[s])];
  path_arcs_.resize(static_cast<size_t>(path_off_.back()));
  for (size_t s = 0; s < species_node_.size(); ++s) {
    int32_t w = path_off_[s + 1];
    for (NodeId v = species_node_[s]; v != root_; v = parent_[static_cast<size_t>(v)])
      path_arcs_[static_cast<size_t>(--w)] = v;
  }

  total_pd_ = 0.0;
  for (size_t v = 0; v < n; ++v)
    if (static_cast<NodeId>(v) != root_) total_pd_ += length_[v];
}

Phylogeny build_tree(std::span<const NodeId> parent, std::span<const double> lengths,
                     std::vector<std::string> leaf_labels,
                     std::vector<std::string> node_names) {
  const size_t n = parent.size();
  if (n < 2) fail("build_tree: a tree needs at least one species under the root");
  if (lengths.size() != n) fail("build_tree: one length per node expected");
  if (!node_names.empty() && node_names.size() != n)
    fail("build_tree: node_names must be empty or one per node");

  Phylogeny t;
  t.parent_.assign(parent.begin(), parent.end());
  t.length_.assign(lengths.begin(), lengths.end());
  t.node_names_ = node_names.empty() ? std::vector<std::string>(n) : std::move(node_names);

  t.root_ = kNoNode;
  std::vector<int32_t> n_children(n, 0);
  for (size_t v = 0; v < n; ++v) {
    const NodeId p = parent[v];
    if (p == kNoNode) {
      if (t.root_ != kNoNode) fail("build_tree: more than one root");
      t.root_ = static_cast<NodeId>(v);
      continue;
    }
    if (p < 0 || static_cast<size_t>(p) >= n || static_cast<size_t>(p) == v)
      fail("build_tree: bad parent id " + std::to_string(p));
    ++n_children[static_cast<size_t>(p)];
    if (!(lengths[v] >= 0.0) || !std::isfinite(lengths[v]))
      fail("build_tree: negative or non-finite branch length on arc " + std::to_string(v));
  }
  if (t.root_ == kNoNode) fail("build_tree: no root");
  t.length_[static_cast<size_t>(t.root_)] = 0.0;

  size_t n_leaves = 0;
  for (size_t v = 0; v < n; ++v)
    if (n_children[v] == 0) ++n_leaves;
  for (size_t v = 0; v < n; ++v) {
    if (n_children[v] != 1) continue;
    if (static_cast<NodeId>(v) != t.root_)
      fail("build_tree: internal node " + std::to_string(v) + " has exactly one child");
    if (n_leaves != 1)  // single-species tree: root -> one leaf is the one exception
      fail("build_tree: the root has exactly one child");
  }
  if (n_children[static_cast<size_t>(t.root_)] == 0)
    fail("build_tree: the root has no children");

  if (leaf_labels.size() != n_leaves)
    fail("build_tree: " + std::to_string(n_leaves) + " leaves but " +
         std::to_string(leaf_labels.size()) + " labels");
  std::unordered_set<std::string> seen;
  for (const auto& l : leaf_labels) {
    if (l.empty()) fail("build_tree: empty leaf label");
    if (!seen.insert(l).second) fail("build_tree: duplicate leaf label '" + l + "'");
  }
  t.labels_ = std::move(leaf_labels);

  t.build_index();  // also detects cycles / disconnected nodes
  return t;
}

Phylogeny with_branch_lengths(const Phylogeny& tree, std::span<const double> lengths) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(tree.n_nodes()));
  for (NodeId v = 0; v < tree.n_nodes(); ++v) names.push_back(tree.node_name(v));
  std::vector<NodeId> parent(static_cast<size_t>(tree.n_nodes()));
  for (NodeId v = 0; v < tree.n_nodes(); ++v)
    parent[static_cast<size_t>(v)] = (v == tree.root()) ? kNoNode : tree.parent(v);
  std::vector<std::string> labels(tree.labels().begin(), tree.labels().end());
  return build_tree(parent, lengths, std::move(labels), std::move(names));
}

Phylogeny ultrametrize(const Phylogeny& tree) {
  double max_path = 0.0;
  for (int32_t s = 0; s < tree.n_species(); ++s)
    max_path = std::max(max_path, tree.root_path_length(s));
  std::vector<double> lengths(tree.branch_lengths().begin(), tree.branch_lengths().end());
  for (int32_t s = 0; s < tree.n_species(); ++s) {
    const NodeId leaf = tree.species_node(s);
    lengths[static_cast<size_t>(leaf)] += max_path - tree.root_path_length(s);
  }
  return with_branch_lengths(tree, lengths);
}

}  // namespace epd
