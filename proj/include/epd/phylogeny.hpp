#pragma once
// Rooted phylogenetic tree with branch lengths on the arcs and species at
// the leaves, plus the derived clade index used by all diversity queries.
//
// Arcs are identified by their terminal node, so "arc v" is the branch from
// parent(v) into v and the root is not an arc. A Phylogeny is immutable
// after construction and safe to share across threads.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epd {

using NodeId = int32_t;
inline constexpr NodeId kNoNode = -1;

class Phylogeny {
 public:
  // --- topology ---
  int n_nodes() const { return static_cast<int>(parent_.size()); }
  int n_arcs() const { return n_nodes() - 1; }
  NodeId root() const { return root_; }
  NodeId parent(NodeId v) const { return parent_.at(static_cast<size_t>(v)); }
  std::span<const NodeId> children(NodeId v) const {
    return {children_.data() + child_off_[static_cast<size_t>(v)],
            children_.data() + child_off_[static_cast<size_t>(v) + 1]};
  }
  bool is_leaf(NodeId v) const { return node_species_[static_cast<size_t>(v)] >= 0; }
  // Length of the arc into v (0 for the root, which has no incoming arc).
  double branch_length(NodeId v) const { return length_[static_cast<size_t>(v)]; }
  std::span<const double> branch_lengths() const { return length_; }
  // Nodes ordered children-before-parent; the natural order for bottom-up
  // products and sums.
  std::span<const NodeId> postorder() const { return postorder_; }
  int depth(NodeId v) const { return depth_[static_cast<size_t>(v)]; }

  // --- species ---
  int n_species() const { return static_cast<int>(species_node_.size()); }
  NodeId species_node(int32_t species) const {
    return species_node_.at(static_cast<size_t>(species));
  }
  int32_t species_of(NodeId v) const { return node_species_.at(static_cast<size_t>(v)); }
  const std::string& label(int32_t species) const {
    return labels_.at(static_cast<size_t>(species));
  }
  std::span<const std::string> labels() const { return labels_; }
  const std::string& node_name(NodeId v) const {
    return node_names_.at(static_cast<size_t>(v));
  }

  // --- clade index ---
  // Species below arc `arc` (unordered set, backed by the DFS layout).
  std::span<const int32_t> clade(NodeId arc) const;
  // Arcs on the path root -> species, in root-first order.
  std::span<const NodeId> root_path_arcs(int32_t species) const;
  // Smallest species index below v (canonical child order for writers).
  int32_t min_species(NodeId v) const { return min_species_[static_cast<size_t>(v)]; }
  // Sum of branch lengths from the root down to v.
  double dist_from_root(NodeId v) const { return dist_root_[static_cast<size_t>(v)]; }

  // --- diversity measures ---
  // Faith PD of the whole species set: the sum of all branch lengths.
  double total_pd() const { return total_pd_; }
  // Rooted Faith PD of a surviving subset: arcs with at least one surviving
  // descendant contribute their length.
  double pd_of_subset(std::span<const int32_t> survivors) const;
  double root_path_length(int32_t species) const {
    return dist_from_root(species_node(species));
  }
  // True iff all root-to-leaf path lengths agree within tol.
  bool is_ultrametric(double tol) const;

  friend Phylogeny build_tree(std::span<const NodeId> parent,
                              std::span<const double> lengths,
                              std::vector<std::string> leaf_labels,
                              std::vector<std::string> node_names);

 private:
  Phylogeny() = default;
  void build_index();  // fills everything derived from parent_/length_

  std::vector<NodeId> parent_;
  std::vector<double> length_;
  NodeId root_ = kNoNode;
  std::vector<std::string> node_names_;  // per node; empty when unnamed

  std::vector<NodeId> species_node_;    // species -> leaf node
  std::vector<int32_t> node_species_;   // node -> species or -1
  std::vector<std::string> labels_;     // species -> label

  std::vector<int32_t> child_off_;      // CSR children
  std::vector<NodeId> children_;
  std::vector<NodeId> postorder_;
  std::vector<int32_t> depth_;
  std::vector<double> dist_root_;
  std::vector<int32_t> min_species_;
  std::vector<int32_t> clade_begin_, clade_end_;  // node -> range in species_dfs_
  std::vector<int32_t> species_dfs_;    // species ids in DFS leaf order
  std::vector<int32_t> species_dfs_pos_;
  std::vector<int32_t> path_off_;       // CSR root paths per species
  std::vector<NodeId> path_arcs_;
  double total_pd_ = 0.0;
};

// Validating constructor. `parent` maps node -> parent with exactly one root
// (kNoNode); `lengths[v]` is the incoming arc length of v (the root entry is
// ignored); `leaf_labels` are given in species order, i.e. ascending leaf
// node id. Throws std::invalid_argument on: several/no roots, cycles or
// disconnected nodes, a non-root node with exactly one child, a unary root
// (unless the tree is the degenerate single-species tree), negative or
// non-finite lengths, duplicate or missing leaf labels.
Phylogeny build_tree(std::span<const NodeId> parent,
                     std::span<const double> lengths,
                     std::vector<std::string> leaf_labels,
                     std::vector<std::string> node_names = {});

// Same topology and labels, new branch lengths.
Phylogeny with_branch_lengths(const Phylogeny& tree, std::span<const double> lengths);

// Extends each leaf arc by (L - l_i) where l_i is the root-to-leaf path
// length and L their maximum, so every root-to-leaf path has length L.
// Internal arcs are untouched; idempotent.
Phylogeny ultrametrize(const Phylogeny& tree);

}  // namespace epd
