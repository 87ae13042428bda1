#pragma once

#include <string>
#include <vector>

#include "arbor/graph.hpp"

namespace arbor {

/// Relative slack on the w(e)/m weight floor, absorbing rounding in rescaled weights.
inline constexpr double kWeightFloorSlack = 1e-9;

struct Cycle {
  std::vector<EdgeId> edges;  // starts with the anchor
  EdgeId anchor = kNoEdge;
  double weight_floor = 0.0;  // min edge weight
};

/// Shortest cycle through e using only edges of weight >= w(e)/m. NoCycle if none.
Cycle find_cycle(const WeightedDigraph& g, EdgeId e);

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct HierarchyNode {
  std::vector<VertexId> members;  // sorted
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  std::uint32_t depth = 0;  // root has depth 0
  std::vector<EdgeId> jumping_edges;
  double w_max = 0.0;  // 0 when there are no jumping edges

  bool is_leaf() const noexcept { return children.empty(); }
};

/// Laminar family with explicit singleton leaves. Nodes are stored leaves
/// first (leaf of vertex v has id v), internal nodes in creation order, so
/// the root is the last node.
class Hierarchy {
 public:
  Hierarchy() = default;
  Hierarchy(std::size_t vertex_count, std::vector<HierarchyNode> nodes, const WeightedDigraph& g);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  const HierarchyNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<HierarchyNode>& nodes() const noexcept { return nodes_; }
  NodeId root() const noexcept { return static_cast<NodeId>(nodes_.size() - 1); }
  NodeId leaf(VertexId v) const noexcept { return v; }
  std::size_t internal_count() const noexcept { return nodes_.size() - vertex_count_; }
  std::uint32_t height() const noexcept { return height_; }

  /// Lowest node containing both endpoints of e.
  NodeId jumping_node(EdgeId e) const { return jumping_node_[e]; }
  /// Child of s containing v (v must be a member of s and s not a leaf).
  NodeId child_containing(NodeId s, VertexId v) const;
  bool contains(NodeId s, VertexId v) const;
  /// Ancestor of leaf(v) at the given depth.
  NodeId ancestor_at_depth(VertexId v, std::uint32_t depth) const;
  NodeId lowest_common_ancestor(NodeId a, NodeId b) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<HierarchyNode> nodes_;
  std::vector<NodeId> jumping_node_;
  std::vector<std::vector<NodeId>> path_;  // per vertex: node ids from root down to its leaf
  std::uint32_t height_ = 0;
};

/// Nodes are the connected components of the unions of cycles sorted by
/// decreasing weight floor (ties by anchor id, equal floors merged in one
/// step), plus singleton leaves. g must be Eulerian and strongly connected.
Hierarchy build_hierarchy(const WeightedDigraph& g);

NodeId jumping_node(const Hierarchy& h, EdgeId e);

/// Indented text tree: vertex set, w_max and jumping-edge count per node.
std::string dump_hierarchy(const Hierarchy& h);

struct HierarchyCheck {
  bool laminar = true;
  bool root_is_full = true;
  bool leaves_are_singletons = true;
  bool internal_bound = true;  // internal nodes <= 2n
  bool jumping_partition = true;
  bool weight_floor_connectivity = true;
  std::string first_failure;

  bool ok() const noexcept {
    return laminar && root_is_full && leaves_are_singletons && internal_bound && jumping_partition &&
           weight_floor_connectivity;
  }
};

/// Checks every structural invariant of the decomposition against g.
HierarchyCheck check_hierarchy(const WeightedDigraph& g, const Hierarchy& h);

}  // namespace arbor
