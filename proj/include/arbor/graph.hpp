#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace arbor {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable weighted digraph with dense vertex ids. Parallel edges and
/// self-loops are kept as distinct edges; edge ids are insertion order.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  /// Throws Error(InvalidArgument) on out-of-range ids or non-positive /
  /// non-finite weights.
  WeightedDigraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const EdgeId> out_edges(VertexId v) const {
    return {out_ids_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const EdgeId> in_edges(VertexId v) const {
    return {in_ids_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  double out_weight(VertexId v) const { return out_weight_[v]; }
  double in_weight(VertexId v) const { return in_weight_[v]; }

  bool valid_vertex(VertexId v) const noexcept { return v < n_; }

  friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<EdgeId> out_ids_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<EdgeId> in_ids_;
  std::vector<double> out_weight_;
  std::vector<double> in_weight_;
};

/// Nonempty vertex set with O(1) membership.
class VertexSubset {
 public:
  VertexSubset(std::size_t universe, std::vector<VertexId> members);
  static VertexSubset all(std::size_t universe);

  bool contains(VertexId v) const { return v < mask_.size() && mask_[v]; }
  std::span<const VertexId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t universe() const noexcept { return mask_.size(); }

  /// Position of v in members(), or -1.
  int index_of(VertexId v) const { return contains(v) ? index_[v] : -1; }

 private:
  std::vector<VertexId> members_;  // sorted, unique
  std::vector<bool> mask_;
  std::vector<int> index_;
};

/// parent_edge[v] is the tree edge leaving v (kNoEdge for the root).
struct Arborescence {
  VertexId root = 0;
  std::vector<EdgeId> parent_edge;

  friend bool operator==(const Arborescence&, const Arborescence&) = default;
  friend auto operator<=>(const Arborescence&, const Arborescence&) = default;
};

enum class Direction { Incoming, Outgoing };

double weighted_out_degree(const WeightedDigraph& g, VertexId v);

/// Edges with exactly one endpoint in s. Outgoing: tail inside; incoming: head inside.
std::vector<EdgeId> boundary_edges(const WeightedDigraph& g, const VertexSubset& s,
                                   Direction direction);

/// max over vertices of |in - out| / max(in, out), 0 for isolated vertices.
double eulerian_residual(const WeightedDigraph& g);
bool is_eulerian(const WeightedDigraph& g, double rel_tol = 1e-9);

bool is_strongly_connected(const WeightedDigraph& g);

/// Strong connectivity of g(s) using only edges of weight >= min_weight.
bool weight_floor_connected(const WeightedDigraph& g, const VertexSubset& s,
                            double min_weight);

/// Vertices that can reach target (including target).
std::vector<bool> can_reach(const WeightedDigraph& g, VertexId target);
/// Vertices reachable from source (including source).
std::vector<bool> reachable_from(const WeightedDigraph& g, VertexId source);

/// Flips every edge; edge ids and weights are kept.
WeightedDigraph reverse_graph(const WeightedDigraph& g);

bool validate_arborescence(const WeightedDigraph& g, const Arborescence& t);

/// Parent vertex of v in t (head of v's tree edge).
VertexId parent_vertex(const WeightedDigraph& g, const Arborescence& t, VertexId v);

}  // namespace arbor
