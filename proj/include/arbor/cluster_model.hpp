#pragma once

#include <utility>
#include <vector>

#include "arbor/graph.hpp"
#include "arbor/hierarchy.hpp"
#include "arbor/randomness.hpp"
#include "arbor/walk.hpp"

namespace arbor {

/// The walk graph, its hierarchy and, for every internal node S and every
/// conditioning edge (each outgoing boundary edge of S, or none for the
/// root), the conditioned child-exit law of each member of S in sampling form.
class ClusterModel {
 public:
  explicit ClusterModel(WeightedDigraph walk_graph);

  const WeightedDigraph& graph() const noexcept { return graph_; }
  const Hierarchy& hierarchy() const noexcept { return hierarchy_; }

  /// Outgoing boundary edges of node s (empty for the root).
  const std::vector<EdgeId>& exits(NodeId s) const { return per_node_[s].exits; }

  /// Child-exit edge taken from v under the walk in s conditioned on leaving
  /// through e_end, decided by the variate x. ZeroConditioning if v cannot
  /// leave through e_end.
  EdgeId next(NodeId s, EdgeId e_end, VertexId v, const Variate& x) const;

  /// False when v cannot leave s through e_end (h(v) = 0).
  bool admissible(NodeId s, EdgeId e_end, VertexId v) const;

  /// Probability form of the same law.
  const ExitTable& exit_table(NodeId s, EdgeId e_end) const;

 private:
  struct Row {
    std::vector<EdgeId> edges;
    std::vector<uint128> thresholds;  // cumulative, last forced to the maximum
  };
  struct Conditioned {
    ExitTable table;
    std::vector<Row> rows;  // by member position
  };
  struct PerNode {
    std::vector<EdgeId> exits;
    std::vector<Conditioned> tables;  // by column of exits; one entry (no conditioning) for the root
  };

  const Conditioned& conditioned(NodeId s, EdgeId e_end) const;

  WeightedDigraph graph_;
  Hierarchy hierarchy_;
  std::vector<PerNode> per_node_;
};

}  // namespace arbor
