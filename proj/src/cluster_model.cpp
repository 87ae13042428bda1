#include "arbor/cluster_model.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "arbor/error.hpp"

namespace arbor {

ClusterModel::ClusterModel(WeightedDigraph walk_graph)
    : graph_(std::move(walk_graph)), hierarchy_(build_hierarchy(graph_)), per_node_(hierarchy_.node_count()) {
  const std::size_t n = graph_.vertex_count();
  std::vector<std::optional<ExitMatrix>> laws(hierarchy_.node_count());
  for (NodeId s = 0; s < hierarchy_.node_count(); ++s) {
    if (s == hierarchy_.root()) continue;
    laws[s] = exit_matrix(graph_, VertexSubset(n, hierarchy_.node(s).members));
    per_node_[s].exits = laws[s]->exits;
  }

  for (NodeId s = 0; s < hierarchy_.node_count(); ++s) {
    const HierarchyNode& node = hierarchy_.node(s);
    if (node.is_leaf()) continue;
    const VertexSubset members(n, node.members);
    std::vector<const ExitMatrix*> child_laws(node.members.size());
    for (std::size_t i = 0; i < node.members.size(); ++i) {
      child_laws[i] = &*laws[hierarchy_.child_containing(s, node.members[i])];
    }
    std::vector<EdgeId> conditions = per_node_[s].exits;
    if (s == hierarchy_.root()) conditions = {kNoEdge};
    const ExitMatrix* own = laws[s] ? &*laws[s] : nullptr;
    for (EdgeId e_end : conditions) {
      Conditioned c;
      c.table = combine_exit_laws(graph_, members, own, child_laws, e_end);
      c.rows.resize(c.table.rows.size());
      for (std::size_t i = 0; i < c.table.rows.size(); ++i) {
        double acc = 0.0;
        for (const auto& [edge, p] : c.table.rows[i]) {
          acc += p;
          c.rows[i].edges.push_back(edge);
          c.rows[i].thresholds.push_back(probability_threshold(acc));
        }
        if (!c.rows[i].thresholds.empty()) c.rows[i].thresholds.back() = ~static_cast<uint128>(0);
      }
      per_node_[s].tables.push_back(std::move(c));
    }
  }
}

const ClusterModel::Conditioned& ClusterModel::conditioned(NodeId s, EdgeId e_end) const {
  const PerNode& pn = per_node_[s];
  if (s == hierarchy_.root()) {
    if (e_end != kNoEdge) fail(ErrorCode::InvalidArgument, "the root cluster has no exits");
    return pn.tables.front();
  }
  auto it = std::lower_bound(pn.exits.begin(), pn.exits.end(), e_end);
  if (it == pn.exits.end() || *it != e_end || pn.tables.empty()) {
    fail(ErrorCode::InvalidArgument, "edge " + std::to_string(e_end) + " does not leave cluster " + std::to_string(s));
  }
  return pn.tables[it - pn.exits.begin()];
}

const ExitTable& ClusterModel::exit_table(NodeId s, EdgeId e_end) const { return conditioned(s, e_end).table; }

bool ClusterModel::admissible(NodeId s, EdgeId e_end, VertexId v) const {
  const Conditioned& c = conditioned(s, e_end);
  const auto& members = hierarchy_.node(s).members;
  auto it = std::lower_bound(members.begin(), members.end(), v);
  return it != members.end() && *it == v && !c.rows[it - members.begin()].edges.empty();
}

EdgeId ClusterModel::next(NodeId s, EdgeId e_end, VertexId v, const Variate& x) const {
  const Conditioned& c = conditioned(s, e_end);
  const auto& members = hierarchy_.node(s).members;
  auto it = std::lower_bound(members.begin(), members.end(), v);
  const Row& row = c.rows[it - members.begin()];
  if (row.edges.empty()) {
    fail(ErrorCode::ZeroConditioning, "vertex " + std::to_string(v) + " cannot leave through edge " + std::to_string(e_end));
  }
  const uint128 bits = x.bits();
  // Comparing all 128 bits resolves ties of the leading 64-bit block with the second block.
  auto pos = std::upper_bound(row.thresholds.begin(), row.thresholds.end(), bits);
  if (pos == row.thresholds.end()) --pos;
  return row.edges[pos - row.thresholds.begin()];
}

}  // namespace arbor
