#pragma once

#include <vector>

#include "arbor/graph.hpp"
#include "arbor/randomness.hpp"
#include "arbor/walk.hpp"

namespace arbor {

/// Stationary law of the walk on g. When g is not strongly connected the law
/// lives on the unique closed strongly connected component (the only possible
/// roots); UnreachableVertex if there are several closed components.
StationaryDistribution closed_stationary_distribution(const WeightedDigraph& g);

/// Share of the total arborescence weight rooted at each vertex:
/// pi(r) / deg(r), normalized. For Eulerian graphs this is uniform.
StationaryDistribution root_distribution(const WeightedDigraph& g);

/// Draws r from a root law, using one 128-bit variate.
VertexId sample_root(const WeightedDigraph& g, const RandomnessPlan& plan);
VertexId sample_root(const StationaryDistribution& pi, const RandomnessPlan& plan);

struct ReductionResult {
  VertexId root = 0;
  /// Original edges keep their ids; patch edges follow, in vertex order.
  WeightedDigraph eulerian_graph;
  std::vector<EdgeId> patch_edges;
  /// w''(e) / w'(e) per edge of eulerian_graph.
  std::vector<double> scale_record;
  /// Stationary law of the patched graph.
  StationaryDistribution patched_stationary;
};

/// Adds unit edges r->v where missing, then rescales every edge (u, v) to
/// pi'(u) w'(u, v) / deg'(u). UnreachableVertex if some vertex cannot reach r.
ReductionResult reduce(const WeightedDigraph& g, VertexId root);

}  // namespace arbor
