#include "arbor/reduction.hpp"

#include <algorithm>
#include <string>

#include "arbor/error.hpp"

namespace arbor {

namespace {

/// Vertices of the closed strongly connected components (no edge leaves them).
std::vector<std::vector<VertexId>> closed_components(const WeightedDigraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<VertexId>> closed;
  std::vector<bool> assigned(n, false);
  for (VertexId v = 0; v < n; ++v) {
    if (assigned[v]) continue;
    // v is in a closed component iff everything it reaches can reach it back.
    const auto fwd = reachable_from(g, v);
    const auto back = can_reach(g, v);
    bool is_closed = true;
    std::vector<VertexId> comp;
    for (VertexId u = 0; u < n; ++u) {
      if (fwd[u] && !back[u]) is_closed = false;
      if (fwd[u] && back[u]) comp.push_back(u);
    }
    for (VertexId u : comp) assigned[u] = true;
    if (is_closed) closed.push_back(std::move(comp));
  }
  return closed;
}

}  // namespace

StationaryDistribution closed_stationary_distribution(const WeightedDigraph& g) {
  if (g.vertex_count() == 0) fail(ErrorCode::InvalidArgument, "graph has no vertices");
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.out_edges(v).empty()) fail(ErrorCode::UnreachableVertex, "vertex " + std::to_string(v) + " is a sink");
  }
  if (is_strongly_connected(g)) return stationary_distribution(g);

  auto closed = closed_components(g);
  if (closed.size() != 1) {
    fail(ErrorCode::UnreachableVertex, "no vertex is reachable from every other vertex");
  }
  const auto& comp = closed.front();
  std::vector<Edge> inner;
  std::vector<int> local(g.vertex_count(), -1);
  for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
  for (const Edge& e : g.edges()) {
    if (local[e.src] >= 0 && local[e.dst] >= 0) {
      inner.push_back({static_cast<VertexId>(local[e.src]), static_cast<VertexId>(local[e.dst]), e.weight});
    }
  }
  const auto sub = stationary_distribution(WeightedDigraph(comp.size(), std::move(inner)));
  StationaryDistribution pi;
  pi.probabilities.assign(g.vertex_count(), 0.0);
  for (std::size_t i = 0; i < comp.size(); ++i) pi.probabilities[comp[i]] = sub.probabilities[i];
  return pi;
}

StationaryDistribution root_distribution(const WeightedDigraph& g) {
  StationaryDistribution law = closed_stationary_distribution(g);
  double total = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    law.probabilities[v] /= g.out_weight(v);
    total += law.probabilities[v];
  }
  for (double& p : law.probabilities) p /= total;
  return law;
}

VertexId sample_root(const StationaryDistribution& pi, const RandomnessPlan& plan) {
  const uint128 x = plan.uniform(StreamDomain::Root, 0, 0).bits();
  double acc = 0.0;
  VertexId last = kNoVertex;
  for (VertexId v = 0; v < pi.probabilities.size(); ++v) {
    if (pi.probabilities[v] <= 0.0) continue;
    last = v;
    acc += pi.probabilities[v];
    if (x < probability_threshold(acc)) return v;
  }
  return last;
}

VertexId sample_root(const WeightedDigraph& g, const RandomnessPlan& plan) {
  return sample_root(root_distribution(g), plan);
}

ReductionResult reduce(const WeightedDigraph& g, VertexId root) {
  const std::size_t n = g.vertex_count();
  if (!g.valid_vertex(root)) fail(ErrorCode::InvalidArgument, "root is not a vertex");
  const auto reaches_root = can_reach(g, root);
  for (VertexId v = 0; v < n; ++v) {
    if (!reaches_root[v]) {
      fail(ErrorCode::UnreachableVertex, "vertex " + std::to_string(v) + " cannot reach root " + std::to_string(root));
    }
  }

  ReductionResult result;
  result.root = root;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<bool> has_edge(n, false);
  for (EdgeId e : g.out_edges(root)) has_edge[g.edge(e).dst] = true;
  for (VertexId v = 0; v < n; ++v) {
    if (v == root || has_edge[v]) continue;
    result.patch_edges.push_back(static_cast<EdgeId>(edges.size()));
    edges.push_back({root, v, 1.0});
  }
  const WeightedDigraph patched(n, edges);
  result.patched_stationary = stationary_distribution(patched);

  result.scale_record.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const VertexId u = edges[e].src;
    const double factor = result.patched_stationary[u] / patched.out_weight(u);
    result.scale_record[e] = factor;
    edges[e].weight *= factor;
  }
  result.eulerian_graph = WeightedDigraph(n, std::move(edges));
  return result;
}

}  // namespace arbor
