#include "arbor/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arbor/error.hpp"

namespace arbor {

WeightedDigraph::WeightedDigraph(std::size_t vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  if (edges_.size() >= kNoEdge) fail(ErrorCode::InvalidArgument, "too many edges");
  std::vector<std::size_t> out_count(n_ + 1, 0), in_count(n_ + 1, 0);
  out_weight_.assign(n_, 0.0);
  in_weight_.assign(n_, 0.0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.src >= n_ || e.dst >= n_) {
      fail(ErrorCode::InvalidArgument, "edge " + std::to_string(i) + " has an endpoint outside [0, " +
                                           std::to_string(n_) + ")");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      fail(ErrorCode::InvalidArgument, "edge " + std::to_string(i) + " has a non-positive weight");
    }
    ++out_count[e.src + 1];
    ++in_count[e.dst + 1];
    out_weight_[e.src] += e.weight;
    in_weight_[e.dst] += e.weight;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    out_count[v + 1] += out_count[v];
    in_count[v + 1] += in_count[v];
  }
  out_offsets_ = out_count;
  in_offsets_ = in_count;
  out_ids_.resize(edges_.size());
  in_ids_.resize(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out_ids_[out_count[edges_[i].src]++] = static_cast<EdgeId>(i);
    in_ids_[in_count[edges_[i].dst]++] = static_cast<EdgeId>(i);
  }
}

VertexSubset::VertexSubset(std::size_t universe, std::vector<VertexId> members)
    : members_(std::move(members)), mask_(universe, false), index_(universe, -1) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) fail(ErrorCode::InvalidArgument, "vertex subset must be nonempty");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] >= universe) fail(ErrorCode::InvalidArgument, "vertex subset id out of range");
    mask_[members_[i]] = true;
    index_[members_[i]] = static_cast<int>(i);
  }
}

VertexSubset VertexSubset::all(std::size_t universe) {
  std::vector<VertexId> ids(universe);
  for (std::size_t v = 0; v < universe; ++v) ids[v] = static_cast<VertexId>(v);
  return VertexSubset(universe, std::move(ids));
}

double weighted_out_degree(const WeightedDigraph& g, VertexId v) { return g.out_weight(v); }

std::vector<EdgeId> boundary_edges(const WeightedDigraph& g, const VertexSubset& s,
                                   Direction direction) {
  std::vector<EdgeId> result;
  for (VertexId v : s.members()) {
    if (direction == Direction::Outgoing) {
      for (EdgeId e : g.out_edges(v))
        if (!s.contains(g.edge(e).dst)) result.push_back(e);
    } else {
      for (EdgeId e : g.in_edges(v))
        if (!s.contains(g.edge(e).src)) result.push_back(e);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

double eulerian_residual(const WeightedDigraph& g) {
  double worst = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const double in = g.in_weight(v), out = g.out_weight(v);
    const double scale = std::max(in, out);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(in - out) / scale);
  }
  return worst;
}

bool is_eulerian(const WeightedDigraph& g, double rel_tol) { return eulerian_residual(g) <= rel_tol; }

namespace {

template <class Next>
std::vector<bool> search(std::size_t n, VertexId start, Next&& neighbours) {
  std::vector<bool> seen(n, false);
  std::vector<VertexId> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    neighbours(v, [&](VertexId u) {
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    });
  }
  return seen;
}

}  // namespace

std::vector<bool> reachable_from(const WeightedDigraph& g, VertexId source) {
  return search(g.vertex_count(), source, [&](VertexId v, auto&& visit) {
    for (EdgeId e : g.out_edges(v)) visit(g.edge(e).dst);
  });
}

std::vector<bool> can_reach(const WeightedDigraph& g, VertexId target) {
  return search(g.vertex_count(), target, [&](VertexId v, auto&& visit) {
    for (EdgeId e : g.in_edges(v)) visit(g.edge(e).src);
  });
}

bool is_strongly_connected(const WeightedDigraph& g) {
  if (g.vertex_count() == 0) return true;
  auto fwd = reachable_from(g, 0);
  auto bwd = can_reach(g, 0);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

bool weight_floor_connected(const WeightedDigraph& g, const VertexSubset& s, double min_weight) {
  const VertexId start = s.members().front();
  auto fwd = search(g.vertex_count(), start, [&](VertexId v, auto&& visit) {
    for (EdgeId e : g.out_edges(v)) {
      const Edge& ed = g.edge(e);
      if (ed.weight >= min_weight && s.contains(ed.dst)) visit(ed.dst);
    }
  });
  auto bwd = search(g.vertex_count(), start, [&](VertexId v, auto&& visit) {
    for (EdgeId e : g.in_edges(v)) {
      const Edge& ed = g.edge(e);
      if (ed.weight >= min_weight && s.contains(ed.src)) visit(ed.src);
    }
  });
  for (VertexId v : s.members())
    if (!fwd[v] || !bwd[v]) return false;
  return true;
}

WeightedDigraph reverse_graph(const WeightedDigraph& g) {
  std::vector<Edge> flipped;
  flipped.reserve(g.edge_count());
  for (const Edge& e : g.edges()) flipped.push_back({e.dst, e.src, e.weight});
  return WeightedDigraph(g.vertex_count(), std::move(flipped));
}

bool validate_arborescence(const WeightedDigraph& g, const Arborescence& t) {
  const std::size_t n = g.vertex_count();
  if (t.root >= n || t.parent_edge.size() != n) return false;
  if (t.parent_edge[t.root] != kNoEdge) return false;
  for (VertexId v = 0; v < n; ++v) {
    if (v == t.root) continue;
    const EdgeId e = t.parent_edge[v];
    if (e >= g.edge_count() || g.edge(e).src != v) return false;
  }
  // 0 = unknown, 1 = on current path, 2 = reaches root
  std::vector<char> state(n, 0);
  state[t.root] = 2;
  std::vector<VertexId> path;
  for (VertexId v = 0; v < n; ++v) {
    VertexId u = v;
    path.clear();
    while (state[u] == 0) {
      state[u] = 1;
      path.push_back(u);
      u = g.edge(t.parent_edge[u]).dst;
    }
    if (state[u] == 1) return false;
    for (VertexId p : path) state[p] = 2;
  }
  return true;
}

VertexId parent_vertex(const WeightedDigraph& g, const Arborescence& t, VertexId v) {
  const EdgeId e = t.parent_edge.at(v);
  return e == kNoEdge ? kNoVertex : g.edge(e).dst;
}

}  // namespace arbor
