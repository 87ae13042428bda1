#include "arbor/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>

#include "arbor/error.hpp"

namespace arbor {

namespace {

struct DisjointSets {
  std::vector<VertexId> parent;

  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  VertexId find(VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", w);
  return buf;
}

}  // namespace

Cycle find_cycle(const WeightedDigraph& g, EdgeId e) {
  const Edge& anchor = g.edge(e);
  Cycle cycle;
  cycle.anchor = e;
  cycle.edges.push_back(e);
  cycle.weight_floor = anchor.weight;
  if (anchor.src == anchor.dst) return cycle;

  const double floor = anchor.weight / static_cast<double>(g.edge_count()) * (1.0 - kWeightFloorSlack);
  // BFS from head(e) back to tail(e).
  std::vector<EdgeId> via(g.vertex_count(), kNoEdge);
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<VertexId> queue;
  seen[anchor.dst] = true;
  queue.push(anchor.dst);
  while (!queue.empty() && !seen[anchor.src]) {
    const VertexId v = queue.front();
    queue.pop();
    for (EdgeId f : g.out_edges(v)) {
      const Edge& ed = g.edge(f);
      if (ed.weight < floor || seen[ed.dst]) continue;
      seen[ed.dst] = true;
      via[ed.dst] = f;
      queue.push(ed.dst);
    }
  }
  if (!seen[anchor.src]) {
    fail(ErrorCode::NoCycle, "no cycle through edge " + std::to_string(e) + " above its weight floor");
  }
  std::vector<EdgeId> path;
  for (VertexId v = anchor.src; v != anchor.dst; v = g.edge(via[v]).src) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  for (EdgeId f : path) {
    cycle.edges.push_back(f);
    cycle.weight_floor = std::min(cycle.weight_floor, g.edge(f).weight);
  }
  return cycle;
}

Hierarchy::Hierarchy(std::size_t vertex_count, std::vector<HierarchyNode> nodes, const WeightedDigraph& g)
    : vertex_count_(vertex_count), nodes_(std::move(nodes)) {
  // Depths and root-to-leaf paths.
  path_.assign(vertex_count_, {});
  nodes_[root()].depth = 0;
  nodes_[root()].parent = kNoNode;
  std::vector<NodeId> trail;
  // Iterative DFS keeping the current root path in `trail`.
  struct Frame {
    NodeId node;
    std::size_t next_child;
  };
  std::vector<Frame> frames{{root(), 0}};
  trail.push_back(root());
  while (!frames.empty()) {
    Frame& f = frames.back();
    HierarchyNode& node = nodes_[f.node];
    if (node.is_leaf()) {
      path_[node.members.front()] = trail;
      height_ = std::max(height_, node.depth);
    }
    if (f.next_child < node.children.size()) {
      const NodeId c = node.children[f.next_child++];
      nodes_[c].parent = f.node;
      nodes_[c].depth = node.depth + 1;
      frames.push_back({c, 0});
      trail.push_back(c);
    } else {
      frames.pop_back();
      trail.pop_back();
    }
  }

  jumping_node_.resize(g.edge_count());
  for (auto& node : nodes_) {
    node.jumping_edges.clear();
    node.w_max = 0.0;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const NodeId j = lowest_common_ancestor(leaf(g.edge(e).src), leaf(g.edge(e).dst));
    jumping_node_[e] = j;
    nodes_[j].jumping_edges.push_back(e);
    nodes_[j].w_max = std::max(nodes_[j].w_max, g.edge(e).weight);
  }
}

NodeId Hierarchy::child_containing(NodeId s, VertexId v) const {
  return path_[v][nodes_[s].depth + 1];
}

bool Hierarchy::contains(NodeId s, VertexId v) const {
  const auto d = nodes_[s].depth;
  return d < path_[v].size() && path_[v][d] == s;
}

NodeId Hierarchy::ancestor_at_depth(VertexId v, std::uint32_t depth) const { return path_[v][depth]; }

NodeId Hierarchy::lowest_common_ancestor(NodeId a, NodeId b) const {
  const VertexId va = nodes_[a].members.front();
  const VertexId vb = nodes_[b].members.front();
  std::uint32_t d = std::min(nodes_[a].depth, nodes_[b].depth);
  while (path_[va][d] != path_[vb][d]) --d;
  return path_[va][d];
}

Hierarchy build_hierarchy(const WeightedDigraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<HierarchyNode> nodes(n);
  for (VertexId v = 0; v < n; ++v) nodes[v].members = {v};
  if (n == 1) return Hierarchy(n, std::move(nodes), g);

  std::vector<Cycle> cycles;
  cycles.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) cycles.push_back(find_cycle(g, e));
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.weight_floor != b.weight_floor) return a.weight_floor > b.weight_floor;
    return a.anchor < b.anchor;
  });

  DisjointSets sets(n);
  std::vector<NodeId> current(n);  // DSU representative -> node
  std::iota(current.begin(), current.end(), 0);

  std::size_t begin = 0;
  while (begin < cycles.size()) {
    // Cycles with the same floor form one prefix step.
    std::size_t end = begin + 1;
    const double level = cycles[begin].weight_floor;
    while (end < cycles.size() && std::abs(cycles[end].weight_floor - level) <= 1e-12 * level) ++end;

    std::vector<VertexId> touched;
    for (std::size_t i = begin; i < end; ++i) {
      for (EdgeId e : cycles[i].edges) {
        touched.push_back(g.edge(e).src);
        touched.push_back(g.edge(e).dst);
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::vector<std::pair<VertexId, NodeId>> before;  // old representative -> node
    for (VertexId v : touched) {
      const VertexId rep = sets.find(v);
      before.emplace_back(rep, current[rep]);
    }
    std::sort(before.begin(), before.end());
    before.erase(std::unique(before.begin(), before.end()), before.end());

    for (std::size_t i = begin; i < end; ++i) {
      for (EdgeId e : cycles[i].edges) sets.unite(g.edge(e).src, g.edge(e).dst);
    }

    std::vector<std::pair<VertexId, NodeId>> grouped;  // new representative -> old node
    for (auto [rep, node] : before) grouped.emplace_back(sets.find(rep), node);
    std::sort(grouped.begin(), grouped.end());
    for (std::size_t i = 0; i < grouped.size();) {
      std::size_t j = i;
      while (j < grouped.size() && grouped[j].first == grouped[i].first) ++j;
      if (j - i >= 2) {
        HierarchyNode merged;
        for (std::size_t k = i; k < j; ++k) {
          const NodeId child = grouped[k].second;
          merged.children.push_back(child);
          merged.members.insert(merged.members.end(), nodes[child].members.begin(), nodes[child].members.end());
        }
        std::sort(merged.members.begin(), merged.members.end());
        std::sort(merged.children.begin(), merged.children.end(), [&](NodeId a, NodeId b) {
          return nodes[a].members.front() < nodes[b].members.front();
        });
        current[grouped[i].first] = static_cast<NodeId>(nodes.size());
        nodes.push_back(std::move(merged));
      }
      i = j;
    }
    begin = end;
  }

  if (nodes.back().members.size() != n) {
    fail(ErrorCode::NoCycle, "cycles do not connect the graph; it is not strongly connected");
  }
  return Hierarchy(n, std::move(nodes), g);
}

NodeId jumping_node(const Hierarchy& h, EdgeId e) { return h.jumping_node(e); }

std::string dump_hierarchy(const Hierarchy& h) {
  std::string out;
  std::vector<NodeId> stack{h.root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const HierarchyNode& node = h.node(id);
    out.append(2 * node.depth, ' ');
    out += '{';
    for (std::size_t i = 0; i < node.members.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(node.members[i]);
    }
    out += "} w_max=" + format_weight(node.w_max) + " jumping=" + std::to_string(node.jumping_edges.size()) + "\n";
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

HierarchyCheck check_hierarchy(const WeightedDigraph& g, const Hierarchy& h) {
  HierarchyCheck check;
  auto flag = [&](bool& field, const std::string& what) {
    if (field && check.first_failure.empty()) check.first_failure = what;
    field = false;
  };
  const std::size_t n = g.vertex_count();
  const auto& nodes = h.nodes();

  if (nodes[h.root()].members.size() != n) flag(check.root_is_full, "root does not cover every vertex");
  std::size_t leaves = 0;
  for (const auto& node : nodes) {
    if (node.is_leaf()) {
      ++leaves;
      if (node.members.size() != 1) flag(check.leaves_are_singletons, "leaf with several vertices");
    }
  }
  if (leaves != n) flag(check.leaves_are_singletons, "leaf count differs from vertex count");
  if (h.internal_count() > 2 * n) flag(check.internal_bound, "more than 2n internal nodes");

  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const auto& x = nodes[a].members;
      const auto& y = nodes[b].members;
      std::vector<VertexId> common;
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
      if (!common.empty() && common.size() != x.size() && common.size() != y.size()) {
        flag(check.laminar, "nodes " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
      }
      if (common.size() == x.size() && x.size() == y.size()) {
        flag(check.laminar, "duplicate node " + std::to_string(b));
      }
    }
  }

  std::vector<int> owners(g.edge_count(), 0);
  for (NodeId id = 0; id < nodes.size(); ++id) {
    for (EdgeId e : nodes[id].jumping_edges) {
      ++owners[e];
      const Edge& ed = g.edge(e);
      const bool inside = h.contains(id, ed.src) && h.contains(id, ed.dst);
      bool lower = false;
      for (NodeId c : nodes[id].children) lower = lower || (h.contains(c, ed.src) && h.contains(c, ed.dst));
      if (!inside || lower) flag(check.jumping_partition, "edge " + std::to_string(e) + " jumps at the wrong node");
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (owners[e] != 1) flag(check.jumping_partition, "edge " + std::to_string(e) + " is not owned exactly once");
  }

  const double m = static_cast<double>(g.edge_count());
  for (NodeId id = 0; id < nodes.size(); ++id) {
    const auto& node = nodes[id];
    if (node.is_leaf()) continue;
    const VertexSubset s(n, node.members);
    if (!weight_floor_connected(g, s, node.w_max / m * (1.0 - kWeightFloorSlack))) {
      flag(check.weight_floor_connectivity, "node " + std::to_string(id) + " is not connected above w_max/m");
    }
  }
  return check;
}

}  // namespace arbor
