#include "arbor/walk.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "arbor/error.hpp"
#include "linalg.hpp"

namespace arbor {

StationaryDistribution stationary_distribution(const WeightedDigraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) fail(ErrorCode::SingularSystem, "empty graph");
  if (!is_strongly_connected(g)) {
    fail(ErrorCode::SingularSystem, "stationary distribution needs a strongly connected graph");
  }
  if (n == 1) return {{1.0}};
  // (P^T - I) x = 0 with the last equation replaced by sum(x) = 1.
  Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(n, n);
  for (const Edge& e : g.edges()) a(e.dst, e.src) += e.weight / g.out_weight(e.src);
  a.row(n - 1).setOnes();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
  b(n - 1, 0) = 1.0;
  Eigen::MatrixXd x = detail::solve_dense(a, b, ErrorCode::SingularSystem);
  StationaryDistribution pi;
  pi.probabilities.resize(n);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    pi.probabilities[v] = std::max(0.0, x(v, 0));
    total += pi.probabilities[v];
  }
  for (double& p : pi.probabilities) p /= total;
  return pi;
}

int ExitMatrix::column_of(EdgeId e) const {
  auto it = std::lower_bound(exits.begin(), exits.end(), e);
  return it != exits.end() && *it == e ? static_cast<int>(it - exits.begin()) : -1;
}

int ExitMatrix::row_of(VertexId v) const {
  auto it = std::lower_bound(members.begin(), members.end(), v);
  return it != members.end() && *it == v ? static_cast<int>(it - members.begin()) : -1;
}

ExitMatrix exit_matrix(const WeightedDigraph& g, const VertexSubset& s) {
  ExitMatrix result;
  result.members.assign(s.members().begin(), s.members().end());
  result.exits = boundary_edges(g, s, Direction::Outgoing);
  const std::size_t k = result.members.size();
  const std::size_t x = result.exits.size();

  // Every member must reach a boundary tail inside s.
  std::vector<bool> escapes(g.vertex_count(), false);
  std::vector<VertexId> stack;
  for (EdgeId e : result.exits) {
    VertexId u = g.edge(e).src;
    if (!escapes[u]) {
      escapes[u] = true;
      stack.push_back(u);
    }
  }
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : g.in_edges(v)) {
      VertexId u = g.edge(e).src;
      if (s.contains(u) && !escapes[u]) {
        escapes[u] = true;
        stack.push_back(u);
      }
    }
  }
  for (VertexId v : result.members) {
    if (!escapes[v]) fail(ErrorCode::TrappedCluster, "vertex " + std::to_string(v) + " cannot leave the cluster");
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(k, x);
  for (std::size_t i = 0; i < k; ++i) {
    const VertexId u = result.members[i];
    const double deg = g.out_weight(u);
    for (EdgeId e : g.out_edges(u)) {
      const Edge& ed = g.edge(e);
      if (s.contains(ed.dst)) {
        a(i, s.index_of(ed.dst)) -= ed.weight / deg;
      } else {
        r(i, result.column_of(e)) += ed.weight / deg;
      }
    }
  }
  Eigen::MatrixXd sol = detail::solve_dense(a, r, ErrorCode::TrappedCluster);
  result.probs.resize(k * x);
  for (std::size_t i = 0; i < k; ++i) {
    double total = 0.0;
    for (std::size_t c = 0; c < x; ++c) {
      const double p = std::max(0.0, sol(i, c));
      result.probs[i * x + c] = p;
      total += p;
    }
    for (std::size_t c = 0; c < x; ++c) result.probs[i * x + c] /= total;
  }
  return result;
}

EdgeDistribution exit_distribution(const WeightedDigraph& g, const VertexSubset& s, VertexId v) {
  if (!s.contains(v)) fail(ErrorCode::InvalidArgument, "start vertex is outside the cluster");
  ExitMatrix m = exit_matrix(g, s);
  const auto row = m.row(m.row_of(v));
  EdgeDistribution out;
  for (std::size_t c = 0; c < m.exits.size(); ++c) out.emplace_back(m.exits[c], row[c]);
  return out;
}

const EdgeDistribution& ExitTable::row_for(VertexId v) const {
  auto it = std::lower_bound(members.begin(), members.end(), v);
  if (it == members.end() || *it != v) fail(ErrorCode::InvalidArgument, "vertex is outside the cluster");
  const auto& row = rows[it - members.begin()];
  if (row.empty()) {
    fail(ErrorCode::ZeroConditioning, "vertex " + std::to_string(v) + " cannot leave through the conditioning edge");
  }
  return row;
}

ExitTable combine_exit_laws(const WeightedDigraph& g, const VertexSubset& s, const ExitMatrix* cluster,
                            std::span<const ExitMatrix* const> child_law_per_member,
                            EdgeId conditioning_edge) {
  ExitTable table;
  table.members.assign(s.members().begin(), s.members().end());
  table.conditioning_edge = conditioning_edge;
  const std::size_t k = table.members.size();
  table.harmonic.assign(k, 1.0);
  table.rows.resize(k);

  int cond_col = -1;
  if (conditioning_edge != kNoEdge) {
    if (cluster == nullptr) fail(ErrorCode::InvalidArgument, "conditioning needs the cluster exit law");
    cond_col = cluster->column_of(conditioning_edge);
    if (cond_col < 0) fail(ErrorCode::InvalidArgument, "conditioning edge does not leave the cluster");
    for (std::size_t i = 0; i < k; ++i) table.harmonic[i] = cluster->at(cluster->row_of(table.members[i]), cond_col);
  }
  auto h_at = [&](EdgeId f) -> double {
    if (conditioning_edge == kNoEdge) return 1.0;
    if (f == conditioning_edge) return 1.0;
    const VertexId head = g.edge(f).dst;
    if (!s.contains(head)) return 0.0;
    return table.harmonic[s.index_of(head)];
  };

  for (std::size_t i = 0; i < k; ++i) {
    if (table.harmonic[i] <= 0.0) continue;
    const ExitMatrix& child = *child_law_per_member[i];
    const auto row = child.row(child.row_of(table.members[i]));
    EdgeDistribution dist;
    double total = 0.0;
    for (std::size_t c = 0; c < child.exits.size(); ++c) {
      const double p = row[c] * h_at(child.exits[c]);
      if (p > 0.0) {
        dist.emplace_back(child.exits[c], p);
        total += p;
      }
    }
    if (total <= 0.0) continue;
    for (auto& entry : dist) entry.second /= total;
    table.rows[i] = std::move(dist);
  }
  return table;
}

ExitTable conditioned_exit_table(const WeightedDigraph& g, const VertexSubset& s,
                                 std::span<const int> child_of, EdgeId conditioning_edge) {
  if (child_of.size() != s.size()) fail(ErrorCode::InvalidArgument, "child labels must cover the cluster");
  std::vector<int> labels(child_of.begin(), child_of.end());
  std::vector<int> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<ExitMatrix> child_laws;
  child_laws.reserve(distinct.size());
  for (int label : distinct) {
    std::vector<VertexId> part;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) part.push_back(s.members()[i]);
    child_laws.push_back(exit_matrix(g, VertexSubset(g.vertex_count(), std::move(part))));
  }
  std::vector<const ExitMatrix*> per_member(s.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    per_member[i] = &child_laws[std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin()];
  }
  std::optional<ExitMatrix> cluster;
  if (conditioning_edge != kNoEdge) cluster = exit_matrix(g, s);
  return combine_exit_laws(g, s, cluster ? &*cluster : nullptr, per_member, conditioning_edge);
}

ExitTable conditioned_exit_table(const WeightedDigraph& g, const VertexSubset& s, EdgeId conditioning_edge) {
  std::vector<int> labels(s.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);
  return conditioned_exit_table(g, s, labels, conditioning_edge);
}

SchurGraph schur_complement(const WeightedDigraph& g, const VertexSubset& s) {
  const std::size_t n = g.vertex_count();
  SchurGraph result;
  result.original_ids.assign(s.members().begin(), s.members().end());
  std::vector<VertexId> outside;
  for (VertexId v = 0; v < n; ++v)
    if (!s.contains(v)) outside.push_back(v);
  std::vector<int> outside_index(n, -1);
  for (std::size_t i = 0; i < outside.size(); ++i) outside_index[outside[i]] = static_cast<int>(i);

  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.src) && s.contains(e.dst)) {
      edges.push_back({static_cast<VertexId>(s.index_of(e.src)), static_cast<VertexId>(s.index_of(e.dst)), e.weight});
    }
  }
  if (!outside.empty()) {
    // Hitting law of s from each exterior vertex: (I - P_FF) A = P_FS.
    const std::size_t f = outside.size(), k = s.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(f, f);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(f, k);
    for (std::size_t i = 0; i < f; ++i) {
      const VertexId x = outside[i];
      const double deg = g.out_weight(x);
      if (deg <= 0.0) fail(ErrorCode::SingularSystem, "exterior vertex has no out-edges");
      for (EdgeId e : g.out_edges(x)) {
        const Edge& ed = g.edge(e);
        if (s.contains(ed.dst)) {
          b(i, s.index_of(ed.dst)) += ed.weight / deg;
        } else {
          a(i, outside_index[ed.dst]) -= ed.weight / deg;
        }
      }
    }
    Eigen::MatrixXd hit = detail::solve_dense(a, b, ErrorCode::SingularSystem);
    for (std::size_t i = 0; i < k; ++i) {
      const VertexId u = s.members()[i];
      std::vector<double> shortcut(k, 0.0);
      for (EdgeId e : g.out_edges(u)) {
        const Edge& ed = g.edge(e);
        if (s.contains(ed.dst)) continue;
        const int row = outside_index[ed.dst];
        for (std::size_t j = 0; j < k; ++j) shortcut[j] += ed.weight * std::max(0.0, hit(row, j));
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (shortcut[j] > 0.0) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), shortcut[j]});
      }
    }
  }
  result.graph = WeightedDigraph(s.size(), std::move(edges));
  return result;
}

WeightedDigraph time_reversal(const WeightedDigraph& g, const StationaryDistribution& pi) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    edges.push_back({e.dst, e.src, pi[e.src] * e.weight / g.out_weight(e.src)});
  }
  return WeightedDigraph(g.vertex_count(), std::move(edges));
}

TransitionSampler::TransitionSampler(const WeightedDigraph& g) {
  offsets_.reserve(g.vertex_count() + 1);
  offsets_.push_back(0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    double running = 0.0;
    const double deg = g.out_weight(v);
    for (EdgeId e : g.out_edges(v)) {
      running += g.edge(e).weight;
      edges_.push_back(e);
      cumulative_.push_back(running / deg);
    }
    offsets_.push_back(edges_.size());
  }
}

EdgeId TransitionSampler::step(VertexId v, double u) const {
  const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
  const auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
  if (first == last) fail(ErrorCode::InvalidArgument, "walk reached a sink");
  auto it = std::upper_bound(first, last, u);
  if (it == last) --it;
  return edges_[offsets_[v] + static_cast<std::size_t>(it - first)];
}

VisitEstimate visit_count(const WeightedDigraph& g, VertexId v, VertexId s, VertexId t,
                          std::size_t num_trials, std::uint64_t seed) {
  if (!is_strongly_connected(g)) fail(ErrorCode::InvalidArgument, "visit counts need strong connectivity");
  TransitionSampler sampler(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t trial = 0; trial < num_trials; ++trial) {
    VertexId x = s;
    double count = (x == v) ? 1.0 : 0.0;
    for (;;) {
      x = g.edge(sampler.step(x, uniform(rng))).dst;
      if (x == t) break;
      if (x == v) count += 1.0;
    }
    sum += count;
    sum_sq += count * count;
  }
  VisitEstimate est;
  est.trials = num_trials;
  est.mean = sum / static_cast<double>(num_trials);
  const double var = std::max(0.0, sum_sq / static_cast<double>(num_trials) - est.mean * est.mean);
  est.std_error = std::sqrt(var / static_cast<double>(num_trials));
  return est;
}

}  // namespace arbor
