#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "arbor/graph.hpp"

namespace arbor {

/// pi with pi^T P = pi^T for P(u, v) = w(u, v) / out_degree(u).
struct StationaryDistribution {
  std::vector<double> probabilities;

  double operator[](VertexId v) const { return probabilities[v]; }
};

/// Throws SingularSystem unless g is strongly connected.
StationaryDistribution stationary_distribution(const WeightedDigraph& g);

/// First-exit law of the walk started inside a vertex set, for every start.
struct ExitMatrix {
  std::vector<VertexId> members;  // row order, sorted
  std::vector<EdgeId> exits;      // column order, sorted edge ids of the outgoing boundary
  std::vector<double> probs;      // row-major members x exits

  std::span<const double> row(std::size_t r) const {
    return {probs.data() + r * exits.size(), exits.size()};
  }
  double at(std::size_t r, std::size_t c) const { return probs[r * exits.size() + c]; }
  /// Column of e in exits, or -1.
  int column_of(EdgeId e) const;
  int row_of(VertexId v) const;
};

/// Solves the absorbing chain on s. Throws TrappedCluster if some member
/// cannot leave s.
ExitMatrix exit_matrix(const WeightedDigraph& g, const VertexSubset& s);

using EdgeDistribution = std::vector<std::pair<EdgeId, double>>;

EdgeDistribution exit_distribution(const WeightedDigraph& g, const VertexSubset& s, VertexId v);

/// Per-vertex law of the first exit from the vertex's child cluster, for the
/// walk in a cluster conditioned (via the Doob h-transform) on leaving the
/// cluster through conditioning_edge. Unconditioned when conditioning_edge is
/// kNoEdge.
struct ExitTable {
  std::vector<VertexId> members;
  EdgeId conditioning_edge = kNoEdge;
  /// h(v): probability of leaving the cluster through conditioning_edge (1 when unconditioned).
  std::vector<double> harmonic;
  /// Rows follow members; zero-probability edges are omitted. Empty row when h(v) = 0.
  std::vector<EdgeDistribution> rows;

  /// Throws ZeroConditioning for a start that cannot satisfy the conditioning.
  const EdgeDistribution& row_for(VertexId v) const;
};

/// child_of[i] labels the child cluster of members()[i]; labels are arbitrary ints.
ExitTable conditioned_exit_table(const WeightedDigraph& g, const VertexSubset& s,
                                 std::span<const int> child_of, EdgeId conditioning_edge);

/// Same with singleton children, i.e. rows are one-step transitions of the conditioned walk.
ExitTable conditioned_exit_table(const WeightedDigraph& g, const VertexSubset& s,
                                 EdgeId conditioning_edge);

/// Building block shared with the sampler: combines the cluster's own exit
/// law (for h) with per-member child exit laws. cluster may be null only when
/// conditioning_edge is kNoEdge.
ExitTable combine_exit_laws(const WeightedDigraph& g, const VertexSubset& s, const ExitMatrix* cluster,
                            std::span<const ExitMatrix* const> child_law_per_member,
                            EdgeId conditioning_edge);

struct SchurGraph {
  WeightedDigraph graph;
  std::vector<VertexId> original_ids;  // new id -> id in the source graph
};

/// Induced subgraph of s plus shortcut edges u->v of weight deg(u) * P(u exits s,
/// first returns at v). Throws SingularSystem when the exterior cannot return.
SchurGraph schur_complement(const WeightedDigraph& g, const VertexSubset& s);

/// Walk on the time reversal of g: edge k=(u,v) becomes (v,u) with weight
/// pi(u) w(u,v) / deg(u), so the out-degree of v equals pi(v) and the
/// transition law is pi(u) P(u,v) / pi(v).
WeightedDigraph time_reversal(const WeightedDigraph& g, const StationaryDistribution& pi);

/// Cumulative out-edge tables for step-by-step simulation.
class TransitionSampler {
 public:
  explicit TransitionSampler(const WeightedDigraph& g);
  /// u uniform in [0, 1).
  EdgeId step(VertexId v, double u) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<EdgeId> edges_;
  std::vector<double> cumulative_;
};

struct VisitEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Monte Carlo estimate of H_v(s, t): visits to v at times 0 <= k < tau, where
/// tau is the first time >= 1 the walk from s is at t (first time >= 0 when s != t).
VisitEstimate visit_count(const WeightedDigraph& g, VertexId v, VertexId s, VertexId t,
                          std::size_t num_trials, std::uint64_t seed);

}  // namespace arbor
