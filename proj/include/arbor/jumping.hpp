#pragma once

#include <cstdint>
#include <vector>

#include "arbor/cluster_model.hpp"
#include "arbor/randomness.hpp"
#include "arbor/transcript.hpp"

namespace arbor {

enum class JumpStrategy { Sequential, Doubling };

/// Positions of the walk inside node s after t steps of the child-exit chain,
/// for power-of-two block lengths. State k = |s| is the absorbed state (the
/// conditioning edge was taken). Step t consumes the variate (stream, t).
class EndTable {
 public:
  EndTable(const ClusterModel& model, NodeId s, EdgeId e_end, const RandomnessPlan& plan, std::uint64_t stream,
           std::uint64_t length);

  std::uint64_t length() const noexcept { return length_; }
  std::size_t absorbed() const noexcept { return absorbed_; }
  std::size_t levels() const noexcept { return levels_.size(); }

  /// State after 2^level steps from `state` at time t (t a multiple of 2^level).
  std::uint32_t end(std::uint32_t state, std::uint64_t t, std::size_t level) const;

  /// State at every time 0..length-1 starting from `state`, by composing blocks.
  std::vector<std::uint32_t> trajectory(std::uint32_t state) const;

  /// One step of the chain (the level-0 entry, recomputed from its variate).
  std::uint32_t step(std::uint32_t state, std::uint64_t t) const;

  std::uint32_t state_of(VertexId v) const;
  VertexId vertex_of(std::uint32_t state) const { return members_[state]; }

 private:
  const ClusterModel& model_;
  NodeId node_;
  EdgeId e_end_;
  RandomnessPlan plan_;
  std::uint64_t stream_;
  std::uint64_t length_;
  std::size_t absorbed_;
  std::vector<VertexId> members_;
  // levels_[k][(t >> k) * states + state]
  std::vector<std::vector<std::uint32_t>> levels_;
};

/// First `budget` jumping edges of the walk in s from v0, conditioned on
/// leaving s through e_end (kNoEdge: unconditioned). Each child sojourn is a
/// record (Leaf or Frontier). Ends at the record leaving through e_end, or,
/// after budget jumping edges, with an Opaque record of s itself.
Transcript jumping_edges(const ClusterModel& model, NodeId s, VertexId v0, EdgeId e_end, std::uint64_t budget,
                         const RandomnessPlan& plan, std::uint64_t stream,
                         JumpStrategy strategy = JumpStrategy::Sequential);

}  // namespace arbor
