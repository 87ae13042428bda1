#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "arbor/cluster_model.hpp"
#include "arbor/randomness.hpp"
#include "arbor/transcript.hpp"

namespace arbor {

/// Cached: every child sojourn (node, entry, exit) picks one of M stored
/// answers; a stored answer used twice in one unraveling is replaced by a
/// fresh one. Fresh: every sojourn gets its own stream (the reference mode).
enum class CacheMode { Cached, Fresh };

struct UnravelOptions {
  std::uint64_t budget = 1;       // L, jumping edges per node
  std::uint64_t multiplicity = 64;  // M, stored answers per sojourn type
  CacheMode mode = CacheMode::Cached;
  bool stop_at_cover = true;
};

struct UnravelResult {
  Transcript transcript;
  CoverageReport coverage;
  std::uint64_t replacements = 0;      // duplicate answers swapped for fresh ones
  std::uint64_t duplicates_after = 0;  // streams still used twice after replacement
  std::uint64_t sojourns = 0;          // expanded internal sojourns
  /// Jumping edges per node emitted by the time the last vertex was first entered.
  std::vector<std::uint64_t> count_at_cover;
  std::vector<std::uint64_t> final_counts;
};

/// Expands the walk from `start` in time order, recursing into each child
/// sojourn (conditioned on its exit) while the child's budget lasts, and
/// stopping once every vertex is entered (if stop_at_cover) or the root's
/// budget is spent.
UnravelResult unravel(const ClusterModel& model, VertexId start, const RandomnessPlan& plan,
                      const UnravelOptions& options);

struct AllEdgesStats {
  std::uint64_t replacements = 0;
  std::uint64_t answers_computed = 0;
};

/// Literal depth-doubling construction with an M-answer cache per (node,
/// entry, exit, depth). answer(s, v, e, 1)[i] is the jumping-edge transcript
/// drawn with slot i; answer(s, v, e, 2l)[i] splices into answer(s, v, e, l)[i]
/// a stored depth-l answer for each unexpanded child, chosen uniformly among
/// the M slots, then trims to the budget. Suited to small graphs and budgets.
class AllEdges {
 public:
  AllEdges(const ClusterModel& model, const RandomnessPlan& plan, std::uint64_t budget, std::uint64_t multiplicity);

  /// depth is rounded up to a power of two.
  const Transcript& answer(NodeId s, VertexId v, EdgeId e, std::uint32_t depth, std::uint64_t slot);

  const AllEdgesStats& stats() const noexcept { return stats_; }

 private:
  using Key = std::tuple<NodeId, VertexId, EdgeId, std::uint32_t, std::uint64_t>;

  const ClusterModel& model_;
  RandomnessPlan plan_;
  std::uint64_t budget_;
  std::uint64_t multiplicity_;
  std::map<Key, std::unique_ptr<Transcript>> memo_;
  AllEdgesStats stats_;
};

/// Convenience wrapper: all_edges(s, v, e) at the given depth using slot 0.
Transcript all_edges(const ClusterModel& model, NodeId s, VertexId v, EdgeId e, std::uint64_t budget,
                     std::uint32_t depth, const RandomnessPlan& plan, std::uint64_t multiplicity);

}  // namespace arbor
