#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "arbor/cluster_model.hpp"
#include "arbor/graph.hpp"
#include "arbor/reduction.hpp"
#include "arbor/unravel.hpp"

namespace arbor {

inline constexpr double kDefaultBudgetFactor = 8.0;

/// L = c * n^2 * m^2, saturating at 2^62.
std::uint64_t choose_budget(std::uint64_t n, std::uint64_t m, double c = kDefaultBudgetFactor);

/// M = max(64, 4L).
std::uint64_t default_multiplicity(std::uint64_t budget);

/// Lazy: time-ordered expansion that stops at cover (the default).
/// Materialized: the literal AllEdges construction at full depth; its cost
/// grows with L^2, so it suits small graphs with a small fixed budget.
enum class Engine { Lazy, Materialized };

struct SamplerOptions {
  std::optional<std::uint64_t> budget;        // fixed L instead of choose_budget
  std::optional<std::uint64_t> multiplicity;  // fixed M
  double budget_factor = kDefaultBudgetFactor;
  CacheMode mode = CacheMode::Cached;
  bool stop_at_cover = true;
  std::optional<VertexId> root;  // fixed root instead of a sampled one
  unsigned max_rounds = 20;
  Engine engine = Engine::Lazy;
};

struct SampleStats {
  VertexId root = 0;
  unsigned rounds = 0;            // 1 when the first attempt covered
  std::uint64_t budget = 0;       // L of the successful round
  std::uint64_t multiplicity = 0;
  std::uint64_t transcript_records = 0;  // summed over rounds
  std::uint64_t replacements = 0;
  std::uint64_t duplicates_after = 0;
  std::uint64_t sojourns = 0;
  std::size_t hierarchy_nodes = 0;
  std::vector<std::uint64_t> count_at_cover;
};

/// Per-root preprocessing: the Eulerian reduction and the cluster model of
/// the walk graph (the edge-flipped reduced graph, which is its time reversal).
struct PreparedRoot {
  ReductionResult reduction;
  ClusterModel model;
};

/// Hierarchical sampler. Thread-safe; per-root preprocessing is computed once.
class ArborescenceSampler {
 public:
  explicit ArborescenceSampler(WeightedDigraph g, SamplerOptions options = {});

  const WeightedDigraph& graph() const noexcept { return graph_; }
  const SamplerOptions& options() const noexcept { return options_; }
  const StationaryDistribution& root_law() const noexcept { return root_law_; }

  std::shared_ptr<const PreparedRoot> prepare(VertexId root) const;

  /// One arborescence with P{T} proportional to the product of its weights
  /// (or, with a fixed root, among those rooted there).
  Arborescence sample(std::uint64_t seed, SampleStats* stats = nullptr) const;

  /// Sample i uses seed derive_sample_seed(seed, i); output is independent of `workers`.
  std::vector<Arborescence> sample_batch(std::uint64_t seed, std::size_t count, std::size_t workers,
                                         std::vector<SampleStats>* stats = nullptr) const;

 private:
  WeightedDigraph graph_;
  SamplerOptions options_;
  StationaryDistribution root_law_;
  mutable std::mutex mutex_;
  mutable std::map<VertexId, std::shared_ptr<const PreparedRoot>> prepared_;
};

std::uint64_t derive_sample_seed(std::uint64_t seed, std::uint64_t index);

struct SequentialStats {
  VertexId root = 0;
  std::uint64_t cover_steps = 0;
};

/// Plain walk on the time reversal of g from the root until every vertex is
/// visited; first-entry edges, reversed, form the tree.
class SequentialSampler {
 public:
  explicit SequentialSampler(WeightedDigraph g, std::optional<VertexId> root = std::nullopt);

  Arborescence sample(std::uint64_t seed, SequentialStats* stats = nullptr) const;
  std::vector<Arborescence> sample_batch(std::uint64_t seed, std::size_t count, std::size_t workers,
                                         std::vector<SequentialStats>* stats = nullptr) const;

 private:
  struct Walk {
    WeightedDigraph reversal;
    TransitionSampler steps;
  };
  const Walk& walk_for(VertexId root) const;

  WeightedDigraph graph_;
  std::optional<VertexId> root_;
  StationaryDistribution root_law_;
  bool strongly_connected_ = false;
  mutable std::mutex mutex_;
  mutable std::map<VertexId, std::unique_ptr<Walk>> walks_;
};

Arborescence sample_arborescence(const WeightedDigraph& g, std::uint64_t seed, const SamplerOptions& options = {});
Arborescence sequential_aldous_broder(const WeightedDigraph& g, std::uint64_t seed);

}  // namespace arbor
