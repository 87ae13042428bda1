#include "arbor/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arbor/error.hpp"
#include "arbor/parallel.hpp"

namespace arbor {

std::uint64_t choose_budget(std::uint64_t n, std::uint64_t m, double c) {
  const long double value = static_cast<long double>(c) * n * n * m * m;
  constexpr long double cap = static_cast<long double>(std::uint64_t{1} << 62);
  if (!(value < cap)) return std::uint64_t{1} << 62;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(value)));
}

std::uint64_t default_multiplicity(std::uint64_t budget) {
  if (budget > (std::uint64_t{1} << 60)) return std::uint64_t{1} << 62;
  return std::max<std::uint64_t>(64, 4 * budget);
}

std::uint64_t derive_sample_seed(std::uint64_t seed, std::uint64_t index) {
  return hash_words({seed, index, static_cast<std::uint64_t>(StreamDomain::Sample)});
}

ArborescenceSampler::ArborescenceSampler(WeightedDigraph g, SamplerOptions options)
    : graph_(std::move(g)), options_(options) {
  if (options_.root) {
    if (!graph_.valid_vertex(*options_.root)) fail(ErrorCode::InvalidArgument, "root is not a vertex");
    const auto reach = can_reach(graph_, *options_.root);
    for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
      if (!reach[v]) fail(ErrorCode::UnreachableVertex, "vertex " + std::to_string(v) + " cannot reach the root");
    }
  } else {
    root_law_ = root_distribution(graph_);
  }
}

std::shared_ptr<const PreparedRoot> ArborescenceSampler::prepare(VertexId root) const {
  std::lock_guard lock(mutex_);
  auto& slot = prepared_[root];
  if (!slot) {
    ReductionResult reduction = reduce(graph_, root);
    ClusterModel model(reverse_graph(reduction.eulerian_graph));
    slot = std::make_shared<const PreparedRoot>(PreparedRoot{std::move(reduction), std::move(model)});
  }
  return slot;
}

Arborescence ArborescenceSampler::sample(std::uint64_t seed, SampleStats* stats) const {
  const RandomnessPlan plan(seed);
  const std::size_t n = graph_.vertex_count();
  const VertexId root = options_.root ? *options_.root : sample_root(root_law_, plan);
  SampleStats local;
  local.root = root;
  Arborescence tree{root, std::vector<EdgeId>(n, kNoEdge)};
  if (n == 1) {
    local.rounds = 1;
    if (stats) *stats = local;
    return tree;
  }

  const auto prepared = prepare(root);
  const ClusterModel& model = prepared->model;
  local.hierarchy_nodes = model.hierarchy().node_count();
  std::uint64_t budget =
      options_.budget ? *options_.budget
                      : choose_budget(model.graph().vertex_count(), model.graph().edge_count(), options_.budget_factor);
  for (unsigned round = 0; round < options_.max_rounds; ++round) {
    UnravelOptions uo;
    uo.budget = budget;
    uo.multiplicity = options_.multiplicity ? *options_.multiplicity : default_multiplicity(budget);
    uo.mode = options_.mode;
    uo.stop_at_cover = options_.stop_at_cover;
    const RandomnessPlan round_plan = plan.derive(round + 1);
    UnravelResult result;
    if (options_.engine == Engine::Materialized) {
      const Hierarchy& h = model.hierarchy();
      AllEdges engine(model, round_plan, budget, uo.multiplicity);
      const std::uint64_t slot = round_plan.below(StreamDomain::TopSlot, 0, 0, uo.multiplicity);
      result.transcript = engine.answer(h.root(), root, kNoEdge, std::max<std::uint32_t>(1, h.height()), slot);
      result.coverage = check_coverage(h, result.transcript);
      result.replacements = engine.stats().replacements;
    } else {
      result = unravel(model, root, round_plan, uo);
    }

    local.rounds = round + 1;
    local.budget = budget;
    local.multiplicity = uo.multiplicity;
    local.transcript_records += result.transcript.records.size();
    local.replacements += result.replacements;
    local.duplicates_after += result.duplicates_after;
    local.sojourns += result.sojourns;
    if (result.coverage.covered) {
      local.count_at_cover = std::move(result.count_at_cover);
      // An edge entering v in the walk graph is the reduced-graph edge leaving v.
      const auto first = extract_first_visits(result.transcript, root, n);
      for (VertexId v = 0; v < n; ++v) {
        if (v == root) continue;
        if (first[v] >= graph_.edge_count()) fail(ErrorCode::CoverageFailure, "first visit through a patch edge");
        tree.parent_edge[v] = first[v];
      }
      if (stats) *stats = std::move(local);
      return tree;
    }
    budget = budget > (std::uint64_t{1} << 61) ? budget : 2 * budget;
  }
  fail(ErrorCode::CoverageFailure, "walk did not cover the graph within " + std::to_string(options_.max_rounds) + " rounds");
}

std::vector<Arborescence> ArborescenceSampler::sample_batch(std::uint64_t seed, std::size_t count, std::size_t workers,
                                                            std::vector<SampleStats>* stats) const {
  std::vector<Arborescence> out(count);
  if (stats) stats->assign(count, {});
  parallel_for(count, workers, [&](std::size_t i) {
    out[i] = sample(derive_sample_seed(seed, i), stats ? &(*stats)[i] : nullptr);
  });
  return out;
}

SequentialSampler::SequentialSampler(WeightedDigraph g, std::optional<VertexId> root)
    : graph_(std::move(g)), root_(root) {
  strongly_connected_ = is_strongly_connected(graph_);
  if (root_) {
    if (!graph_.valid_vertex(*root_)) fail(ErrorCode::InvalidArgument, "root is not a vertex");
  } else {
    root_law_ = root_distribution(graph_);
  }
}

const SequentialSampler::Walk& SequentialSampler::walk_for(VertexId root) const {
  std::lock_guard lock(mutex_);
  auto& slot = walks_[root];
  if (!slot) {
    // Strongly connected inputs are walked as they are; otherwise the
    // reduction's root out-edges make the walk recurrent.
    WeightedDigraph reversal = strongly_connected_
                                   ? time_reversal(graph_, stationary_distribution(graph_))
                                   : reverse_graph(reduce(graph_, root).eulerian_graph);
    TransitionSampler steps(reversal);
    slot = std::make_unique<Walk>(Walk{std::move(reversal), std::move(steps)});
  }
  return *slot;
}

Arborescence SequentialSampler::sample(std::uint64_t seed, SequentialStats* stats) const {
  const RandomnessPlan plan(seed);
  const std::size_t n = graph_.vertex_count();
  const VertexId root = root_ ? *root_ : sample_root(root_law_, plan);
  Arborescence tree{root, std::vector<EdgeId>(n, kNoEdge)};
  const Walk& walk = walk_for(root);
  std::vector<bool> seen(n, false);
  seen[root] = true;
  std::size_t remaining = n - 1;
  VertexId x = root;
  std::uint64_t t = 0;
  while (remaining > 0) {
    const EdgeId e = walk.steps.step(x, plan.uniform(StreamDomain::Sequential, 0, t++).to_double());
    x = walk.reversal.edge(e).dst;
    if (!seen[x]) {
      seen[x] = true;
      tree.parent_edge[x] = e;
      --remaining;
    }
  }
  if (stats) *stats = {root, t};
  return tree;
}

std::vector<Arborescence> SequentialSampler::sample_batch(std::uint64_t seed, std::size_t count, std::size_t workers,
                                                          std::vector<SequentialStats>* stats) const {
  std::vector<Arborescence> out(count);
  if (stats) stats->assign(count, {});
  parallel_for(count, workers, [&](std::size_t i) {
    out[i] = sample(derive_sample_seed(seed, i), stats ? &(*stats)[i] : nullptr);
  });
  return out;
}

Arborescence sample_arborescence(const WeightedDigraph& g, std::uint64_t seed, const SamplerOptions& options) {
  return ArborescenceSampler(g, options).sample(seed);
}

Arborescence sequential_aldous_broder(const WeightedDigraph& g, std::uint64_t seed) {
  return SequentialSampler(g).sample(seed);
}

}  // namespace arbor
