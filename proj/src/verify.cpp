#include "arbor/verify.hpp"

#include "arbor/error.hpp"
#include "arbor/oracle.hpp"

namespace arbor {

SampleBatch draw_samples(const WeightedDigraph& g, const VerifyConfig& config) {
  SampleBatch batch;
  const std::size_t count = static_cast<std::size_t>(config.samples);
  if (config.mode == SamplerMode::Sequential) {
    SequentialSampler sampler(g, config.root);
    batch.trees = sampler.sample_batch(config.seed, count, config.workers);
    return batch;
  }
  SamplerOptions options = config.sampler;
  options.root = config.root;
  ArborescenceSampler sampler(g, options);
  std::vector<SampleStats> stats;
  batch.trees = sampler.sample_batch(config.seed, count, config.workers, &stats);
  for (const auto& s : stats) {
    batch.retries += s.rounds > 0 ? s.rounds - 1 : 0;
    batch.mean_budget_used += static_cast<double>(s.budget);
    batch.mean_transcript_records += static_cast<double>(s.transcript_records);
  }
  if (!stats.empty()) {
    batch.mean_budget_used /= static_cast<double>(stats.size());
    batch.mean_transcript_records /= static_cast<double>(stats.size());
  }
  return batch;
}

nlohmann::json verify_report(const GraphFile& file, const VerifyConfig& config, const BatchSampler& sampler) {
  const WeightedDigraph& g = file.graph;
  if (g.vertex_count() > kEnumerationLimit) {
    fail(ErrorCode::TooLarge, "verification enumerates trees and is limited to " + std::to_string(kEnumerationLimit) +
                                  " vertices");
  }
  const auto catalog = config.root ? enumerate_arborescences(g, *config.root, file.exact_weights)
                                   : enumerate_all_arborescences(g, file.exact_weights);
  const SampleBatch batch = sampler(g, config);
  const DistributionReport report = distribution_report(batch.trees, catalog);
  const auto probabilities = catalog.probabilities();

  nlohmann::json out;
  out["schema"] = "1";
  out["tv"] = report.tv_distance;
  out["chi_square"] = report.chi_square;
  out["chi_square_p"] = report.chi_square_p;
  out["degrees_of_freedom"] = report.degrees_of_freedom;
  out["samples"] = report.samples;
  out["seed"] = config.seed;
  out["mode"] = config.mode == SamplerMode::Sequential ? "sequential" : "hierarchical";
  out["root"] = config.root ? nlohmann::json(*config.root) : nlohmann::json(nullptr);
  out["retries"] = batch.retries;
  out["mean_budget_used"] = batch.mean_budget_used;
  out["mean_transcript_records"] = batch.mean_transcript_records;
  nlohmann::json trees = nlohmann::json::array();
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    trees.push_back({{"tree", format_arborescence(g, catalog.entries[i].tree)},
                     {"weight", catalog.entries[i].weight.str()},
                     {"probability", probabilities[i]},
                     {"count", report.per_tree_counts[i]}});
  }
  out["per_tree_counts"] = std::move(trees);
  return out;
}

}  // namespace arbor
