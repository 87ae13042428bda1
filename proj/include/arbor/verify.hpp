#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "arbor/graph_io.hpp"
#include "arbor/sampler.hpp"

namespace arbor {

enum class SamplerMode { Hierarchical, Sequential };

struct VerifyConfig {
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::optional<VertexId> root;
  SamplerMode mode = SamplerMode::Hierarchical;
  std::size_t workers = 1;
  SamplerOptions sampler;  // root is taken from `root` above
};

struct SampleBatch {
  std::vector<Arborescence> trees;
  std::uint64_t retries = 0;          // extra rounds beyond the first, summed
  double mean_budget_used = 0.0;      // mean L of the successful round
  double mean_transcript_records = 0.0;
};

using BatchSampler = std::function<SampleBatch(const WeightedDigraph&, const VerifyConfig&)>;

/// Draws config.samples trees with the configured sampler.
SampleBatch draw_samples(const WeightedDigraph& g, const VerifyConfig& config);

/// Compares a batch against the exact catalog (of `root`, or of all roots).
/// Schema "1": tv, chi_square, chi_square_p, degrees_of_freedom, samples,
/// seed, mode, root, retries, mean_budget_used, mean_transcript_records and
/// per_tree_counts [{tree, weight, probability, count}].
/// TooLarge above the enumeration limit; UnknownTree if a sample is not an
/// arborescence of the expected kind.
nlohmann::json verify_report(const GraphFile& file, const VerifyConfig& config,
                             const BatchSampler& sampler = draw_samples);

}  // namespace arbor
