// arbor: sample, count, inspect and verify arborescences of a weighted digraph.
//
// Exit codes: 0 ok, 1 usage or other error, 2 parse, 3 unreachable vertex,
// 4 coverage failure, 5 graph too large for the exact oracle.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "arbor/error.hpp"
#include "arbor/graph_io.hpp"
#include "arbor/hierarchy.hpp"
#include "arbor/oracle.hpp"
#include "arbor/parallel.hpp"
#include "arbor/reduction.hpp"
#include "arbor/sampler.hpp"
#include "arbor/verify.hpp"

namespace {

using namespace arbor;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
      return 2;
    case ErrorCode::UnreachableVertex:
      return 3;
    case ErrorCode::CoverageFailure:
      return 4;
    case ErrorCode::TooLarge:
      return 5;
    default:
      return 1;
  }
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void check_root(const WeightedDigraph& g, std::optional<VertexId> root) {
  if (root && !g.valid_vertex(*root)) fail(ErrorCode::InvalidArgument, "--root is not a vertex of the graph");
}

SamplerMode parse_mode(const std::string& mode) {
  return mode == "sequential" ? SamplerMode::Sequential : SamplerMode::Hierarchical;
}

struct SampleArgs {
  std::string graph;
  std::uint64_t seed = 0;
  std::optional<VertexId> root;
  std::uint64_t samples = 1;
  std::string mode = "hierarchical";
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> cache;
  unsigned max_rounds = 20;
  bool stats = false;
};

int run_sample(const SampleArgs& args) {
  const GraphFile file = load_graph(args.graph);
  check_root(file.graph, args.root);
  const std::size_t workers = worker_count();
  std::vector<Arborescence> trees;
  if (parse_mode(args.mode) == SamplerMode::Sequential) {
    SequentialSampler sampler(file.graph, args.root);
    std::vector<SequentialStats> stats;
    trees = sampler.sample_batch(args.seed, args.samples, workers, &stats);
    if (args.stats) {
      double steps = 0;
      for (const auto& s : stats) steps += static_cast<double>(s.cover_steps);
      std::cerr << "mean cover steps " << fmt_double(steps / std::max<double>(1, stats.size())) << "\n";
    }
  } else {
    SamplerOptions options;
    options.root = args.root;
    options.budget = args.budget;
    options.multiplicity = args.cache;
    options.max_rounds = args.max_rounds;
    ArborescenceSampler sampler(file.graph, options);
    std::vector<SampleStats> stats;
    trees = sampler.sample_batch(args.seed, args.samples, workers, &stats);
    if (args.stats) {
      double records = 0, rounds = 0, replacements = 0;
      for (const auto& s : stats) {
        records += static_cast<double>(s.transcript_records);
        rounds += s.rounds;
        replacements += static_cast<double>(s.replacements);
      }
      const double k = std::max<double>(1, stats.size());
      std::cerr << "mean transcript records " << fmt_double(records / k) << ", mean rounds " << fmt_double(rounds / k)
                << ", replacements " << fmt_double(replacements) << "\n";
    }
  }
  std::string out;
  for (const auto& t : trees) out += format_arborescence(file.graph, t) + "\n";
  std::fwrite(out.data(), 1, out.size(), stdout);
  return 0;
}

int run_count(const std::string& path, VertexId root) {
  const GraphFile file = load_graph(path);
  check_root(file.graph, root);
  std::cout << count_arborescences(file.graph, root, file.exact_weights).str() << "\n";
  return 0;
}

int run_inspect(const std::string& path, const std::string& stage, VertexId root) {
  const GraphFile file = load_graph(path);
  const WeightedDigraph& g = file.graph;
  check_root(g, root);
  if (stage == "reduce") {
    const auto law = root_distribution(g);
    std::cout << "root law:";
    for (double p : law.probabilities) std::cout << " " << fmt_double(p);
    std::cout << "\nroot: " << root << "\n";
    const ReductionResult result = reduce(g, root);
    std::cout << "patch edges: " << result.patch_edges.size() << "\n";
    for (EdgeId e : result.patch_edges) {
      const Edge& ed = result.eulerian_graph.edge(e);
      std::cout << "  " << ed.src << "->" << ed.dst << "\n";
    }
    std::cout << "eulerian residual: " << fmt_double(eulerian_residual(result.eulerian_graph)) << "\n";
    std::cout << "reduced weights:\n";
    for (EdgeId e = 0; e < result.eulerian_graph.edge_count(); ++e) {
      const Edge& ed = result.eulerian_graph.edge(e);
      std::cout << "  " << e << ": " << ed.src << "->" << ed.dst << " " << fmt_double(ed.weight) << "\n";
    }
    return 0;
  }
  if (is_eulerian(g)) {
    std::cout << "hierarchy of the input graph\n";
    std::cout << dump_hierarchy(build_hierarchy(g));
  } else {
    std::cout << "hierarchy of the walk graph (reduced at root " << root << ", edges flipped)\n";
    std::cout << dump_hierarchy(build_hierarchy(reverse_graph(reduce(g, root).eulerian_graph)));
  }
  return 0;
}

int run_verify(const std::string& path, std::uint64_t samples, std::uint64_t seed, std::optional<VertexId> root,
               const std::string& mode) {
  const GraphFile file = load_graph(path);
  check_root(file.graph, root);
  VerifyConfig config;
  config.samples = samples;
  config.seed = seed;
  config.root = root;
  config.mode = parse_mode(mode);
  config.workers = worker_count();
  std::cout << verify_report(file, config).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample, count and inspect arborescences of weighted digraphs"};
  app.require_subcommand(1);
  const std::vector<std::string> modes{"hierarchical", "sequential"};

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw random arborescences");
  sample_cmd->add_option("--graph", sample.graph, "Graph file")->required();
  sample_cmd->add_option("--seed", sample.seed, "Random seed")->required();
  sample_cmd->add_option("--root", sample.root, "Fix the root");
  sample_cmd->add_option("--samples", sample.samples, "Number of trees")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--mode", sample.mode, "Sampler")->check(CLI::IsMember(modes));
  sample_cmd->add_option("--budget", sample.budget, "Jumping edges per cluster (L)")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--cache", sample.cache, "Stored answers per sojourn (M)")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--max-rounds", sample.max_rounds, "Budget doublings before a coverage failure")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_flag("--stats", sample.stats, "Print sampler statistics to stderr");

  std::string count_graph;
  VertexId count_root = 0;
  auto* count_cmd = app.add_subcommand("count", "Exact total weight of arborescences rooted at a vertex");
  count_cmd->add_option("--graph", count_graph, "Graph file")->required();
  count_cmd->add_option("--root", count_root, "Root")->required();

  std::string inspect_graph, stage;
  VertexId inspect_root = 0;
  auto* inspect_cmd = app.add_subcommand("inspect", "Show the reduction or the cluster hierarchy");
  inspect_cmd->add_option("--graph", inspect_graph, "Graph file")->required();
  inspect_cmd->add_option("--stage", stage, "reduce or hierarchy")
      ->required()
      ->check(CLI::IsMember({"reduce", "hierarchy"}));
  inspect_cmd->add_option("--root", inspect_root, "Root used for the reduction (default 0)");

  std::string verify_graph, verify_mode = "hierarchical";
  std::uint64_t verify_samples = 0, verify_seed = 0;
  std::optional<VertexId> verify_root;
  auto* verify_cmd = app.add_subcommand("verify", "Compare sampled trees with the exact distribution (JSON)");
  verify_cmd->add_option("--graph", verify_graph, "Graph file")->required();
  verify_cmd->add_option("--samples", verify_samples, "Number of trees")->required()->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed, "Random seed")->required();
  verify_cmd->add_option("--root", verify_root, "Compare against trees rooted here only");
  verify_cmd->add_option("--mode", verify_mode, "Sampler")->check(CLI::IsMember(modes));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sample_cmd) return run_sample(sample);
    if (*count_cmd) return run_count(count_graph, count_root);
    if (*inspect_cmd) return run_inspect(inspect_graph, stage, inspect_root);
    if (*verify_cmd) return run_verify(verify_graph, verify_samples, verify_seed, verify_root, verify_mode);
  } catch (const Error& e) {
    std::cerr << "arbor: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "arbor: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
