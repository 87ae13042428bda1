#include "arbor/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "arbor/error.hpp"

namespace arbor::gen {

namespace {

void add_cycle(std::vector<Edge>& edges, const std::vector<VertexId>& order, double w) {
  for (std::size_t i = 0; i < order.size(); ++i) edges.push_back({order[i], order[(i + 1) % order.size()], w});
}

std::vector<VertexId> permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<VertexId> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

WeightedDigraph directed_cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId v = 0; v < n; ++v) edges.push_back({v, static_cast<VertexId>((v + 1) % n), 1.0});
  return WeightedDigraph(n, std::move(edges));
}

WeightedDigraph bidirected_complete(std::size_t n, double w) {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      edges.push_back({u, v, w});
      edges.push_back({v, u, w});
    }
  }
  return WeightedDigraph(n, std::move(edges));
}

WeightedDigraph barbell(double w) {
  return WeightedDigraph(3, {{0, 1, w}, {1, 0, w}, {1, 2, 1.0}, {2, 1, 1.0}});
}

WeightedDigraph exponential_chain(std::size_t n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "chain needs two vertices");
  std::vector<Edge> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  for (VertexId v = 1; v < n; ++v) edges.push_back({v, 0, 1.0});
  return WeightedDigraph(n, std::move(edges));
}

WeightedDigraph random_eulerian(std::size_t n, std::size_t extra_cycles, int max_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<Edge> edges;
  if (n == 1) return WeightedDigraph(1, {{0, 0, static_cast<double>(weight(rng))}});
  add_cycle(edges, permutation(n, rng), weight(rng));
  std::uniform_int_distribution<std::size_t> length(2, n);
  for (std::size_t c = 0; c < extra_cycles; ++c) {
    auto order = permutation(n, rng);
    order.resize(length(rng));
    add_cycle(edges, order, weight(rng));
  }
  return WeightedDigraph(n, std::move(edges));
}

WeightedDigraph random_strongly_connected(std::size_t n, std::size_t extra_edges, int max_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<Edge> edges;
  if (n == 1) return WeightedDigraph(1, {{0, 0, static_cast<double>(weight(rng))}});
  const auto order = permutation(n, rng);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({order[i], order[(i + 1) % n], static_cast<double>(weight(rng))});
  }
  std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(n - 1));
  for (std::size_t k = 0; k < extra_edges; ++k) {
    VertexId u = vertex(rng), v = vertex(rng);
    while (v == u) v = vertex(rng);
    edges.push_back({u, v, static_cast<double>(weight(rng))});
  }
  return WeightedDigraph(n, std::move(edges));
}

WeightedDigraph random_rooted_digraph(std::size_t n, std::size_t extra_edges, int max_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<Edge> edges;
  if (n == 1) return WeightedDigraph(1, {{0, 0, static_cast<double>(weight(rng))}});
  const auto order = permutation(n, rng);
  // order[0] is the target; each later vertex points to an earlier one.
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> earlier(0, i - 1);
    edges.push_back({order[i], order[earlier(rng)], static_cast<double>(weight(rng))});
  }
  std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(n - 1));
  VertexId out = vertex(rng);
  while (out == order[0]) out = vertex(rng);
  edges.push_back({order[0], out, static_cast<double>(weight(rng))});
  for (std::size_t k = 0; k < extra_edges; ++k) {
    VertexId u = vertex(rng), v = vertex(rng);
    while (v == u) v = vertex(rng);
    edges.push_back({u, v, static_cast<double>(weight(rng))});
  }
  return WeightedDigraph(n, std::move(edges));
}

}  // namespace arbor::gen
