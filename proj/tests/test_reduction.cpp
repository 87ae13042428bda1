#include <doctest.h>

#include "arbor/error.hpp"
#include "arbor/generators.hpp"
#include "arbor/oracle.hpp"
#include "arbor/reduction.hpp"
#include "support.hpp"

using namespace arbor;

namespace {

std::vector<std::uint64_t> root_counts(const StationaryDistribution& law, std::size_t draws) {
  std::vector<std::uint64_t> counts(law.probabilities.size(), 0);
  for (std::uint64_t s = 0; s < draws; ++s) ++counts[sample_root(law, RandomnessPlan(s))];
  return counts;
}

void check_within_3_sigma(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs) {
  double n = 0;
  for (auto c : counts) n += static_cast<double>(c);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double sigma = std::sqrt(probs[i] * (1 - probs[i]) / n);
    CHECK(std::abs(static_cast<double>(counts[i]) / n - probs[i]) <= 3 * sigma + 1e-12);
  }
}

std::optional<VertexId> common_target(const WeightedDigraph& g) {
  for (VertexId r = 0; r < g.vertex_count(); ++r) {
    const auto reach = can_reach(g, r);
    if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) return r;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("C3 roots are uniform") {
  const auto g = gen::directed_cycle(3);
  std::vector<std::uint64_t> counts(3, 0);
  for (std::uint64_t s = 0; s < 100000; ++s) ++counts[sample_root(g, RandomnessPlan(s))];
  CHECK(test::chi_square_p(counts, {1.0 / 3, 1.0 / 3, 1.0 / 3}) > 0.01);
}

TEST_CASE("two-vertex bidirected roots are uniform") {
  const WeightedDigraph g(2, {{0, 1, 3}, {1, 0, 3}});
  std::vector<std::uint64_t> counts(2, 0);
  for (std::uint64_t s = 0; s < 100000; ++s) ++counts[sample_root(g, RandomnessPlan(s))];
  CHECK(test::chi_square_p(counts, {0.5, 0.5}) > 0.01);
}

TEST_CASE("drawing from the barbell stationary law") {
  const auto pi = stationary_distribution(gen::barbell(1000));
  check_within_3_sigma(root_counts(pi, 200000), {1000.0 / 2002, 1001.0 / 2002, 1.0 / 2002});
}

TEST_CASE("root law is the share of arborescence weight per root") {
  std::vector<WeightedDigraph> graphs{gen::barbell(1000), gen::directed_cycle(3), gen::exponential_chain(4)};
  for (std::uint64_t seed = 0; seed < 20; ++seed) graphs.push_back(gen::random_strongly_connected(4, 3, 9, seed));
  for (std::uint64_t seed = 0; seed < 10; ++seed) graphs.push_back(gen::random_rooted_digraph(5, 3, 9, seed));
  for (const auto& g : graphs) {
    const auto law = root_distribution(g);
    std::vector<Rational> totals;
    Rational sum = 0;
    for (VertexId r = 0; r < g.vertex_count(); ++r) {
      totals.push_back(count_arborescences(g, r));
      sum += totals.back();
    }
    for (VertexId r = 0; r < g.vertex_count(); ++r) {
      CHECK(law[r] == doctest::Approx(static_cast<double>(totals[r] / sum)).epsilon(1e-9));
    }
  }
  // Every barbell root carries exactly one tree, each of weight W.
  const auto bar = root_distribution(gen::barbell(1000));
  for (VertexId r = 0; r < 3; ++r) CHECK(bar[r] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  check_within_3_sigma(root_counts(bar, 100000), {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST_CASE("sampled roots follow the root law") {
  const auto g = gen::random_strongly_connected(5, 5, 9, 17);
  const auto law = root_distribution(g);
  std::vector<std::uint64_t> counts(5, 0);
  for (std::uint64_t s = 0; s < 100000; ++s) ++counts[sample_root(g, RandomnessPlan(s))];
  CHECK(test::chi_square_p(counts, law.probabilities) > 0.001);
}

TEST_CASE("roots outside the closed component have no weight") {
  // 2 -> 0 only; {0, 1} is the closed component.
  const WeightedDigraph g(3, {{0, 1, 1}, {1, 0, 2}, {2, 0, 1}});
  const auto law = root_distribution(g);
  CHECK(law[2] == 0.0);
  CHECK(count_arborescences(g, 2) == 0);
  // Two closed components: no vertex is reachable from all others.
  CHECK_THROWS_AS(root_distribution(WeightedDigraph(2, {{0, 0, 1}, {1, 1, 1}})), Error);
}

TEST_CASE("reducing bidirected K3") {
  const auto result = reduce(gen::bidirected_complete(3), 0);
  CHECK(result.patch_edges.empty());
  CHECK(result.eulerian_graph.edge_count() == 6);
  for (const Edge& e : result.eulerian_graph.edges()) CHECK(e.weight == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(is_eulerian(result.eulerian_graph, 1e-9));
  // Already Eulerian and complete from r: the scale is pi'(u) / deg'(u).
  for (EdgeId e = 0; e < 6; ++e) CHECK(result.scale_record[e] == doctest::Approx((1.0 / 3) / 2).epsilon(1e-12));
}

TEST_CASE("reducing C3 adds the patch edge 0->2") {
  const auto result = reduce(gen::directed_cycle(3), 0);
  REQUIRE(result.patch_edges.size() == 1);
  const Edge& patch = result.eulerian_graph.edge(result.patch_edges[0]);
  CHECK(patch.src == 0);
  CHECK(patch.dst == 2);
  CHECK(result.patch_edges[0] == 3);
  CHECK(eulerian_residual(result.eulerian_graph) <= 1e-9);
  // Original ids are kept.
  for (EdgeId e = 0; e < 3; ++e) {
    CHECK(result.eulerian_graph.edge(e).src == gen::directed_cycle(3).edge(e).src);
    CHECK(result.eulerian_graph.edge(e).dst == gen::directed_cycle(3).edge(e).dst);
  }
}

TEST_CASE("reduction invariants on random inputs") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 2 + seed % 15;
    const WeightedDigraph g = seed % 2 ? gen::random_rooted_digraph(n, seed % 7, 9, seed)
                                       : gen::random_strongly_connected(n, seed % 7, 9, seed);
    const auto root = common_target(g);
    REQUIRE(root);
    const auto result = reduce(g, *root);
    const WeightedDigraph& gg = result.eulerian_graph;
    CHECK(eulerian_residual(gg) <= 1e-9);
    CHECK(is_strongly_connected(gg));
    for (VertexId v = 0; v < n; ++v) {
      CHECK(gg.in_weight(v) == doctest::Approx(result.patched_stationary[v]).epsilon(1e-9));
      CHECK(gg.out_weight(v) == doctest::Approx(result.patched_stationary[v]).epsilon(1e-9));
    }
    for (EdgeId e : result.patch_edges) {
      CHECK(e >= g.edge_count());
      CHECK(gg.edge(e).src == *root);
      CHECK(gg.edge(e).weight > 0);
      for (EdgeId f : g.out_edges(*root)) CHECK(g.edge(f).dst != gg.edge(e).dst);
    }
    CHECK(gg.edge_count() == g.edge_count() + result.patch_edges.size());
    ++checked;
  }
  CHECK(checked == 150);
}

TEST_CASE("inputs that cannot reach the root are rejected") {
  const WeightedDigraph stuck(3, {{0, 1, 1}, {1, 0, 1}, {2, 2, 1}});
  try {
    reduce(stuck, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnreachableVertex);
  }
  const WeightedDigraph sink(2, {{0, 1, 1}});
  try {
    reduce(sink, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnreachableVertex);
  }
}

TEST_CASE("reduction preserves the rooted arborescence distribution") {
  const auto k3 = gen::bidirected_complete(3);
  const auto rk = arborescence_distribution_preserved_check(k3, reduce(k3, 0));
  CHECK(rk.constant_ratio);
  CHECK(rk.trees == 3);
  const auto c3 = gen::directed_cycle(3);
  const auto rc = arborescence_distribution_preserved_check(c3, reduce(c3, 0));
  CHECK(rc.constant_ratio);
  CHECK(rc.trees == 1);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = gen::random_strongly_connected(4, 1 + seed % 5, 5, 300 + seed);
    for (VertexId r = 0; r < 4; ++r) {
      const auto report = arborescence_distribution_preserved_check(g, reduce(g, r));
      CHECK(report.constant_ratio);
      CHECK(report.trees > 0);
      CHECK(report.max_weight_error <= 1e-9);
    }
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gen::random_rooted_digraph(5, 2, 5, seed);
    const auto root = common_target(g);
    const auto report = arborescence_distribution_preserved_check(g, reduce(g, *root));
    CHECK(report.constant_ratio);
  }
}

TEST_CASE("scaling the out-edges of a vertex leaves the reduced distribution unchanged") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto g = gen::random_strongly_connected(4, 3, 9, 500 + seed);
    const VertexId r = static_cast<VertexId>(seed % 4), v = static_cast<VertexId>((seed + 1 + seed / 4) % 4);
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    for (Edge& e : edges)
      if (e.src == v) e.weight *= 7;
    const WeightedDigraph scaled(4, edges);

    const auto base = reduce(g, r);
    const auto other = reduce(scaled, r);
    const auto a = enumerate_arborescences(base.eulerian_graph, r, exact_reduced_weights(g, base));
    const auto b = enumerate_arborescences(other.eulerian_graph, r, exact_reduced_weights(scaled, other));
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].tree == b.entries[i].tree);
      CHECK(a.entries[i].weight / a.total == b.entries[i].weight / b.total);
    }
  }
}
