#include <doctest.h>

#include <map>
#include <random>

#include "arbor/error.hpp"
#include "arbor/generators.hpp"
#include "arbor/hierarchy.hpp"
#include "arbor/walk.hpp"
#include "support.hpp"

using namespace arbor;

namespace {

std::map<std::pair<VertexId, VertexId>, double> pair_weights(const WeightedDigraph& g) {
  std::map<std::pair<VertexId, VertexId>, double> out;
  for (const Edge& e : g.edges()) out[{e.src, e.dst}] += e.weight;
  return out;
}

double prob_of(const EdgeDistribution& d, EdgeId e) {
  for (const auto& [f, p] : d)
    if (f == e) return p;
  return 0.0;
}

}  // namespace

TEST_CASE("stationary distribution examples") {
  const auto c3 = stationary_distribution(gen::directed_cycle(3));
  for (double p : c3.probabilities) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const auto bar = stationary_distribution(gen::barbell(1000));
  CHECK(bar[0] == doctest::Approx(1000.0 / 2002).epsilon(1e-12));
  CHECK(bar[1] == doctest::Approx(1001.0 / 2002).epsilon(1e-12));
  CHECK(bar[2] == doctest::Approx(1.0 / 2002).epsilon(1e-9));

  const auto two = stationary_distribution(WeightedDigraph(2, {{0, 1, 1}, {1, 0, 1}, {1, 1, 1}}));
  CHECK(two[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(two[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));

  CHECK_THROWS_AS(stationary_distribution(WeightedDigraph(2, {{0, 1, 1}, {1, 1, 1}})), Error);
}

TEST_CASE("stationary law of Eulerian graphs is the degree normalization") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = gen::random_eulerian(2 + seed % 12, seed % 6, 9, seed);
    const auto pi = stationary_distribution(g);
    double total = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) total += g.out_weight(v);
    double sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      CHECK(pi[v] == doctest::Approx(g.out_weight(v) / total).epsilon(1e-9));
      sum += pi[v];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("exit distribution examples") {
  const auto c3 = gen::directed_cycle(3);
  const auto d = exit_distribution(c3, VertexSubset(3, {0, 1}), 0);
  REQUIRE(d.size() == 1);
  CHECK(d[0].first == 1);
  CHECK(d[0].second == doctest::Approx(1.0));

  WeightedDigraph star(2, {{0, 1, 2.0}, {0, 1, 3.0}, {1, 0, 1.0}});
  const auto s = exit_distribution(star, VertexSubset(2, {0}), 0);
  CHECK(prob_of(s, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(prob_of(s, 1) == doctest::Approx(0.6).epsilon(1e-12));

  CHECK_THROWS_AS(exit_distribution(WeightedDigraph(3, {{0, 1, 1}, {1, 0, 1}, {2, 0, 1}}), VertexSubset(3, {0, 1}), 0),
                  Error);
}

TEST_CASE("exit distribution agrees with Monte Carlo on the exponential chain") {
  // Edges: 0 0->1, 1 1->2, 2 2->3, 3 1->0, 4 2->0, 5 3->0.
  const auto g = gen::exponential_chain(4);
  const VertexSubset s(4, {1, 2});
  const auto d = exit_distribution(g, s, 1);
  TransitionSampler sampler(g);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t trials = 1000000;
  std::map<EdgeId, double> counts;
  for (std::size_t i = 0; i < trials; ++i) {
    VertexId x = 1;
    for (;;) {
      const EdgeId e = sampler.step(x, u(rng));
      x = g.edge(e).dst;
      if (!s.contains(x)) {
        counts[e] += 1;
        break;
      }
    }
  }
  double total = 0;
  for (const auto& [e, p] : d) {
    total += p;
    const double freq = counts[e] / trials;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(freq - p) <= 3 * sigma);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prob_of(d, 3) == doctest::Approx(0.5));
  CHECK(prob_of(d, 4) == doctest::Approx(0.25));
  CHECK(prob_of(d, 2) == doctest::Approx(0.25));
}

TEST_CASE("exit distributions sum to one") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 7;
    const auto g = gen::random_strongly_connected(n, n, 9, seed);
    std::vector<VertexId> members;
    for (VertexId v = 0; v + 1 < n; ++v)
      if ((seed + v) % 3 != 0) members.push_back(v);
    if (members.empty()) members.push_back(0);
    const VertexSubset s(n, members);
    const auto matrix = exit_matrix(g, s);
    for (std::size_t r = 0; r < matrix.members.size(); ++r) {
      double sum = 0;
      for (double p : matrix.row(r)) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("conditioning on the only exit changes nothing") {
  // Cluster {0,1} of C3 has the single exit 1->2.
  const auto c3 = gen::directed_cycle(3);
  const VertexSubset s(3, {0, 1});
  const auto plain = conditioned_exit_table(c3, s, kNoEdge);
  const auto cond = conditioned_exit_table(c3, s, 1);
  REQUIRE(plain.rows.size() == cond.rows.size());
  for (std::size_t i = 0; i < plain.rows.size(); ++i) {
    REQUIRE(plain.rows[i].size() == cond.rows[i].size());
    for (std::size_t j = 0; j < plain.rows[i].size(); ++j) {
      CHECK(plain.rows[i][j].first == cond.rows[i][j].first);
      CHECK(plain.rows[i][j].second == doctest::Approx(cond.rows[i][j].second).epsilon(1e-12));
    }
    CHECK(cond.harmonic[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("C3 whole-graph table is deterministic") {
  const auto c3 = gen::directed_cycle(3);
  const auto t = conditioned_exit_table(c3, VertexSubset::all(3), kNoEdge);
  for (VertexId v = 0; v < 3; ++v) {
    const auto& row = t.row_for(v);
    REQUIRE(row.size() == 1);
    CHECK(row[0].first == v);
    CHECK(row[0].second == doctest::Approx(1.0));
  }
}

TEST_CASE("two-exit cluster: conditioning redistributes the other exit") {
  // Path 0 <-> 1 inside S, exits 0->2 (edge 4) and 1->2 (edge 5).
  WeightedDigraph g(3, {{0, 1, 1}, {1, 0, 1}, {2, 0, 1}, {2, 1, 1}, {0, 2, 1}, {1, 2, 1}});
  const VertexSubset s(3, {0, 1});
  const auto t = conditioned_exit_table(g, s, 5);
  // Unconditioned from 0: exit directly w.p. 1/2. Conditioned on leaving by
  // 1->2 the direct exit from 0 is impossible.
  CHECK(prob_of(t.row_for(0), 4) == 0.0);
  CHECK(prob_of(t.row_for(0), 0) == doctest::Approx(1.0));
  CHECK(t.harmonic[0] == doctest::Approx(1.0 / 3));
  CHECK(t.harmonic[1] == doctest::Approx(2.0 / 3));
  const std::vector<int> labels{0, 1};
  const auto check = test::rejection_check(g, s, labels, 5, t, 1000000, 5);
  CHECK(check.tv <= 0.02);
}

TEST_CASE("conditioned tables match rejection sampling on hierarchy clusters") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = gen::random_eulerian(6, 3, 9, 100 + seed);
    const auto h = build_hierarchy(g);
    for (NodeId id = static_cast<NodeId>(h.vertex_count()); id < h.root(); ++id) {
      const auto& node = h.node(id);
      if (node.members.size() > 4) continue;
      const VertexSubset s(g.vertex_count(), node.members);
      std::vector<int> labels;
      for (VertexId v : node.members) labels.push_back(static_cast<int>(h.child_containing(id, v)));
      for (EdgeId e : boundary_edges(g, s, Direction::Outgoing)) {
        const auto t = conditioned_exit_table(g, s, labels, e);
        const auto check = test::rejection_check(g, s, labels, e, t, 200000, seed * 1000 + e);
        CHECK(check.tv <= 0.02);
      }
    }
  }
}

TEST_CASE("Schur complement examples") {
  const auto c3 = gen::directed_cycle(3);
  const auto sc = schur_complement(c3, VertexSubset(3, {0, 1}));
  const auto w = pair_weights(sc.graph);
  CHECK(w.size() == 2);
  CHECK(w.at({0, 1}) == doctest::Approx(1.0));
  CHECK(w.at({1, 0}) == doctest::Approx(1.0));
  CHECK(is_eulerian(sc.graph, 1e-9));

  const auto k3 = gen::bidirected_complete(3);
  const auto whole = schur_complement(k3, VertexSubset::all(3));
  CHECK(whole.graph == k3);

  const auto kc = schur_complement(k3, VertexSubset(3, {0, 1}));
  CHECK(is_eulerian(kc.graph, 1e-9));
  CHECK(kc.graph.out_weight(0) == doctest::Approx(2.0));
  CHECK(kc.graph.out_weight(1) == doctest::Approx(2.0));
  const auto kw = pair_weights(kc.graph);
  CHECK(kw.at({0, 1}) == doctest::Approx(1.5));
  CHECK(kw.at({0, 0}) == doctest::Approx(0.5));
}

TEST_CASE("Schur complements of Eulerian graphs are Eulerian with the same degrees") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 3 + seed % 10;
    const auto g = gen::random_eulerian(n, 2 + seed % 4, 9, seed);
    std::vector<VertexId> members;
    std::mt19937_64 rng(seed);
    for (VertexId v = 0; v < n; ++v)
      if (rng() % 2) members.push_back(v);
    if (members.empty()) members.push_back(0);
    const VertexSubset s(n, members);
    const auto sc = schur_complement(g, s);
    CHECK(eulerian_residual(sc.graph) <= 1e-9);
    for (std::size_t i = 0; i < members.size(); ++i) {
      CHECK(sc.graph.out_weight(static_cast<VertexId>(i)) == doctest::Approx(g.out_weight(members[i])).epsilon(1e-9));
    }
  }
}

TEST_CASE("time reversal transition law") {
  const auto g = gen::random_strongly_connected(5, 6, 9, 3);
  const auto pi = stationary_distribution(g);
  const auto r = time_reversal(g, pi);
  for (VertexId v = 0; v < 5; ++v) CHECK(r.out_weight(v) == doctest::Approx(pi[v]).epsilon(1e-9));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    CHECK(r.edge(e).src == ed.dst);
    CHECK(r.edge(e).dst == ed.src);
    const double p = ed.weight / g.out_weight(ed.src);
    CHECK(r.edge(e).weight / r.out_weight(ed.dst) == doctest::Approx(pi[ed.src] * p / pi[ed.dst]).epsilon(1e-9));
  }
}

TEST_CASE("visit counts") {
  const auto c3 = gen::directed_cycle(3);
  const auto one = visit_count(c3, 1, 0, 0, 1000, 1);
  CHECK(one.mean == 1.0);
  CHECK(one.std_error == 0.0);

  const auto g = gen::random_eulerian(5, 3, 9, 11);
  for (VertexId v = 0; v < 5; ++v) {
    const auto est = visit_count(g, v, 0, 0, 100000, 40 + v);
    CHECK(std::abs(est.mean - g.out_weight(v) / g.out_weight(0)) <= 3 * est.std_error);
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.src == ed.dst) continue;
    for (VertexId v = 0; v < 5; ++v) {
      const auto est = visit_count(g, v, ed.src, ed.dst, 20000, 1000 * e + v);
      CHECK(est.mean <= g.out_weight(v) / ed.weight + 3 * est.std_error);
    }
  }
}

TEST_CASE("visit counts satisfy the triangle inequality") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const std::size_t n = 3 + seed % 4;
    const auto g = gen::random_eulerian(n, 2, 9, 70 + seed);
    const VertexId v = 0, s = 1, t = static_cast<VertexId>(n - 1);
    for (VertexId u = 0; u < n; ++u) {
      const auto st = visit_count(g, v, s, t, 20000, 1 + seed);
      const auto su = visit_count(g, v, s, u, 20000, 2 + seed);
      const auto ut = visit_count(g, v, u, t, 20000, 3 + seed);
      const double sigma =
          std::sqrt(st.std_error * st.std_error + su.std_error * su.std_error + ut.std_error * ut.std_error);
      CHECK(st.mean <= su.mean + ut.mean + 3 * sigma);
    }
  }
}
