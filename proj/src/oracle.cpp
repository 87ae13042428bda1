#include "arbor/oracle.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>

#include "arbor/error.hpp"

namespace arbor {

namespace mp = boost::multiprecision;
using Integer = mp::cpp_int;

namespace {

std::vector<Rational> resolve_weights(const WeightedDigraph& g, std::span<const Rational> weights) {
  if (weights.empty()) return exact_weights(g);
  if (weights.size() != g.edge_count()) fail(ErrorCode::InvalidArgument, "one exact weight per edge is required");
  return {weights.begin(), weights.end()};
}

void enumerate_into(const WeightedDigraph& g, VertexId r, const std::vector<Rational>& w,
                    std::vector<CatalogEntry>& out) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<EdgeId>> choices(n);
  for (VertexId v = 0; v < n; ++v) {
    if (v == r) continue;
    for (EdgeId e : g.out_edges(v)) {
      if (g.edge(e).dst != v) choices[v].push_back(e);
    }
    if (choices[v].empty()) return;
  }
  Arborescence t{r, std::vector<EdgeId>(n, kNoEdge)};
  std::vector<std::size_t> pick(n, 0);
  for (;;) {
    for (VertexId v = 0; v < n; ++v) {
      if (v != r) t.parent_edge[v] = choices[v][pick[v]];
    }
    if (validate_arborescence(g, t)) {
      Rational weight = 1;
      for (VertexId v = 0; v < n; ++v) {
        if (v != r) weight *= w[t.parent_edge[v]];
      }
      out.push_back({t, weight});
    }
    VertexId v = 0;
    for (; v < n; ++v) {
      if (v == r) continue;
      if (++pick[v] < choices[v].size()) break;
      pick[v] = 0;
    }
    if (v == n) return;
  }
}

ArborescenceCatalog finish(std::optional<VertexId> root, std::vector<CatalogEntry> entries) {
  ArborescenceCatalog c;
  c.root = root;
  std::sort(entries.begin(), entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.tree < b.tree; });
  c.entries = std::move(entries);
  for (const auto& e : c.entries) c.total += e.weight;
  return c;
}

void guard(const WeightedDigraph& g) {
  if (g.vertex_count() > kEnumerationLimit) {
    fail(ErrorCode::TooLarge, "enumeration is limited to " + std::to_string(kEnumerationLimit) + " vertices");
  }
}

}  // namespace

std::vector<Rational> exact_weights(const WeightedDigraph& g) {
  std::vector<Rational> w;
  w.reserve(g.edge_count());
  for (const Edge& e : g.edges()) w.emplace_back(e.weight);
  return w;
}

long ArborescenceCatalog::index_of(const Arborescence& t) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), t,
                             [](const CatalogEntry& e, const Arborescence& x) { return e.tree < x; });
  return it != entries.end() && it->tree == t ? it - entries.begin() : -1;
}

std::vector<double> ArborescenceCatalog::probabilities() const {
  std::vector<double> p;
  p.reserve(entries.size());
  for (const auto& e : entries) p.push_back(static_cast<double>(Rational(e.weight / total)));
  return p;
}

ArborescenceCatalog enumerate_arborescences(const WeightedDigraph& g, VertexId r, std::span<const Rational> weights) {
  guard(g);
  if (!g.valid_vertex(r)) fail(ErrorCode::InvalidArgument, "root is not a vertex");
  const auto w = resolve_weights(g, weights);
  std::vector<CatalogEntry> entries;
  enumerate_into(g, r, w, entries);
  return finish(r, std::move(entries));
}

ArborescenceCatalog enumerate_all_arborescences(const WeightedDigraph& g, std::span<const Rational> weights) {
  guard(g);
  const auto w = resolve_weights(g, weights);
  std::vector<CatalogEntry> entries;
  for (VertexId r = 0; r < g.vertex_count(); ++r) enumerate_into(g, r, w, entries);
  return finish(std::nullopt, std::move(entries));
}

Rational determinant(std::vector<std::vector<Rational>> matrix) {
  const std::size_t k = matrix.size();
  if (k == 0) return 1;
  // Clear denominators row by row, remembering the scale.
  Rational scale = 1;
  std::vector<std::vector<Integer>> a(k, std::vector<Integer>(k));
  for (std::size_t i = 0; i < k; ++i) {
    Integer l = 1;
    for (const Rational& x : matrix[i]) l = mp::lcm(l, mp::denominator(x));
    scale *= l;
    for (std::size_t j = 0; j < k; ++j) a[i][j] = mp::numerator(matrix[i][j]) * (l / mp::denominator(matrix[i][j]));
  }
  // Bareiss elimination with row pivoting.
  int sign = 1;
  Integer prev = 1;
  for (std::size_t p = 0; p + 1 < k; ++p) {
    if (a[p][p] == 0) {
      std::size_t swap = p + 1;
      while (swap < k && a[swap][p] == 0) ++swap;
      if (swap == k) return 0;
      std::swap(a[p], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
      a[i][p] = 0;
    }
    prev = a[p][p];
  }
  return Rational(sign * a[k - 1][k - 1]) / scale;
}

Rational count_arborescences(const WeightedDigraph& g, VertexId r, std::span<const Rational> weights) {
  if (!g.valid_vertex(r)) fail(ErrorCode::InvalidArgument, "root is not a vertex");
  const auto w = resolve_weights(g, weights);
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<Rational>> lap(n, std::vector<Rational>(n, Rational(0)));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    lap[ed.src][ed.src] += w[e];
    lap[ed.src][ed.dst] -= w[e];
  }
  std::vector<std::vector<Rational>> minor;
  for (VertexId i = 0; i < n; ++i) {
    if (i == r) continue;
    std::vector<Rational> row;
    for (VertexId j = 0; j < n; ++j) {
      if (j != r) row.push_back(lap[i][j]);
    }
    minor.push_back(std::move(row));
  }
  return determinant(std::move(minor));
}

std::vector<Rational> exact_stationary_distribution(const WeightedDigraph& g, std::span<const Rational> weights) {
  if (!is_strongly_connected(g)) fail(ErrorCode::SingularSystem, "graph is not strongly connected");
  const auto w = resolve_weights(g, weights);
  const std::size_t n = g.vertex_count();
  std::vector<Rational> deg(n, Rational(0));
  for (EdgeId e = 0; e < g.edge_count(); ++e) deg[g.edge(e).src] += w[e];
  // Rows: (P^T - I) x = 0, last row replaced by sum(x) = 1.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
  for (VertexId v = 0; v < n; ++v) a[v][v] -= 1;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    a[ed.dst][ed.src] += w[e] / deg[ed.src];
  }
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1;
  a[n - 1][n] = 1;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t piv = p;
    while (piv < n && a[piv][p] == 0) ++piv;
    if (piv == n) fail(ErrorCode::SingularSystem, "stationary system is singular");
    std::swap(a[p], a[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == p || a[i][p] == 0) continue;
      const Rational f = a[i][p] / a[p][p];
      for (std::size_t j = p; j <= n; ++j) a[i][j] -= f * a[p][j];
    }
  }
  std::vector<Rational> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  return pi;
}

DistributionReport distribution_report(std::span<const Arborescence> samples, const ArborescenceCatalog& catalog) {
  DistributionReport report;
  report.samples = samples.size();
  report.per_tree_counts.assign(catalog.entries.size(), 0);
  for (const Arborescence& t : samples) {
    const long idx = catalog.index_of(t);
    if (idx < 0) fail(ErrorCode::UnknownTree, "sampled tree rooted at " + std::to_string(t.root) + " is not in the catalog");
    ++report.per_tree_counts[idx];
  }
  const auto p = catalog.probabilities();
  const double total = static_cast<double>(samples.size());
  if (total == 0) return report;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double observed = static_cast<double>(report.per_tree_counts[i]);
    const double expected = total * p[i];
    report.tv_distance += std::abs(observed / total - p[i]);
    report.chi_square += (observed - expected) * (observed - expected) / expected;
  }
  report.tv_distance /= 2;
  report.degrees_of_freedom = p.empty() ? 0 : p.size() - 1;
  report.chi_square_p = report.degrees_of_freedom == 0
                            ? 1.0
                            : boost::math::gamma_q(report.degrees_of_freedom / 2.0, report.chi_square / 2.0);
  return report;
}

double empirical_tv(std::span<const Arborescence> a, std::span<const Arborescence> b) {
  std::map<Arborescence, std::pair<double, double>> freq;
  for (const auto& t : a) freq[t].first += 1.0 / static_cast<double>(a.size());
  for (const auto& t : b) freq[t].second += 1.0 / static_cast<double>(b.size());
  double tv = 0.0;
  for (const auto& [t, f] : freq) tv += std::abs(f.first - f.second);
  return tv / 2;
}

std::string export_catalog(const ArborescenceCatalog& catalog) {
  std::string out = "total=" + catalog.total.str() + "\n";
  for (const auto& e : catalog.entries) {
    std::vector<EdgeId> edges;
    for (EdgeId id : e.tree.parent_edge) {
      if (id != kNoEdge) edges.push_back(id);
    }
    std::sort(edges.begin(), edges.end());
    out += "root=" + std::to_string(e.tree.root) + " edges=";
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(edges[i]);
    }
    out += " weight=" + e.weight.str() + "\n";
  }
  return out;
}

std::vector<Rational> exact_reduced_weights(const WeightedDigraph& g, const ReductionResult& result,
                                            std::span<const Rational> weights) {
  const auto w = resolve_weights(g, weights);
  const WeightedDigraph& reduced = result.eulerian_graph;
  std::vector<Rational> patched(w);
  patched.resize(reduced.edge_count(), Rational(1));
  const auto pi = exact_stationary_distribution(reduced, patched);
  std::vector<Rational> deg(reduced.vertex_count(), Rational(0));
  for (EdgeId e = 0; e < reduced.edge_count(); ++e) deg[reduced.edge(e).src] += patched[e];
  std::vector<Rational> scaled(reduced.edge_count());
  for (EdgeId e = 0; e < reduced.edge_count(); ++e) {
    const VertexId u = reduced.edge(e).src;
    scaled[e] = patched[e] * pi[u] / deg[u];
  }
  return scaled;
}

PreservationReport arborescence_distribution_preserved_check(const WeightedDigraph& g, const ReductionResult& result,
                                                             std::span<const Rational> weights) {
  guard(g);
  const auto w = resolve_weights(g, weights);
  const WeightedDigraph& reduced = result.eulerian_graph;
  const auto scaled = exact_reduced_weights(g, result, w);
  PreservationReport report;
  for (EdgeId e = 0; e < reduced.edge_count(); ++e) {
    const double exact = static_cast<double>(scaled[e]);
    report.max_weight_error = std::max(report.max_weight_error, std::abs(reduced.edge(e).weight - exact) / exact);
  }

  const auto original = enumerate_arborescences(g, result.root, w);
  const auto rescaled = enumerate_arborescences(reduced, result.root, scaled);
  // Trees of the reduced graph that use a patch edge would break the correspondence.
  report.trees = original.entries.size();
  if (rescaled.entries.size() != original.entries.size()) report.constant_ratio = false;
  for (const auto& entry : original.entries) {
    const long idx = rescaled.index_of(entry.tree);
    if (idx < 0) {
      report.constant_ratio = false;
      continue;
    }
    const Rational ratio = entry.weight / rescaled.entries[idx].weight;
    if (report.ratio == 0) report.ratio = ratio;
    if (ratio != report.ratio) report.constant_ratio = false;
  }
  return report;
}

}  // namespace arbor
