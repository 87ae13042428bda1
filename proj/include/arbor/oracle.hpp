#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arbor/graph.hpp"
#include "arbor/reduction.hpp"

namespace arbor {

using Rational = boost::multiprecision::cpp_rational;

/// Enumeration refuses graphs with more vertices than this.
inline constexpr std::size_t kEnumerationLimit = 8;

/// Exact values of the stored double weights.
std::vector<Rational> exact_weights(const WeightedDigraph& g);

struct CatalogEntry {
  Arborescence tree;
  Rational weight;
};

struct ArborescenceCatalog {
  std::optional<VertexId> root;  // nullopt: arborescences with any root
  std::vector<CatalogEntry> entries;  // sorted by tree
  Rational total = 0;

  /// Position of t in entries, or -1.
  long index_of(const Arborescence& t) const;
  std::vector<double> probabilities() const;
};

/// Every arborescence rooted at r with its exact weight product. `weights`
/// overrides the graph's weights (empty: exact values of the doubles).
/// TooLarge above kEnumerationLimit vertices.
ArborescenceCatalog enumerate_arborescences(const WeightedDigraph& g, VertexId r,
                                            std::span<const Rational> weights = {});
ArborescenceCatalog enumerate_all_arborescences(const WeightedDigraph& g, std::span<const Rational> weights = {});

/// Determinant of the out-degree Laplacian with row and column r removed.
Rational count_arborescences(const WeightedDigraph& g, VertexId r, std::span<const Rational> weights = {});

/// Determinant by fraction-free elimination; rows are scaled to integers first.
Rational determinant(std::vector<std::vector<Rational>> matrix);

/// Exact stationary law; SingularSystem if g is not strongly connected.
std::vector<Rational> exact_stationary_distribution(const WeightedDigraph& g, std::span<const Rational> weights = {});

struct DistributionReport {
  double tv_distance = 0.0;
  double chi_square = 0.0;
  double chi_square_p = 1.0;
  std::size_t degrees_of_freedom = 0;
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> per_tree_counts;  // aligned with catalog entries
};

/// UnknownTree if a sample is not in the catalog.
DistributionReport distribution_report(std::span<const Arborescence> samples, const ArborescenceCatalog& catalog);

/// Total variation distance between the empirical laws of two sample sets.
double empirical_tv(std::span<const Arborescence> a, std::span<const Arborescence> b);

/// One line per tree, "root=r edges=e1,e2,... weight=p/q", canonical order.
std::string export_catalog(const ArborescenceCatalog& catalog);

struct PreservationReport {
  bool constant_ratio = true;
  std::size_t trees = 0;
  Rational ratio = 0;  // w_G(T) / w_G''(T), shared by every tree when constant
  double max_weight_error = 0.0;  // largest relative gap between the double and exact reduced weights
};

/// The reduced weights of result.eulerian_graph recomputed exactly from the
/// input weights (patch edges weigh 1).
std::vector<Rational> exact_reduced_weights(const WeightedDigraph& g, const ReductionResult& result,
                                            std::span<const Rational> weights = {});

/// Redoes the reduction in exact arithmetic and checks that every r-rooted
/// arborescence of g keeps the same weight ratio in the reduced graph.
PreservationReport arborescence_distribution_preserved_check(const WeightedDigraph& g, const ReductionResult& result,
                                                             std::span<const Rational> weights = {});

}  // namespace arbor
