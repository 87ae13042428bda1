#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "arbor/graph.hpp"
#include "arbor/oracle.hpp"

namespace arbor {

/// Text format: header "n m" or "n m undirected", then m lines "u v w" with
/// 0-based ids and w a positive decimal or "p/q". Lines whose first
/// non-blank character is '#' and blank lines are skipped. An undirected
/// edge i becomes directed edges 2i (u->v) and 2i+1 (v->u).
struct GraphFile {
  WeightedDigraph graph;
  std::vector<Rational> exact_weights;  // the weights as written, per directed edge
  bool undirected = false;
};

/// Parse errors carry the 1-based line number.
GraphFile parse_graph(std::string_view text);
GraphFile load_graph(const std::string& path);

/// Directed form with weights printed exactly (round-trips through parse_graph).
std::string format_graph(const WeightedDigraph& g);

/// Exact rational value of a decimal, scientific or "p/q" literal.
Rational parse_weight(std::string_view token);

/// "root=r; v:parent,..." over non-root vertices in increasing order.
std::string format_arborescence(const WeightedDigraph& g, const Arborescence& t);

}  // namespace arbor
