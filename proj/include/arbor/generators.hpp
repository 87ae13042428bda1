#pragma once

#include <cstdint>

#include "arbor/graph.hpp"

namespace arbor::gen {

/// 0 -> 1 -> ... -> n-1 -> 0, unit weights.
WeightedDigraph directed_cycle(std::size_t n);

/// Both directions of every pair u < v (u->v first), all of weight w.
WeightedDigraph bidirected_complete(std::size_t n, double w = 1.0);

/// a=0, b=1, c=2 with a<->b of weight w and b<->c of weight 1.
/// Edge ids: 0 a->b, 1 b->a, 2 b->c, 3 c->b.
WeightedDigraph barbell(double w);

/// Path 0 -> 1 -> ... -> n-1 plus an edge from every i > 0 back to 0, unit
/// weights. From 0 the walk needs about 2^n steps to reach n-1.
WeightedDigraph exponential_chain(std::size_t n);

/// Superposition of a random Hamiltonian cycle and `extra_cycles` random
/// simple cycles, each cycle with one integer weight in [1, max_weight].
/// Eulerian and strongly connected.
WeightedDigraph random_eulerian(std::size_t n, std::size_t extra_cycles, int max_weight, std::uint64_t seed);

/// Random Hamiltonian cycle plus `extra_edges` random non-loop edges with
/// integer weights in [1, max_weight]. Strongly connected, usually not Eulerian.
WeightedDigraph random_strongly_connected(std::size_t n, std::size_t extra_edges, int max_weight, std::uint64_t seed);

/// Random in-tree toward a random vertex t, one edge out of t and
/// `extra_edges` random non-loop edges. Every vertex reaches t; the graph
/// need not be strongly connected.
WeightedDigraph random_rooted_digraph(std::size_t n, std::size_t extra_edges, int max_weight, std::uint64_t seed);

}  // namespace arbor::gen
