#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tows/core.hpp"
#include "tows/graph.hpp"

// Seeded instance generators shared by the acceptance suite, the CLI and the tests.
namespace tows::generate {

using Rng = std::mt19937_64;

// G(n, p) on vertices v0..v{n-1}.
Graph random_graph(Rng& rng, int n, double p);

// Root "r" plus elements v1..v{n-1}; parents drawn below the element index,
// `edges` distinct E-pairs drawn uniformly (fewer if the pair space is smaller).
Structure random_tows_graph(Rng& rng, int n, int edges);

// Random tree order with symbols R/3, S/2, T/1 and E/2s; non-symmetric tuples may
// repeat entries. Sizes count every element including the root.
Structure random_structure(Rng& rng, int n, int max_arity);

// Built from single vertices by disjoint unions and joins.
Graph random_cograph(Rng& rng, int n);

// Parts a1.. and b1.., each edge present with probability p; vertex names are shuffled
// so the listed orders are random relative to creation order.
OrderedBipartite random_ordered_bipartite(Rng& rng, int na, int nb, double p);

// Every edge set on parts of the given sizes, in mask order.
std::vector<OrderedBipartite> all_bipartite(int na, int nb);

// Fresh root "r" above a DFS spanning forest of g; E is the edge set of g.
Structure spanning_tree_ordering(Rng& rng, const Graph& g);

// All TOWS graphs on at most `max_elements` elements with at most `max_edges` E-pairs,
// one per isomorphism class.
std::vector<Structure> all_small_tows_graphs(int max_elements, int max_edges);

}  // namespace tows::generate
