#pragma once

#include <utility>
#include <vector>

#include "tows/graph.hpp"

namespace tows::sparsity {

// Largest t with K_{t,t} as a (not necessarily induced) subgraph.
int biclique_number(const Graph& g);

// Exact t-subdivision of K_n as an induced subgraph.
bool induced_clique_subdivision(const Graph& g, int t, int n);

// Star-forest contractions followed by deletions, up to isomorphism; never empty graphs.
std::vector<Graph> depth1_minors(const Graph& g);

bool is_minor(const Graph& h, const Graph& g);

// Merges (keep, absorbed) of current part representatives, n-1 of them.
using ContractionSequence = std::vector<std::pair<int, int>>;

int red_width(const Graph& g, const ContractionSequence& seq);

struct TwinWidth {
    int width = 0;
    ContractionSequence sequence;  // an optimal one
};

TwinWidth tww_exact(const Graph& g);

}  // namespace tows::sparsity
