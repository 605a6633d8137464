#pragma once

#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "tows/core.hpp"
#include "tows/graph.hpp"

namespace tows::matroid {

// Bit i is the cover whose upper element is the i-th non-root element in global order.
using Gf2Vector = boost::dynamic_bitset<>;

struct Hyperedge {
    std::string label;       // "SYM:i"
    std::vector<int> support;  // sorted, distinct
};

struct Flattening {
    std::vector<Hyperedge> hyperedges;
    std::vector<int> covers;         // upper elements, global order
    std::vector<int> cover_index;    // element -> bit, -1 for the root
};

Flattening flatten(const Structure& m);

// Covers on the tree path between u and v; rejects pairs that are themselves covers.
Gf2Vector fundamental_cycle(const Structure& m, int u, int v);

struct FundamentalGraph {
    std::vector<std::string> part_y;   // "y:e"
    std::vector<std::string> part_z;   // "z:SYM:i"
    int slots = 1;                     // relations E1..E_slots
    std::vector<std::vector<Gf2Vector>> nbhd;  // nbhd[z][slot]

    // Y and Z as one graph (all slots merged); Y vertices first.
    Graph as_graph() const;
    FundamentalGraph without_y(int y) const;
    FundamentalGraph without_z(int z) const;
    bool operator==(const FundamentalGraph&) const = default;
};

FundamentalGraph lambda_graph(const Structure& m);
FundamentalGraph lambda_general(const Structure& m);

// matrices[z] is slots x slots over GF(2); new slot s = XOR of old slots t with matrices[z][s][t].
using Gf2Matrix = std::vector<std::vector<int>>;
FundamentalGraph change_basis(const FundamentalGraph& f, const std::vector<Gf2Matrix>& matrices);

bool lambda_equivalent(const FundamentalGraph& a, const FundamentalGraph& b);

int gf2_rank(std::vector<Gf2Vector> vectors);

// "fund 1" text block.
std::string write_fund(const FundamentalGraph& f);

}  // namespace tows::matroid
