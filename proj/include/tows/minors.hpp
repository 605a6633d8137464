#pragma once

#include <set>
#include <string>
#include <vector>

#include "tows/core.hpp"
#include "tows/graph.hpp"

namespace tows::minors {

// Identifies v with its parent u; u keeps its name, children of v move to u.
// Symmetric loops vanish; other tuples keep repeated entries.
Structure contract_cover(const Structure& m, int u, int v);

// Induced substructure on universe minus v.
Structure delete_vertex(const Structure& m, int v);
Structure delete_tuple(const Structure& m, int sym, const Tuple& t);

// Survivors are (V and not D) or the root. Each element is represented by its
// deepest surviving ancestor-or-self. A tuple survives iff none of its entries is
// D-marked (the root excepted); it is rewritten through the representatives.
Structure shrink(const Structure& m, const std::set<int>& v_mark, const std::set<int>& d_mark);
// Reads marks `v_name`/`d_name` from m and drops them from the result.
Structure shrink(const Structure& m, const std::string& v_name = "V", const std::string& d_name = "D");

// Closures up to isomorphism; throw size_bound_exceeded above size_limit().
std::vector<Structure> enum_cont(const Structure& m);
std::vector<Structure> enum_minors(const Structure& m);
std::vector<Structure> mon(const Structure& m);

// Set versions: union of the per-member closures, deduplicated.
std::vector<Structure> cont_of(const std::vector<Structure>& set);
std::vector<Structure> mon_of(const std::vector<Structure>& set);

// Same multiset of isomorphism classes.
bool same_classes(const std::vector<Structure>& a, const std::vector<Structure>& b);

// Covers added to E, shrink, E-reduct.
Graph sp(const Structure& m, const std::set<int>& v_mark, const std::set<int>& d_mark);
// Every marking, up to graph isomorphism.
std::vector<Graph> sp_all(const Structure& m);

struct PosetReport {
    bool isomorphic = false;
    int minors = 0;           // labelled tree-ordered minors
    int induced = 0;          // vertex subsets of the fundamental graph
    std::string failure;      // first mismatch, empty on success
};

// Minors are labelled: every edge keeps its identity, contraction may turn it into
// a loop. Each minor maps to the vertex set of its fundamental graph inside the
// fundamental graph of M; the check confirms this map is a poset isomorphism onto
// the induced subgraphs of the fundamental graph ordered by inclusion.
PosetReport minor_poset_check(const Structure& m);

}  // namespace tows::minors
