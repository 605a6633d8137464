#pragma once

#include <string>

#include "tows/core.hpp"
#include "tows/graph.hpp"

namespace tows::derive {

// u ~ v iff u != v occur together in some tuple; tree-order ignored.
Graph gaifman(const Structure& m);

// Same tree-order; E is the Gaifman graph of the relational part.
Structure tgaif(const Structure& m);

// Elements first, then one vertex "SYM:i" per tuple (i = position in enumeration order).
Graph incidence(const Structure& m);

// Incidence graph as a TOWS graph; tuple vertices become children of the root.
Structure tinc(const Structure& m);

// tinc applied twice, with marks:
//   V        original domain
//   P        first-level tuple vertices, P:SYM/ARITY[s] per symbol
//   M<p>     second-level vertex between a tuple vertex and its p-th entry (1-based)
// Second-level vertices are renamed "SYM:i@p" (p = first position of that entry).
Structure mark_tinc2(const Structure& m);

// Inverse of mark_tinc2 up to isomorphism.
Structure tinc_decode(const Structure& n);

// E(M) plus an edge from each unmarked element to its nearest marked ancestor.
Graph starify(const Structure& m, const std::set<int>& marked);
Graph starify(const Structure& m, const std::string& mark_name);

}  // namespace tows::derive
