#pragma once

#include <string>
#include <vector>

#include "tows/core.hpp"
#include "tows/graph.hpp"
#include "tows/io.hpp"

// Small builders shared by the unit suites. Everything is built by hand so the
// suites do not depend on the generators they test.
namespace testing_support {

using namespace tows;

inline Structure tows_text(const std::string& text) { return io::parse_tows(text); }

// Rooted TOWS graph from "child parent" pairs and E pairs; the root is named "r".
inline Structure tows_graph(const std::vector<std::string>& elements,
                            const std::vector<std::pair<std::string, std::string>>& parents,
                            const std::vector<std::pair<std::string, std::string>>& edges) {
    Structure m;
    m.set_signature(Signature::graph());
    m.root = m.add_element("r");
    for (const auto& e : elements) m.add_element(e);
    for (const auto& [c, p] : parents) m.parent[m.id(c)] = m.id(p);
    for (const auto& [u, v] : edges) m.add_tuple(0, {m.id(u), m.id(v)});
    return m;
}

inline Graph named_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("x" + std::to_string(i));
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

inline Graph complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return named_graph(n, e);
}

inline Graph cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
    return named_graph(n, e);
}

inline Graph path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
    return named_graph(n, e);
}

// K_{s,t} with the first s vertices on one side.
inline Graph biclique(int s, int t) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < s; ++u)
        for (int v = 0; v < t; ++v) e.emplace_back(u, s + v);
    return named_graph(s + t, e);
}

inline OrderedBipartite ordered_biclique(int s, int t) {
    OrderedBipartite g;
    for (int i = 1; i <= s; ++i) g.a.push_back("a" + std::to_string(i));
    for (int j = 1; j <= t; ++j) g.b.push_back("b" + std::to_string(j));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) g.add_edge(i, j);
    return g;
}

// Independent 1-subdivision: each edge uv gets a fresh midpoint vertex.
inline Graph subdivided_once(const Graph& g) {
    Graph out;
    for (const auto& n : g.names) out.add_vertex(n);
    for (auto [u, v] : g.edges()) {
        int mid = out.add_vertex("mid_" + g.names[u] + "_" + g.names[v]);
        out.add_edge(u, mid);
        out.add_edge(mid, v);
    }
    return out;
}

// Graph iso by brute force over permutations; only for tiny graphs.
bool brute_isomorphic(const Graph& g, const Graph& h);

// Largest t with K_{t,t} as a subgraph, by scanning pairs of disjoint subsets.
int brute_biclique(const Graph& g);

// Twin-width by exhaustive search over every contraction sequence.
int brute_twin_width(const Graph& g);

// Red degree maximum of a given sequence, computed from explicit vertex sets.
int brute_red_width(const Graph& g, const std::vector<std::pair<int, int>>& seq);

// Minor test by exhaustive contraction/deletion search; only for tiny graphs.
bool brute_minor(const Graph& h, const Graph& g);

std::string data_file(const std::string& name);

}  // namespace testing_support
