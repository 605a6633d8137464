#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tows/core.hpp"

namespace tows {

// Simple undirected graph with named vertices; vertex order is insertion order.
struct Graph {
    std::vector<std::string> names;
    std::vector<std::set<int>> adj;
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(names.size()); }
    int add_vertex(const std::string& name);
    int id(const std::string& name) const;  // throws element_not_found
    // Loops are ignored; parallel edges collapse.
    void add_edge(int u, int v);
    bool has_edge(int u, int v) const { return adj[u].count(v) > 0; }
    int edge_count() const;
    std::vector<std::pair<int, int>> edges() const;  // u < v, lexicographic
};

// Two parts with their linear orders (listed order) and edges from part A to part B.
struct OrderedBipartite {
    std::vector<std::string> a, b;
    std::vector<std::pair<int, int>> edges;  // (index in a, index in b), sorted, unique

    void add_edge(int i, int j);
    bool has_edge(int i, int j) const;
    Graph graph() const;  // vertices a then b
};

// Graph viewed as a structure: a fresh root with every vertex as a child, E symmetric.
Structure graph_to_structure(const Graph& g);
std::optional<std::vector<int>> graph_iso(const Graph& g, const Graph& h);
bool graph_isomorphic(const Graph& g, const Graph& h);

Graph graph_induced(const Graph& g, const std::vector<int>& keep);
Graph graph_reduct(const Structure& m, int sym = 0);  // E-reduct, tree-order dropped

// Each edge replaced by a path with `t` internal vertices named "u~v~k".
Graph subdivide(const Graph& g, int t);

// Bipartition by BFS 2-colouring; first vertex of each component goes to part A.
OrderedBipartite bipartition(const Graph& g);

class GraphClassSet {
public:
    std::pair<int, bool> insert(const Graph& g);
    std::optional<int> find(const Graph& g) const;
    const std::vector<Graph>& items() const { return graphs_; }
    int size() const { return static_cast<int>(graphs_.size()); }

private:
    IsoClassSet set_;
    std::vector<Graph> graphs_;
};

}  // namespace tows
