#include "tows/graph.hpp"

#include <algorithm>
#include <deque>

namespace tows {

int Graph::add_vertex(const std::string& name) {
    if (name.empty()) throw Error(ErrorKind::invalid_structure, "empty vertex name");
    if (index.count(name)) throw Error(ErrorKind::invalid_structure, "duplicate vertex " + name);
    int id = size();
    names.push_back(name);
    adj.emplace_back();
    index.emplace(name, id);
    return id;
}

int Graph::id(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw Error(ErrorKind::element_not_found, name);
    return it->second;
}

void Graph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= size() || v >= size())
        throw Error(ErrorKind::element_not_found, "edge endpoint out of range");
    if (u == v) return;
    adj[u].insert(v);
    adj[v].insert(u);
}

int Graph::edge_count() const {
    int c = 0;
    for (const auto& a : adj) c += static_cast<int>(a.size());
    return c / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < size(); ++u)
        for (int v : adj[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

void OrderedBipartite::add_edge(int i, int j) {
    if (i < 0 || j < 0 || i >= static_cast<int>(a.size()) || j >= static_cast<int>(b.size()))
        throw Error(ErrorKind::element_not_found, "bipartite edge out of range");
    auto e = std::make_pair(i, j);
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) edges.insert(it, e);
}

bool OrderedBipartite::has_edge(int i, int j) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

Graph OrderedBipartite::graph() const {
    Graph g;
    for (const auto& x : a) g.add_vertex(x);
    for (const auto& y : b) g.add_vertex(y);
    const int na = static_cast<int>(a.size());
    for (auto [i, j] : edges) g.add_edge(i, na + j);
    return g;
}

Structure graph_to_structure(const Graph& g) {
    Structure m;
    m.set_signature(Signature::graph());
    m.root = m.add_element("~root");
    for (const auto& n : g.names) m.parent[m.add_element(n)] = m.root;
    for (auto [u, v] : g.edges()) m.add_tuple(0, {u + 1, v + 1});
    return m;
}

std::optional<std::vector<int>> graph_iso(const Graph& g, const Graph& h) {
    if (g.size() != h.size() || g.edge_count() != h.edge_count()) return std::nullopt;
    auto f = iso(graph_to_structure(g), graph_to_structure(h));
    if (!f) return std::nullopt;
    std::vector<int> out(g.size());
    for (int v = 0; v < g.size(); ++v) out[v] = (*f)[v + 1] - 1;
    return out;
}

bool graph_isomorphic(const Graph& g, const Graph& h) { return graph_iso(g, h).has_value(); }

Graph graph_induced(const Graph& g, const std::vector<int>& keep) {
    Graph out;
    std::vector<int> remap(g.size(), -1);
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v : sorted) remap[v] = out.add_vertex(g.names[v]);
    for (int v : sorted)
        for (int w : g.adj[v])
            if (remap[w] >= 0) out.add_edge(remap[v], remap[w]);
    return out;
}

Graph graph_reduct(const Structure& m, int sym) {
    if (sym < 0 || sym >= static_cast<int>(m.sig.symbols.size()) || m.sig.symbols[sym].arity != 2)
        throw Error(ErrorKind::signature_mismatch, "reduct needs a binary symbol");
    Graph g;
    for (const auto& n : m.names) g.add_vertex(n);
    for (const Tuple& t : m.rels[sym]) g.add_edge(t[0], t[1]);
    return g;
}

Graph subdivide(const Graph& g, int t) {
    Graph out;
    for (const auto& n : g.names) out.add_vertex(n);
    for (auto [u, v] : g.edges()) {
        int prev = u;
        for (int k = 1; k <= t; ++k) {
            int w = out.add_vertex(g.names[u] + "~" + g.names[v] + "~" + std::to_string(k));
            out.add_edge(prev, w);
            prev = w;
        }
        out.add_edge(prev, v);
    }
    return out;
}

OrderedBipartite bipartition(const Graph& g) {
    std::vector<int> side(g.size(), -1);
    for (int s = 0; s < g.size(); ++s) {
        if (side[s] >= 0) continue;
        side[s] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : g.adj[v]) {
                if (side[w] < 0) {
                    side[w] = 1 - side[v];
                    q.push_back(w);
                } else if (side[w] == side[v]) {
                    throw Error(ErrorKind::invalid_structure, "graph is not bipartite");
                }
            }
        }
    }
    OrderedBipartite ob;
    std::vector<int> pos(g.size());
    for (int v = 0; v < g.size(); ++v) {
        auto& part = side[v] == 0 ? ob.a : ob.b;
        pos[v] = static_cast<int>(part.size());
        part.push_back(g.names[v]);
    }
    for (auto [u, v] : g.edges()) {
        if (side[u] == 0) ob.add_edge(pos[u], pos[v]);
        else ob.add_edge(pos[v], pos[u]);
    }
    return ob;
}

std::pair<int, bool> GraphClassSet::insert(const Graph& g) {
    auto r = set_.insert(graph_to_structure(g));
    if (r.second) graphs_.push_back(g);
    return r;
}

std::optional<int> GraphClassSet::find(const Graph& g) const { return set_.find(graph_to_structure(g)); }

}  // namespace tows
