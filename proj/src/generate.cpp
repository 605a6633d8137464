#include "tows/generate.hpp"

#include <algorithm>
#include <functional>

namespace tows::generate {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Root "r" with elements v1..v{n-1}, parent index strictly smaller.
Structure random_tree(Rng& rng, int n, Signature sig) {
    Structure m;
    m.set_signature(std::move(sig));
    m.root = m.add_element("r");
    for (int i = 1; i < n; ++i) {
        int x = m.add_element("v" + std::to_string(i));
        m.parent[x] = uniform(rng, 0, i - 1);
    }
    return m;
}

}  // namespace

Graph random_graph(Rng& rng, int n, double p) {
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng, p)) g.add_edge(u, v);
    return g;
}

Structure random_tows_graph(Rng& rng, int n, int edges) {
    Structure m = random_tree(rng, std::max(n, 1), Signature::graph());
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < m.size(); ++u)
        for (int v = u + 1; v < m.size(); ++v) pairs.emplace_back(u, v);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (int k = 0; k < edges && k < static_cast<int>(pairs.size()); ++k)
        m.add_tuple(0, {pairs[k].first, pairs[k].second});
    return m;
}

Structure random_structure(Rng& rng, int n, int max_arity) {
    Signature sig;
    if (max_arity >= 3) sig.add("R", 3, false);
    if (max_arity >= 2) sig.add("S", 2, false);
    sig.add("T", 1, false);
    if (max_arity >= 2) sig.add("E", 2, true);
    Structure m = random_tree(rng, std::max(n, 1), sig);
    for (std::size_t s = 0; s < m.sig.symbols.size(); ++s) {
        const Symbol& sym = m.sig.symbols[s];
        int count = uniform(rng, 0, 3);
        for (int k = 0; k < count; ++k) {
            Tuple t(static_cast<std::size_t>(sym.arity));
            for (int& e : t) e = uniform(rng, 0, m.size() - 1);
            if (sym.symmetric && t[0] == t[1]) continue;
            m.add_tuple(static_cast<int>(s), t);
        }
    }
    return m;
}

Graph random_cograph(Rng& rng, int n) {
    int counter = 0;
    // Returns vertex sets of the built piece inside `g`.
    std::function<std::vector<int>(Graph&, int)> build = [&](Graph& g, int size) {
        if (size == 1) return std::vector<int>{g.add_vertex("v" + std::to_string(counter++))};
        int left = uniform(rng, 1, size - 1);
        auto a = build(g, left);
        auto b = build(g, size - left);
        if (coin(rng, 0.5))
            for (int u : a)
                for (int v : b) g.add_edge(u, v);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    Graph g;
    if (n > 0) build(g, n);
    return g;
}

OrderedBipartite random_ordered_bipartite(Rng& rng, int na, int nb, double p) {
    OrderedBipartite g;
    for (int i = 1; i <= na; ++i) g.a.push_back("a" + std::to_string(i));
    for (int j = 1; j <= nb; ++j) g.b.push_back("b" + std::to_string(j));
    std::shuffle(g.a.begin(), g.a.end(), rng);
    std::shuffle(g.b.begin(), g.b.end(), rng);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            if (coin(rng, p)) g.add_edge(i, j);
    return g;
}

std::vector<OrderedBipartite> all_bipartite(int na, int nb) {
    std::vector<OrderedBipartite> out;
    const int cells = na * nb;
    for (long mask = 0; mask < (1L << cells); ++mask) {
        OrderedBipartite g;
        for (int i = 1; i <= na; ++i) g.a.push_back("a" + std::to_string(i));
        for (int j = 1; j <= nb; ++j) g.b.push_back("b" + std::to_string(j));
        for (int c = 0; c < cells; ++c)
            if (mask >> c & 1) g.add_edge(c / nb, c % nb);
        out.push_back(std::move(g));
    }
    return out;
}

Structure spanning_tree_ordering(Rng& rng, const Graph& g) {
    Structure m;
    m.set_signature(Signature::graph());
    m.root = m.add_element("r");
    for (const auto& name : g.names) m.add_element(name);
    std::vector<int> order(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
    std::function<void(int)> dfs = [&](int v) {
        seen[v] = true;
        std::vector<int> next(g.adj[v].begin(), g.adj[v].end());
        std::shuffle(next.begin(), next.end(), rng);
        for (int w : next)
            if (!seen[w]) {
                m.parent[w + 1] = v + 1;
                dfs(w);
            }
    };
    for (int v : order)
        if (!seen[v]) {
            m.parent[v + 1] = m.root;
            dfs(v);
        }
    for (auto [u, v] : g.edges()) m.add_tuple(0, {u + 1, v + 1});
    return m;
}

std::vector<Structure> all_small_tows_graphs(int max_elements, int max_edges) {
    IsoClassSet set;
    for (int n = 1; n <= max_elements; ++n) {
        // Parent arrays with parent[i] < i reach every rooted tree shape.
        std::vector<int> parent(static_cast<std::size_t>(n), 0);
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
        const int np = static_cast<int>(pairs.size());
        while (true) {
            Structure base;
            base.set_signature(Signature::graph());
            base.root = base.add_element("r");
            for (int i = 1; i < n; ++i) base.parent[base.add_element("v" + std::to_string(i))] = parent[i];
            std::function<void(int, int, Structure&)> choose = [&](int from, int left, Structure& m) {
                set.insert(m);
                if (left == 0) return;
                for (int k = from; k < np; ++k) {
                    Structure next = m;
                    next.add_tuple(0, {pairs[k].first, pairs[k].second});
                    choose(k + 1, left - 1, next);
                }
            };
            choose(0, max_edges, base);
            int i = n - 1;
            while (i >= 1 && ++parent[i] == i) parent[i--] = 0;
            if (i < 1) break;
        }
    }
    return set.items();
}

}  // namespace tows::generate
