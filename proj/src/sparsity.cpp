#include "tows/sparsity.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace tows::sparsity {

namespace {

void check_size(const Graph& g, int fallback, const char* what) {
    int bound = size_limit(fallback);
    if (g.size() > bound)
        throw Error(ErrorKind::size_bound_exceeded,
                    std::string(what) + ": " + std::to_string(g.size()) + " vertices exceed " + std::to_string(bound));
}

// Injective map h -> g with every h-edge sent to a g-edge; `induced` also forbids extra edges.
bool embeds(const Graph& h, const Graph& g, bool induced) {
    const int nh = h.size(), ng = g.size();
    if (nh > ng) return false;
    if (nh == 0) return true;
    // Connectivity-first order over h.
    std::vector<int> order;
    std::vector<bool> placed(nh, false);
    while (static_cast<int>(order.size()) < nh) {
        int best = -1, best_links = -1;
        for (int v = 0; v < nh; ++v) {
            if (placed[v]) continue;
            int links = 0;
            for (int w : h.adj[v]) links += placed[w];
            if (links > best_links || (links == best_links && h.adj[v].size() > h.adj[best].size())) {
                best = v;
                best_links = links;
            }
        }
        placed[best] = true;
        order.push_back(best);
    }
    std::vector<int> f(nh, -1);
    std::vector<bool> used(ng, false);
    std::function<bool(int)> go = [&](int depth) {
        if (depth == nh) return true;
        int v = order[depth];
        for (int w = 0; w < ng; ++w) {
            if (used[w] || g.adj[w].size() < h.adj[v].size()) continue;
            bool ok = true;
            for (int i = 0; i < depth && ok; ++i) {
                int u = order[i];
                bool eh = h.has_edge(v, u);
                bool eg = g.has_edge(w, f[u]);
                if (eh && !eg) ok = false;
                if (induced && !eh && eg) ok = false;
            }
            if (!ok) continue;
            f[v] = w;
            used[w] = true;
            if (go(depth + 1)) return true;
            used[w] = false;
            f[v] = -1;
        }
        return false;
    };
    return go(0);
}

Graph complete(int n) {
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("k" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Graph remove_vertex(const Graph& g, int v) {
    std::vector<int> keep;
    for (int u = 0; u < g.size(); ++u)
        if (u != v) keep.push_back(u);
    return graph_induced(g, keep);
}

Graph remove_edge(const Graph& g, int u, int v) {
    Graph out = g;
    out.adj[u].erase(v);
    out.adj[v].erase(u);
    return out;
}

Graph contract_edge(const Graph& g, int u, int v) {
    Graph out = remove_vertex(g, v);
    int nu = u < v ? u : u - 1;
    for (int w : g.adj[v]) {
        if (w == u) continue;
        out.add_edge(nu, w < v ? w : w - 1);
    }
    return out;
}

// part[v] = representative of v's part.
int max_red_degree(const Graph& g, const std::vector<int>& part) {
    std::vector<int> reps;
    for (int v = 0; v < g.size(); ++v)
        if (part[v] == v) reps.push_back(v);
    int best = 0;
    for (int p : reps) {
        int red = 0;
        for (int q : reps) {
            if (p == q) continue;
            bool some = false, all = true;
            for (int a = 0; a < g.size(); ++a) {
                if (part[a] != p) continue;
                for (int b = 0; b < g.size(); ++b) {
                    if (part[b] != q) continue;
                    if (g.has_edge(a, b)) some = true;
                    else all = false;
                }
            }
            if (some && !all) ++red;
        }
        best = std::max(best, red);
    }
    return best;
}

std::vector<int> merged(const std::vector<int>& part, int a, int b) {
    int keep = std::min(a, b), gone = std::max(a, b);
    std::vector<int> out = part;
    for (int& p : out)
        if (p == gone) p = keep;
    return out;
}

}  // namespace

int biclique_number(const Graph& g) {
    check_size(g, 20, "biclique_number");
    const int n = g.size();
    std::vector<std::uint32_t> adj(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : g.adj[v]) adj[v] |= 1u << w;
    int best = 0;
    const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    for (std::uint32_t side = 1; side <= full && side != 0; ++side) {
        int size = __builtin_popcount(side);
        if (size <= best) continue;
        std::uint32_t common = full;
        for (int v = 0; v < n; ++v)
            if (side >> v & 1) common &= adj[v];
        best = std::max(best, std::min(size, __builtin_popcount(common)));
    }
    return best;
}

bool induced_clique_subdivision(const Graph& g, int t, int n) {
    check_size(g, 40, "induced_clique_subdivision");
    if (t < 0 || n < 0) throw Error(ErrorKind::invalid_spec, "negative subdivision parameters");
    if (n == 0) return true;
    return embeds(subdivide(complete(n), t), g, true);
}

std::vector<Graph> depth1_minors(const Graph& g) {
    check_size(g, 10, "depth1_minors");
    const int n = g.size();
    GraphClassSet out;
    std::vector<int> centre(n, -1);
    // centre[v] == v: v is a star centre; otherwise an adjacent centre absorbs v.
    std::function<void(int)> assign = [&](int v) {
        if (v == n) {
            for (int u = 0; u < n; ++u)
                if (centre[centre[u]] != centre[u]) return;
            std::vector<int> idx(n, -1);
            Graph q;
            for (int u = 0; u < n; ++u)
                if (centre[u] == u) idx[u] = q.add_vertex(g.names[u]);
            for (auto [a, b] : g.edges())
                if (centre[a] != centre[b]) q.add_edge(idx[centre[a]], idx[centre[b]]);
            out.insert(q);
            return;
        }
        centre[v] = v;
        assign(v + 1);
        for (int w : g.adj[v]) {
            centre[v] = w;
            assign(v + 1);
        }
        centre[v] = -1;
    };
    assign(0);
    // Close under vertex and edge deletions.
    for (int i = 0; i < out.size(); ++i) {
        Graph cur = out.items()[i];
        if (cur.size() > 1)
            for (int v = 0; v < cur.size(); ++v) out.insert(remove_vertex(cur, v));
        for (auto [a, b] : cur.edges()) out.insert(remove_edge(cur, a, b));
    }
    return out.items();
}

bool is_minor(const Graph& h, const Graph& g) {
    check_size(g, 10, "is_minor");
    const int nh = h.size(), eh = h.edge_count();
    GraphClassSet visited;
    std::function<bool(const Graph&)> rec = [&](const Graph& cur) {
        if (cur.size() < nh || cur.edge_count() < eh) return false;
        if (!visited.insert(cur).second) return false;
        if (cur.size() == nh) return embeds(h, cur, false);
        for (int v = 0; v < cur.size(); ++v)
            if (rec(remove_vertex(cur, v))) return true;
        for (auto [a, b] : cur.edges())
            if (rec(contract_edge(cur, a, b))) return true;
        return false;
    };
    return rec(g);
}

int red_width(const Graph& g, const ContractionSequence& seq) {
    const int n = g.size();
    if (n > 0 && static_cast<int>(seq.size()) != n - 1)
        throw Error(ErrorKind::invalid_sequence, "a contraction sequence has n-1 merges");
    std::vector<int> part(n);
    for (int v = 0; v < n; ++v) part[v] = v;
    int width = 0;
    for (auto [keep, gone] : seq) {
        if (keep < 0 || gone < 0 || keep >= n || gone >= n || keep == gone || part[keep] != keep ||
            part[gone] != gone)
            throw Error(ErrorKind::invalid_sequence, "merge between non-current vertices");
        for (int& p : part)
            if (p == gone) p = keep;
        width = std::max(width, max_red_degree(g, part));
    }
    return width;
}

TwinWidth tww_exact(const Graph& g) {
    check_size(g, 8, "tww_exact");
    const int n = g.size();
    std::map<std::vector<int>, std::pair<int, std::pair<int, int>>> memo;
    std::function<int(const std::vector<int>&)> best = [&](const std::vector<int>& part) {
        std::vector<int> reps;
        for (int v = 0; v < n; ++v)
            if (part[v] == v) reps.push_back(v);
        if (reps.size() <= 1) return 0;
        auto it = memo.find(part);
        if (it != memo.end()) return it->second.first;
        int value = n;
        std::pair<int, int> arg{-1, -1};
        for (std::size_t i = 0; i < reps.size(); ++i)
            for (std::size_t j = i + 1; j < reps.size(); ++j) {
                auto next = merged(part, reps[i], reps[j]);
                int here = max_red_degree(g, next);
                if (here >= value) continue;
                int w = std::max(here, best(next));
                if (w < value) {
                    value = w;
                    arg = {reps[i], reps[j]};
                }
            }
        memo[part] = {value, arg};
        return value;
    };
    std::vector<int> part(n);
    for (int v = 0; v < n; ++v) part[v] = v;
    TwinWidth out;
    out.width = best(part);
    while (true) {
        auto it = memo.find(part);
        if (it == memo.end()) break;
        auto [a, b] = it->second.second;
        out.sequence.emplace_back(a, b);
        part = merged(part, a, b);
    }
    return out;
}

}  // namespace tows::sparsity
