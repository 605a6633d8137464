#include <algorithm>
#include <functional>
#include <numeric>

#include "helpers.hpp"

#ifndef TOWS_DATA_DIR
#define TOWS_DATA_DIR "data"
#endif

namespace testing_support {

bool brute_isomorphic(const Graph& g, const Graph& h) {
    if (g.size() != h.size() || g.edge_count() != h.edge_count()) return false;
    std::vector<int> perm(static_cast<std::size_t>(g.size()));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (auto [u, v] : g.edges())
            if (!h.has_edge(perm[u], perm[v])) {
                ok = false;
                break;
            }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

int brute_biclique(const Graph& g) {
    const int n = g.size();
    int best = 0;
    for (long mask = 1; mask < (1L << n); ++mask) {
        int side = __builtin_popcountl(static_cast<unsigned long>(mask));
        int common = 0;
        for (int w = 0; w < n; ++w) {
            bool all = true;
            for (int u = 0; u < n && all; ++u)
                if (mask >> u & 1) all = g.has_edge(u, w);
            common += all;
        }
        best = std::max(best, std::min(side, common));
    }
    return best;
}

namespace {

using Parts = std::vector<unsigned>;  // vertex bitmasks

bool joined(const Graph& g, unsigned x, unsigned y, bool want_all) {
    bool any = false, all = true;
    for (int u = 0; u < g.size(); ++u)
        if (x >> u & 1)
            for (int v = 0; v < g.size(); ++v)
                if (y >> v & 1) {
                    bool e = g.has_edge(u, v);
                    any = any || e;
                    all = all && e;
                }
    return want_all ? all : any;
}

int max_red_degree(const Graph& g, const Parts& parts) {
    int best = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        int deg = 0;
        for (std::size_t j = 0; j < parts.size(); ++j)
            if (i != j && joined(g, parts[i], parts[j], false) && !joined(g, parts[i], parts[j], true)) ++deg;
        best = std::max(best, deg);
    }
    return best;
}

}  // namespace

int brute_twin_width(const Graph& g) {
    std::function<int(const Parts&)> solve = [&](const Parts& parts) {
        if (parts.size() <= 1) return 0;
        int best = g.size();
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i + 1; j < parts.size(); ++j) {
                Parts next;
                for (std::size_t k = 0; k < parts.size(); ++k)
                    if (k != i && k != j) next.push_back(parts[k]);
                next.push_back(parts[i] | parts[j]);
                int here = max_red_degree(g, next);
                if (here >= best) continue;
                best = std::min(best, std::max(here, solve(next)));
            }
        return best;
    };
    Parts start;
    for (int v = 0; v < g.size(); ++v) start.push_back(1u << v);
    return solve(start);
}

int brute_red_width(const Graph& g, const std::vector<std::pair<int, int>>& seq) {
    std::vector<unsigned> part_of(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) part_of[v] = 1u << v;
    std::vector<bool> alive(static_cast<std::size_t>(g.size()), true);
    int best = 0;
    for (auto [keep, gone] : seq) {
        part_of[keep] |= part_of[gone];
        alive[gone] = false;
        Parts parts;
        for (int v = 0; v < g.size(); ++v)
            if (alive[v]) parts.push_back(part_of[v]);
        best = std::max(best, max_red_degree(g, parts));
    }
    return best;
}

bool brute_minor(const Graph& h, const Graph& g) {
    const int hn = h.size(), gn = g.size();
    if (hn == 0) return true;
    std::vector<int> branch(static_cast<std::size_t>(gn), -1);
    auto connected = [&](int b) {
        std::vector<int> members;
        for (int v = 0; v < gn; ++v)
            if (branch[v] == b) members.push_back(v);
        if (members.empty()) return false;
        std::vector<bool> seen(static_cast<std::size_t>(gn), false);
        std::vector<int> stack{members[0]};
        seen[members[0]] = true;
        int count = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++count;
            for (int w : g.adj[v])
                if (branch[w] == b && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return count == static_cast<int>(members.size());
    };
    std::function<bool(int)> assign = [&](int v) {
        if (v == gn) {
            for (int b = 0; b < hn; ++b)
                if (!connected(b)) return false;
            for (auto [x, y] : h.edges()) {
                bool found = false;
                for (int u = 0; u < gn && !found; ++u)
                    if (branch[u] == x)
                        for (int w : g.adj[u])
                            if (branch[w] == y) found = true;
                if (!found) return false;
            }
            return true;
        }
        for (int b = -1; b < hn; ++b) {
            branch[v] = b;
            if (assign(v + 1)) return true;
        }
        branch[v] = -1;
        return false;
    };
    return assign(0);
}

std::string data_file(const std::string& name) { return std::string(TOWS_DATA_DIR) + "/" + name; }

}  // namespace testing_support
