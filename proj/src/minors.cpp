#include "tows/minors.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "tows/matroid.hpp"

namespace tows::minors {

namespace {

// keep: survivors; rep[x]: image of x in tuples, -1 drops every tuple containing x.
Structure rewrite(const Structure& m, const std::vector<bool>& keep, const std::vector<int>& rep) {
    std::vector<int> remap(m.size(), -1);
    Structure out;
    out.set_signature(m.sig);
    for (int x = 0; x < m.size(); ++x)
        if (keep[x]) remap[x] = out.add_element(m.names[x]);
    out.root = remap[m.root];
    for (int x = 0; x < m.size(); ++x) {
        if (!keep[x] || x == m.root) continue;
        int p = m.parent[x];
        while (!keep[p]) p = m.parent[p];
        out.parent[remap[x]] = remap[p];
    }
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        const bool sym = m.sig.symbols[s].symmetric;
        for (const Tuple& t : m.rels[s]) {
            Tuple u;
            bool ok = true;
            for (int e : t) {
                if (rep[e] < 0) { ok = false; break; }
                u.push_back(remap[rep[e]]);
            }
            if (!ok || (sym && u[0] == u[1])) continue;
            out.add_tuple(static_cast<int>(s), u);
        }
    }
    for (const auto& [name, set] : m.marks) {
        auto& dst = out.marks[name];
        for (int e : set)
            if (keep[e]) dst.insert(remap[e]);
    }
    return out;
}

void check_bound(const Structure& m) {
    int bound = size_limit();
    if (m.size() > bound)
        throw Error(ErrorKind::size_bound_exceeded,
                    std::to_string(m.size()) + " elements exceed the bound " + std::to_string(bound));
}

enum Ops : unsigned { op_delete = 1, op_contract = 2, op_tuple = 4 };

std::vector<Structure> successors(const Structure& m, unsigned ops) {
    std::vector<Structure> out;
    for (int v = 0; v < m.size(); ++v) {
        if (v == m.root) continue;
        if (ops & op_delete) out.push_back(delete_vertex(m, v));
        if (ops & op_contract) out.push_back(contract_cover(m, m.parent[v], v));
    }
    if (ops & op_tuple)
        for (std::size_t s = 0; s < m.rels.size(); ++s)
            for (const Tuple& t : m.rels[s]) out.push_back(delete_tuple(m, static_cast<int>(s), t));
    return out;
}

std::vector<Structure> closure(const std::vector<Structure>& start, unsigned ops) {
    IsoClassSet set;
    std::deque<int> queue;
    for (const auto& s : start) {
        check_bound(s);
        auto [idx, fresh] = set.insert(s);
        if (fresh) queue.push_back(idx);
    }
    while (!queue.empty()) {
        int idx = queue.front();
        queue.pop_front();
        Structure cur = set.items()[idx];
        for (auto& next : successors(cur, ops)) {
            auto [j, fresh] = set.insert(next);
            if (fresh) queue.push_back(j);
        }
    }
    return set.items();
}

}  // namespace

Structure contract_cover(const Structure& m, int u, int v) {
    if (u < 0 || v < 0 || u >= m.size() || v >= m.size())
        throw Error(ErrorKind::element_not_found, "contract_cover endpoint");
    if (m.parent[v] != u) throw Error(ErrorKind::not_a_cover, m.names[u] + " " + m.names[v]);
    std::vector<bool> keep(m.size(), true);
    keep[v] = false;
    std::vector<int> rep(m.size());
    for (int x = 0; x < m.size(); ++x) rep[x] = x;
    rep[v] = u;
    return rewrite(m, keep, rep);
}

Structure delete_vertex(const Structure& m, int v) {
    if (v < 0 || v >= m.size()) throw Error(ErrorKind::element_not_found, "delete_vertex");
    if (v == m.root) throw Error(ErrorKind::forbidden, "the root cannot be deleted");
    std::vector<bool> keep(m.size(), true);
    keep[v] = false;
    return restrict_to(m, keep);
}

Structure delete_tuple(const Structure& m, int sym, const Tuple& t) {
    if (sym < 0 || sym >= static_cast<int>(m.rels.size())) throw Error(ErrorKind::not_found, "unknown symbol");
    Tuple key = t;
    if (m.sig.symbols[sym].symmetric && key.size() == 2 && key[0] > key[1]) std::swap(key[0], key[1]);
    if (!m.rels[sym].count(key)) throw Error(ErrorKind::not_found, "tuple not in " + m.sig.symbols[sym].name);
    Structure out = m;
    out.rels[sym].erase(key);
    return out;
}

Structure shrink(const Structure& m, const std::set<int>& v_mark, const std::set<int>& d_mark) {
    std::vector<bool> keep(m.size(), false);
    for (int x = 0; x < m.size(); ++x) keep[x] = x == m.root || (v_mark.count(x) && !d_mark.count(x));
    std::vector<int> rep(m.size(), -1);
    for (int y = 0; y < m.size(); ++y) {
        if (d_mark.count(y) && y != m.root) continue;
        int x = y;
        while (!keep[x]) x = m.parent[x];
        rep[y] = x;
    }
    return rewrite(m, keep, rep);
}

Structure shrink(const Structure& m, const std::string& v_name, const std::string& d_name) {
    Structure out = shrink(m, m.mark(v_name), m.mark(d_name));
    out.marks.erase(v_name);
    out.marks.erase(d_name);
    return out;
}

std::vector<Structure> enum_cont(const Structure& m) { return closure({m}, op_delete | op_contract); }
std::vector<Structure> enum_minors(const Structure& m) { return closure({m}, op_delete | op_contract | op_tuple); }
std::vector<Structure> mon(const Structure& m) { return closure({m}, op_tuple); }
std::vector<Structure> cont_of(const std::vector<Structure>& set) { return closure(set, op_delete | op_contract); }
std::vector<Structure> mon_of(const std::vector<Structure>& set) { return closure(set, op_tuple); }

bool same_classes(const std::vector<Structure>& a, const std::vector<Structure>& b) {
    IsoClassSet sa, sb;
    for (const auto& s : a) sa.insert(s);
    for (const auto& s : b) sb.insert(s);
    if (sa.size() != sb.size()) return false;
    for (const auto& s : sa.items())
        if (!sb.find(s)) return false;
    return true;
}

Graph sp(const Structure& m, const std::set<int>& v_mark, const std::set<int>& d_mark) {
    if (!m.is_graph()) throw Error(ErrorKind::signature_mismatch, "sp needs a TOWS graph");
    Structure with_covers = m;
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) with_covers.add_tuple(0, {x, m.parent[x]});
    return graph_reduct(shrink(with_covers, v_mark, d_mark));
}

std::vector<Graph> sp_all(const Structure& m) {
    check_bound(m);
    std::vector<int> others;
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) others.push_back(x);
    // Each non-root element: 0 survives, 1 merges upward, 2 is deleted.
    std::vector<int> state(others.size(), 0);
    GraphClassSet set;
    while (true) {
        std::set<int> v, d;
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (state[i] == 0) v.insert(others[i]);
            if (state[i] == 2) d.insert(others[i]);
        }
        set.insert(sp(m, v, d));
        std::size_t i = 0;
        while (i < state.size() && ++state[i] == 3) state[i++] = 0;
        if (i == state.size()) break;
    }
    return set.items();
}

// ---------------------------------------------------------------- poset bridge

namespace {

struct LabelledMinor {
    std::vector<bool> alive;                  // original element ids
    std::vector<int> parent;                  // original ids, valid for alive elements
    std::map<int, std::pair<int, int>> edges; // label -> endpoints, loops allowed

    std::pair<std::vector<bool>, std::vector<int>> key() const {
        std::vector<int> labels;
        for (const auto& [l, e] : edges) labels.push_back(l);
        return {alive, labels};
    }
};

}  // namespace

PosetReport minor_poset_check(const Structure& m) {
    if (!m.is_graph()) throw Error(ErrorKind::signature_mismatch, "poset check needs a TOWS graph");
    const int covers = m.size() - 1;
    const int edge_count = static_cast<int>(m.rels[0].size());
    if (covers + edge_count > 9)
        throw Error(ErrorKind::size_bound_exceeded, "more than 9 covers and edges");

    const auto lam = matroid::lambda_graph(m);
    const int ny = static_cast<int>(lam.part_y.size());
    const int total = ny + edge_count;
    std::vector<int> cover_bit(m.size(), -1);
    for (int x = 0, k = 0; x < m.size(); ++x)
        if (x != m.root) cover_bit[x] = k++;

    LabelledMinor start;
    start.alive.assign(m.size(), true);
    start.parent = m.parent;
    {
        int label = 0;
        for (const Tuple& t : m.rels[0]) start.edges[label++] = {t[0], t[1]};
    }

    auto vertex_set = [&](const LabelledMinor& n) {
        unsigned mask = 0;
        for (int x = 0; x < m.size(); ++x)
            if (x != m.root && n.alive[x]) mask |= 1u << cover_bit[x];
        for (const auto& [l, e] : n.edges) mask |= 1u << (ny + l);
        return mask;
    };

    // Enumerate labelled minors.
    std::map<std::pair<std::vector<bool>, std::vector<int>>, int> seen;
    std::vector<LabelledMinor> items;
    std::vector<std::vector<int>> succ;
    std::deque<int> queue;
    auto intern = [&](const LabelledMinor& n) {
        auto k = n.key();
        auto it = seen.find(k);
        if (it != seen.end()) return it->second;
        int idx = static_cast<int>(items.size());
        seen.emplace(k, idx);
        items.push_back(n);
        succ.emplace_back();
        queue.push_back(idx);
        return idx;
    };
    intern(start);
    while (!queue.empty()) {
        int idx = queue.front();
        queue.pop_front();
        const LabelledMinor cur = items[idx];
        std::vector<int> next;
        for (int v = 0; v < m.size(); ++v) {
            if (v == m.root || !cur.alive[v]) continue;
            const int u = cur.parent[v];
            LabelledMinor c = cur;  // contraction of the cover (u, v)
            c.alive[v] = false;
            for (int x = 0; x < m.size(); ++x)
                if (c.alive[x] && x != m.root && c.parent[x] == v) c.parent[x] = u;
            for (auto& [l, e] : c.edges) {
                if (e.first == v) e.first = u;
                if (e.second == v) e.second = u;
            }
            next.push_back(intern(c));
            LabelledMinor d = cur;  // deletion of v
            d.alive[v] = false;
            for (int x = 0; x < m.size(); ++x)
                if (d.alive[x] && x != m.root && d.parent[x] == v) d.parent[x] = u;
            for (auto it = d.edges.begin(); it != d.edges.end();)
                it = (it->second.first == v || it->second.second == v) ? d.edges.erase(it) : std::next(it);
            next.push_back(intern(d));
        }
        for (const auto& [l, e] : cur.edges) {
            LabelledMinor d = cur;
            d.edges.erase(l);
            next.push_back(intern(d));
        }
        succ[idx] = next;
    }

    PosetReport rep;
    rep.minors = static_cast<int>(items.size());
    rep.induced = 1 << total;

    // Fundamental graph of each minor must be the induced subgraph on its image.
    std::vector<unsigned> image(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& n = items[i];
        image[i] = vertex_set(n);
        for (const auto& [l, e] : n.edges) {
            std::vector<bool> on_path(m.size(), false);
            for (int x = e.first; x != m.root; x = n.parent[x]) on_path[x] = !on_path[x];
            for (int x = e.second; x != m.root; x = n.parent[x]) on_path[x] = !on_path[x];
            for (int x = 0; x < m.size(); ++x) {
                if (x == m.root || !n.alive[x]) continue;
                bool expected = lam.nbhd[l][0].test(cover_bit[x]);
                if (on_path[x] != expected) {
                    rep.failure = "fundamental graph of a minor differs at " + lam.part_y[cover_bit[x]] + "/" +
                                  lam.part_z[l];
                    return rep;
                }
            }
        }
    }

    // Bijectivity onto all vertex subsets.
    std::vector<int> preimage(rep.induced, -1);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (preimage[image[i]] >= 0) {
            rep.failure = "two minors share an induced subgraph";
            return rep;
        }
        preimage[image[i]] = static_cast<int>(i);
    }
    if (rep.minors != rep.induced) {
        rep.failure = "minor count differs from induced subgraph count";
        return rep;
    }

    // Minor order (reachability) against inclusion.
    const std::size_t n = items.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    std::vector<int> by_size(n);
    for (std::size_t i = 0; i < n; ++i) by_size[i] = static_cast<int>(i);
    std::sort(by_size.begin(), by_size.end(), [&](int a, int b) {
        return __builtin_popcount(image[a]) < __builtin_popcount(image[b]);
    });
    for (int i : by_size) {
        reach[i][i] = true;
        for (int j : succ[i])
            for (std::size_t k = 0; k < n; ++k)
                if (reach[j][k]) reach[i][k] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool incl = (image[j] & ~image[i]) == 0;
            if (reach[i][j] != incl) {
                rep.failure = "minor order and inclusion disagree";
                return rep;
            }
        }
    rep.isomorphic = true;
    return rep;
}

}  // namespace tows::minors
