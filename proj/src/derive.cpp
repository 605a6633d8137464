#include "tows/derive.hpp"

#include <algorithm>

namespace tows::derive {

namespace {

std::vector<int> distinct_entries(const Tuple& t) {
    std::vector<int> out;
    for (int e : t)
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    return out;
}

std::string tuple_vertex_name(const Structure& m, std::size_t sym, int i) {
    return m.sig.symbols[sym].name + ":" + std::to_string(i);
}

std::string symbol_spec(const Symbol& s) {
    return s.name + "/" + std::to_string(s.arity) + (s.symmetric ? "s" : "");
}

}  // namespace

Graph gaifman(const Structure& m) {
    Graph g;
    for (const auto& n : m.names) g.add_vertex(n);
    for (const auto& r : m.rels)
        for (const Tuple& t : r)
            for (int u : t)
                for (int v : t)
                    if (u != v) g.add_edge(u, v);
    return g;
}

Structure tgaif(const Structure& m) {
    Structure out;
    out.set_signature(Signature::graph());
    for (const auto& n : m.names) out.add_element(n);
    out.parent = m.parent;
    out.root = m.root;
    out.marks = m.marks;
    Graph g = gaifman(m);
    for (auto [u, v] : g.edges()) out.add_tuple(0, {u, v});
    return out;
}

Graph incidence(const Structure& m) {
    Graph g;
    for (const auto& n : m.names) g.add_vertex(n);
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        int i = 0;
        for (const Tuple& t : m.rels[s]) {
            int v = g.add_vertex(tuple_vertex_name(m, s, i++));
            for (int e : distinct_entries(t)) g.add_edge(e, v);
        }
    }
    return g;
}

Structure tinc(const Structure& m) {
    Structure out;
    out.set_signature(Signature::graph());
    for (const auto& n : m.names) out.add_element(n);
    out.parent = m.parent;
    out.root = m.root;
    out.marks = m.marks;
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        int i = 0;
        for (const Tuple& t : m.rels[s]) {
            // primes keep repeated applications free of name clashes
            std::string name = tuple_vertex_name(m, s, i++);
            while (out.find(name)) name += '\'';
            int v = out.add_element(name);
            out.parent[v] = out.root;
            for (int e : distinct_entries(t)) out.add_tuple(0, {e, v});
        }
    }
    return out;
}

Structure mark_tinc2(const Structure& m) {
    Structure base = m;
    base.marks.clear();
    Structure out = tinc(base);
    const int k = m.sig.max_arity();
    auto& vmark = out.marks["V"];
    for (int x = 0; x < m.size(); ++x) vmark.insert(x);
    out.marks["P"];
    for (int q = 1; q <= k; ++q) out.marks["M" + std::to_string(q)];
    for (std::size_t s = 0; s < m.sig.symbols.size(); ++s)
        out.marks["P:" + std::to_string(s) + ":" + symbol_spec(m.sig.symbols[s])];

    // First-level incidences are replaced by a subdivision vertex each.
    out.rels[0].clear();
    int tv = m.size();
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        auto& pmark = out.marks["P:" + std::to_string(s) + ":" + symbol_spec(m.sig.symbols[s])];
        int i = 0;
        for (const Tuple& t : m.rels[s]) {
            out.marks["P"].insert(tv);
            pmark.insert(tv);
            for (int e : distinct_entries(t)) {
                int first = static_cast<int>(std::find(t.begin(), t.end(), e) - t.begin()) + 1;
                int y = out.add_element(tuple_vertex_name(m, s, i) + "@" + std::to_string(first));
                out.parent[y] = out.root;
                for (std::size_t q = 0; q < t.size(); ++q)
                    if (t[q] == e) out.marks["M" + std::to_string(q + 1)].insert(y);
                out.add_tuple(0, {e, y});
                out.add_tuple(0, {y, tv});
            }
            ++i;
            ++tv;
        }
    }
    return out;
}

Structure tinc_decode(const Structure& n) {
    if (!n.is_graph()) throw Error(ErrorKind::decode_failure, "input is not a TOWS graph");
    const auto& vset = n.mark("V");
    if (!vset.count(n.root)) throw Error(ErrorKind::decode_failure, "root is not V-marked");
    std::vector<std::vector<int>> adj(n.size());
    for (const Tuple& t : n.rels[0]) {
        adj[t[0]].push_back(t[1]);
        adj[t[1]].push_back(t[0]);
    }

    struct Pending {
        int index;
        Symbol sym;
        const std::set<int>* tuples;
    };
    std::vector<Pending> pending;
    for (const auto& [name, set] : n.marks) {
        if (name.rfind("P:", 0) != 0) continue;
        auto colon = name.find(':', 2);
        auto slash = name.rfind('/');
        if (colon == std::string::npos || slash == std::string::npos || slash < colon)
            throw Error(ErrorKind::decode_failure, "bad symbol mark " + name);
        Pending p;
        p.index = std::stoi(name.substr(2, colon - 2));
        std::string spec = name.substr(colon + 1);
        auto sl = spec.rfind('/');
        p.sym.name = spec.substr(0, sl);
        std::string ar = spec.substr(sl + 1);
        p.sym.symmetric = !ar.empty() && ar.back() == 's';
        if (p.sym.symmetric) ar.pop_back();
        p.sym.arity = std::stoi(ar);
        p.tuples = &set;
        pending.push_back(p);
    }
    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.index < b.index; });

    std::vector<bool> keep(n.size(), false);
    for (int x : vset) keep[x] = true;
    Structure out = restrict_to(n, keep);
    out.marks.clear();
    Signature sig;
    for (const auto& p : pending) sig.add(p.sym.name, p.sym.arity, p.sym.symmetric);
    out.set_signature(sig);

    for (std::size_t s = 0; s < pending.size(); ++s) {
        const auto& p = pending[s];
        for (int t : *p.tuples) {
            Tuple tup;
            for (int q = 1; q <= p.sym.arity; ++q) {
                const auto& mq = n.mark("M" + std::to_string(q));
                int found_y = -1;
                for (int y : adj[t]) {
                    if (!mq.count(y)) continue;
                    if (found_y >= 0)
                        throw Error(ErrorKind::decode_failure, n.names[t] + ": two M" + std::to_string(q) + " neighbours");
                    found_y = y;
                }
                if (found_y < 0)
                    throw Error(ErrorKind::decode_failure, n.names[t] + ": no M" + std::to_string(q) + " neighbour");
                int found_x = -1;
                for (int x : adj[found_y]) {
                    if (!vset.count(x)) continue;
                    if (found_x >= 0) throw Error(ErrorKind::decode_failure, n.names[t] + ": ambiguous entry");
                    found_x = x;
                }
                if (found_x < 0) throw Error(ErrorKind::decode_failure, n.names[t] + ": dangling incidence");
                tup.push_back(out.id(n.names[found_x]));
            }
            if (p.sym.symmetric && tup[0] == tup[1])
                throw Error(ErrorKind::decode_failure, n.names[t] + ": loop on symmetric symbol");
            out.add_tuple(static_cast<int>(s), tup);
        }
    }
    return out;
}

Graph starify(const Structure& m, const std::set<int>& marked) {
    if (!marked.count(m.root)) throw Error(ErrorKind::invalid_marking, "root must be marked");
    Graph g = gaifman(m);
    for (int x = 0; x < m.size(); ++x) {
        if (marked.count(x)) continue;
        int c = m.parent[x];
        while (!marked.count(c)) c = m.parent[c];
        g.add_edge(c, x);
    }
    return g;
}

Graph starify(const Structure& m, const std::string& mark_name) { return starify(m, m.mark(mark_name)); }

}  // namespace tows::derive
