#include "tows/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace tows {

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::element_not_found: return "element-not-found";
        case ErrorKind::signature_mismatch: return "signature-mismatch";
        case ErrorKind::invalid_structure: return "invalid-structure";
        case ErrorKind::parse: return "parse-error";
        case ErrorKind::not_a_cover: return "not-a-cover";
        case ErrorKind::forbidden: return "forbidden";
        case ErrorKind::not_found: return "not-found";
        case ErrorKind::invalid_marking: return "invalid-marking";
        case ErrorKind::decode_failure: return "decode-failure";
        case ErrorKind::size_bound_exceeded: return "size-bound-exceeded";
        case ErrorKind::invalid_basis_change: return "invalid-basis-change";
        case ErrorKind::part_mismatch: return "part-mismatch";
        case ErrorKind::invalid_core: return "invalid-core";
        case ErrorKind::index_mismatch: return "index-mismatch";
        case ErrorKind::pattern_not_matched: return "pattern-not-matched";
        case ErrorKind::invalid_spec: return "invalid-spec";
        case ErrorKind::invalid_sequence: return "invalid-sequence";
        case ErrorKind::not_a_twister: return "not-a-twister";
        case ErrorKind::unlabeled_input: return "unlabeled-input";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

int size_limit(int fallback) {
    if (const char* env = std::getenv("TOWS_SIZE_LIMIT")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    return fallback;
}

// ---------------------------------------------------------------- signature

int Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i].name == name) return static_cast<int>(i);
    return -1;
}

int Signature::add(const std::string& name, int arity, bool symmetric) {
    if (arity < 1) throw Error(ErrorKind::signature_mismatch, "arity of " + name + " must be positive");
    if (symmetric && arity != 2)
        throw Error(ErrorKind::signature_mismatch, "symmetric flag needs arity 2: " + name);
    if (find(name) >= 0) throw Error(ErrorKind::signature_mismatch, "duplicate symbol " + name);
    symbols.push_back({name, arity, symmetric});
    return static_cast<int>(symbols.size()) - 1;
}

int Signature::max_arity() const {
    int k = 0;
    for (const auto& s : symbols) k = std::max(k, s.arity);
    return k;
}

Signature Signature::graph() {
    Signature s;
    s.add("E", 2, true);
    return s;
}

// ---------------------------------------------------------------- structure

int Structure::add_element(const std::string& name) {
    if (name.empty()) throw Error(ErrorKind::invalid_structure, "empty element name");
    if (index.count(name)) throw Error(ErrorKind::invalid_structure, "duplicate element " + name);
    int id = size();
    names.push_back(name);
    parent.push_back(-1);
    index.emplace(name, id);
    return id;
}

std::optional<int> Structure::find(std::string_view name) const {
    auto it = index.find(std::string(name));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

int Structure::id(std::string_view name) const {
    auto f = find(name);
    if (!f) throw Error(ErrorKind::element_not_found, std::string(name));
    return *f;
}

void Structure::set_signature(Signature s) {
    sig = std::move(s);
    rels.assign(sig.symbols.size(), {});
}

void Structure::add_tuple(int sym, Tuple t) {
    if (sym < 0 || sym >= static_cast<int>(sig.symbols.size()))
        throw Error(ErrorKind::signature_mismatch, "unknown symbol index");
    const Symbol& s = sig.symbols[sym];
    if (static_cast<int>(t.size()) != s.arity)
        throw Error(ErrorKind::signature_mismatch, "wrong arity for " + s.name);
    for (int e : t)
        if (e < 0 || e >= size()) throw Error(ErrorKind::element_not_found, "tuple entry out of range");
    if (s.symmetric) {
        if (t[0] == t[1]) throw Error(ErrorKind::invalid_structure, "loop on symmetric " + s.name);
        if (t[0] > t[1]) std::swap(t[0], t[1]);
    }
    rels[sym].insert(std::move(t));
}

bool Structure::has_tuple(int sym, const Tuple& t) const {
    const Symbol& s = sig.symbols[sym];
    if (s.symmetric) {
        if (t[0] == t[1]) return false;
        Tuple u = t;
        if (u[0] > u[1]) std::swap(u[0], u[1]);
        return rels[sym].count(u) > 0;
    }
    return rels[sym].count(t) > 0;
}

int Structure::symbol(std::string_view name) const {
    int s = sig.find(name);
    if (s < 0) throw Error(ErrorKind::signature_mismatch, "unknown symbol " + std::string(name));
    return s;
}

void Structure::validate() const {
    int n = size();
    if (n == 0) throw Error(ErrorKind::invalid_structure, "empty universe");
    if (root < 0 || root >= n) throw Error(ErrorKind::invalid_structure, "missing root");
    if (static_cast<int>(parent.size()) != n) throw Error(ErrorKind::invalid_structure, "parent map size");
    if (rels.size() != sig.symbols.size()) throw Error(ErrorKind::invalid_structure, "relation table size");
    for (int x = 0; x < n; ++x) {
        if (x == root) {
            if (parent[x] != -1) throw Error(ErrorKind::invalid_structure, "root has a parent");
            continue;
        }
        if (parent[x] < 0 || parent[x] >= n)
            throw Error(ErrorKind::invalid_structure, "element without parent: " + names[x]);
    }
    // every chain reaches the root within n steps
    std::vector<int> state(n, 0);  // 0 unknown, 1 on stack, 2 reaches root
    state[root] = 2;
    for (int x = 0; x < n; ++x) {
        std::vector<int> path;
        int y = x;
        while (state[y] == 0) {
            state[y] = 1;
            path.push_back(y);
            y = parent[y];
        }
        if (state[y] == 1) throw Error(ErrorKind::invalid_structure, "parent cycle through " + names[y]);
        for (int z : path) state[z] = 2;
    }
    for (const auto& [name, set] : marks)
        for (int e : set)
            if (e < 0 || e >= n) throw Error(ErrorKind::invalid_structure, "mark " + name + " out of range");
}

void Structure::rebuild_index() {
    index.clear();
    for (int i = 0; i < size(); ++i) index.emplace(names[i], i);
}

bool Structure::strictly_below(int x, int y) const {
    for (int z = parent[y]; z >= 0; z = parent[z])
        if (z == x) return true;
    return false;
}

int Structure::depth(int x) const {
    int d = 0;
    for (int z = parent[x]; z >= 0; z = parent[z]) ++d;
    return d;
}

std::vector<std::vector<int>> Structure::children() const {
    std::vector<std::vector<int>> ch(size());
    for (int x = 0; x < size(); ++x)
        if (parent[x] >= 0) ch[parent[x]].push_back(x);
    return ch;
}

std::vector<int> Structure::ancestors(int x) const {
    std::vector<int> out;
    for (int z = x; z >= 0; z = parent[z]) out.push_back(z);
    return out;
}

const std::set<int>& Structure::mark(const std::string& name) const {
    static const std::set<int> empty;
    auto it = marks.find(name);
    return it == marks.end() ? empty : it->second;
}

bool Structure::is_graph() const {
    return sig.symbols.size() == 1 && sig.symbols[0].arity == 2 && sig.symbols[0].symmetric;
}

// ---------------------------------------------------------------- order

const char* order_rel_name(OrderRel r) {
    switch (r) {
        case OrderRel::below: return "below";
        case OrderRel::above: return "above";
        case OrderRel::equal: return "equal";
        case OrderRel::incomparable: return "incomparable";
        case OrderRel::cover_below: return "cover-below";
        case OrderRel::cover_above: return "cover-above";
    }
    return "?";
}

static void check_element(const Structure& m, int x) {
    if (x < 0 || x >= m.size()) throw Error(ErrorKind::element_not_found, "index " + std::to_string(x));
}

OrderRel order_rel(const Structure& m, int x, int y) {
    check_element(m, x);
    check_element(m, y);
    if (x == y) return OrderRel::equal;
    if (m.parent[y] == x) return OrderRel::cover_below;
    if (m.parent[x] == y) return OrderRel::cover_above;
    if (m.strictly_below(x, y)) return OrderRel::below;
    if (m.strictly_below(y, x)) return OrderRel::above;
    return OrderRel::incomparable;
}

OrderRel order_rel(const Structure& m, std::string_view x, std::string_view y) {
    return order_rel(m, m.id(x), m.id(y));
}

int lca(const Structure& m, int x, int y) {
    check_element(m, x);
    check_element(m, y);
    int dx = m.depth(x), dy = m.depth(y);
    while (dx > dy) { x = m.parent[x]; --dx; }
    while (dy > dx) { y = m.parent[y]; --dy; }
    while (x != y) { x = m.parent[x]; y = m.parent[y]; }
    return x;
}

// ---------------------------------------------------------------- types

AtomicType atp(const Structure& m, const std::vector<int>& tuple) {
    for (int e : tuple) check_element(m, e);
    const int k = static_cast<int>(tuple.size());
    AtomicType t;
    t.length = k;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) t.literals.push_back(tuple[i] == tuple[j]);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) t.literals.push_back(m.strictly_below(tuple[i], tuple[j]));
    for (std::size_t s = 0; s < m.sig.symbols.size(); ++s) {
        const int a = m.sig.symbols[s].arity;
        if (k == 0) continue;
        std::vector<int> pick(a, 0);
        Tuple probe(a);
        while (true) {
            for (int p = 0; p < a; ++p) probe[p] = tuple[pick[p]];
            t.literals.push_back(m.has_tuple(static_cast<int>(s), probe));
            int p = a - 1;
            while (p >= 0 && ++pick[p] == k) pick[p--] = 0;
            if (p < 0) break;
        }
    }
    return t;
}

OrderType otp(const std::vector<int>& values) {
    OrderType o;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            o.push_back(values[i] < values[j] ? -1 : (values[i] == values[j] ? 0 : 1));
    return o;
}

// ---------------------------------------------------------------- substructures

Structure restrict_to(const Structure& m, const std::vector<bool>& keep_in) {
    std::vector<bool> keep = keep_in;
    keep.resize(m.size(), false);
    keep[m.root] = true;
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
        for (const Tuple& t : m.rels[s]) {
            Tuple u;
            bool ok = true;
            for (int e : t) {
                if (!keep[e]) { ok = false; break; }
                u.push_back(remap[e]);
            }
            if (ok) out.rels[s].insert(std::move(u));
        }
    }
    for (const auto& [name, set] : m.marks) {
        auto& dst = out.marks[name];
        for (int e : set)
            if (keep[e]) dst.insert(remap[e]);
    }
    return out;
}

Structure induced(const Structure& m, const std::vector<int>& keep) {
    std::vector<bool> mask(m.size(), false);
    for (int e : keep) {
        check_element(m, e);
        mask[e] = true;
    }
    return restrict_to(m, mask);
}

Structure induced(const Structure& m, const std::set<int>& keep) {
    return induced(m, std::vector<int>(keep.begin(), keep.end()));
}

// ---------------------------------------------------------------- isomorphism

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fold(std::uint64_t h, std::uint64_t v) { return mix(h ^ mix(v)); }

std::uint64_t string_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

struct Occurrence {
    int sym;
    const Tuple* tuple;
};

std::vector<std::vector<Occurrence>> occurrences(const Structure& m) {
    std::vector<std::vector<Occurrence>> occ(m.size());
    for (std::size_t s = 0; s < m.rels.size(); ++s)
        for (const Tuple& t : m.rels[s]) {
            std::vector<int> seen;
            for (int e : t)
                if (std::find(seen.begin(), seen.end(), e) == seen.end()) {
                    seen.push_back(e);
                    occ[e].push_back({static_cast<int>(s), &t});
                }
        }
    return occ;
}

// Stable colour refinement; colours are hash values so two structures are comparable.
std::vector<std::uint64_t> refine(const Structure& m, IsoOptions opt) {
    const int n = m.size();
    auto ch = m.children();
    auto occ = occurrences(m);
    std::vector<std::uint64_t> col(n);
    for (int x = 0; x < n; ++x) {
        std::uint64_t h = fold(17, x == m.root ? 1 : 2);
        if (opt.respect_marks)
            for (const auto& [name, set] : m.marks)
                if (set.count(x)) h = fold(h, string_hash(name));
        col[x] = h;
    }
    auto classes = [](std::vector<std::uint64_t> c) {
        std::sort(c.begin(), c.end());
        return std::unique(c.begin(), c.end()) - c.begin();
    };
    auto count = classes(col);
    for (int round = 0; round <= n; ++round) {
        std::vector<std::uint64_t> next(n);
        for (int x = 0; x < n; ++x) {
            std::uint64_t h = fold(col[x], m.parent[x] >= 0 ? col[m.parent[x]] : 7);
            std::vector<std::uint64_t> cs;
            for (int c : ch[x]) cs.push_back(col[c]);
            std::sort(cs.begin(), cs.end());
            std::uint64_t hc = 23;
            for (auto v : cs) hc = fold(hc, v);
            h = fold(h, hc);
            std::vector<std::uint64_t> ts;
            for (const auto& o : occ[x]) {
                std::uint64_t ht = fold(31, static_cast<std::uint64_t>(o.sym));
                std::vector<std::uint64_t> entries;
                for (int e : *o.tuple) entries.push_back(e == x ? 0x5151 : col[e]);
                // Stored order of a symmetric tuple follows element indices, not structure.
                if (m.sig.symbols[o.sym].symmetric) std::sort(entries.begin(), entries.end());
                for (auto v : entries) ht = fold(ht, v);
                ts.push_back(ht);
            }
            std::sort(ts.begin(), ts.end());
            std::uint64_t htt = 41;
            for (auto v : ts) htt = fold(htt, v);
            next[x] = fold(h, htt);
        }
        auto c2 = classes(next);
        col.swap(next);
        if (c2 == count) break;
        count = c2;
    }
    return col;
}

std::uint64_t histogram_hash(const Structure& m, const std::vector<std::uint64_t>& col) {
    std::vector<std::uint64_t> c = col;
    std::sort(c.begin(), c.end());
    std::uint64_t h = fold(99, static_cast<std::uint64_t>(m.size()));
    for (auto v : c) h = fold(h, v);
    for (const auto& r : m.rels) h = fold(h, r.size());
    return h;
}

class IsoSearch {
public:
    IsoSearch(const Structure& a, const Structure& b, const std::vector<std::uint64_t>& ca,
              const std::vector<std::uint64_t>& cb, IsoOptions opt)
        : a_(a), b_(b), ca_(ca), cb_(cb), opt_(opt) {}

    std::optional<std::vector<int>> run() {
        const int n = a_.size();
        if (n != b_.size()) return std::nullopt;
        if (!(a_.sig == b_.sig)) throw Error(ErrorKind::signature_mismatch, "iso on different signatures");
        for (std::size_t s = 0; s < a_.rels.size(); ++s)
            if (a_.rels[s].size() != b_.rels[s].size()) return std::nullopt;
        if (opt_.respect_marks) {
            auto nonempty = [](const Structure& m) {
                std::map<std::string, std::size_t> r;
                for (const auto& [k, v] : m.marks)
                    if (!v.empty()) r[k] = v.size();
                return r;
            };
            if (nonempty(a_) != nonempty(b_)) return std::nullopt;
        }
        {
            auto x = ca_, y = cb_;
            std::sort(x.begin(), x.end());
            std::sort(y.begin(), y.end());
            if (x != y) return std::nullopt;
        }
        occ_a_ = occurrences(a_);
        sym_adj_a_ = symmetric_adjacency(a_);
        sym_adj_b_ = symmetric_adjacency(b_);
        build_order();
        for (int y = 0; y < n; ++y) by_colour_[cb_[y]].push_back(y);
        f_.assign(n, -1);
        used_.assign(n, false);
        if (search(0)) return f_;
        return std::nullopt;
    }

private:
    using Adj = std::vector<std::vector<char>>;

    std::vector<Adj> symmetric_adjacency(const Structure& m) {
        std::vector<Adj> out;
        for (std::size_t s = 0; s < m.rels.size(); ++s) {
            if (!m.sig.symbols[s].symmetric) continue;
            Adj adj(m.size(), std::vector<char>(m.size(), 0));
            for (const Tuple& t : m.rels[s]) adj[t[0]][t[1]] = adj[t[1]][t[0]] = 1;
            out.push_back(std::move(adj));
        }
        return out;
    }

    void build_order() {
        const int n = a_.size();
        std::vector<std::vector<int>> nb(n);
        for (const auto& r : a_.rels)
            for (const Tuple& t : r)
                for (int u : t)
                    for (int v : t)
                        if (u != v) nb[u].push_back(v);
        std::map<std::uint64_t, int> class_size;
        for (auto c : ca_) ++class_size[c];
        std::vector<bool> placed(n, false);
        std::vector<int> links(n, 0);
        order_.clear();
        auto place = [&](int x) {
            placed[x] = true;
            order_.push_back(x);
            for (int v : nb[x]) ++links[v];
        };
        place(a_.root);
        while (static_cast<int>(order_.size()) < n) {
            int best = -1;
            for (int x = 0; x < n; ++x) {
                if (placed[x] || !placed[a_.parent[x]]) continue;
                if (best < 0) { best = x; continue; }
                if (links[x] != links[best]) {
                    if (links[x] > links[best]) best = x;
                    continue;
                }
                if (class_size[ca_[x]] < class_size[ca_[best]]) best = x;
            }
            place(best);
        }
        position_.assign(n, 0);
        for (int i = 0; i < n; ++i) position_[order_[i]] = i;
    }

    bool consistent(int x, int y, int depth) const {
        if (x == a_.root) {
            if (y != b_.root) return false;
        } else if (b_.parent[y] != f_[a_.parent[x]]) {
            return false;
        }
        for (std::size_t s = 0; s < sym_adj_a_.size(); ++s) {
            const auto& ra = sym_adj_a_[s][x];
            const auto& rb = sym_adj_b_[s][y];
            for (int i = 0; i < depth; ++i) {
                int z = order_[i];
                if (ra[z] != rb[f_[z]]) return false;
            }
        }
        for (const auto& o : occ_a_[x]) {
            if (a_.sig.symbols[o.sym].symmetric) continue;
            Tuple img;
            bool complete = true;
            for (int e : *o.tuple) {
                if (e == x) { img.push_back(y); continue; }
                if (f_[e] < 0) { complete = false; break; }
                img.push_back(f_[e]);
            }
            if (complete && !b_.rels[o.sym].count(img)) return false;
        }
        if (opt_.respect_marks)
            for (const auto& [name, set] : a_.marks)
                if (set.count(x) != b_.mark(name).count(y)) return false;
        return true;
    }

    bool search(int depth) {
        if (depth == static_cast<int>(order_.size())) return true;
        int x = order_[depth];
        auto it = by_colour_.find(ca_[x]);
        if (it == by_colour_.end()) return false;
        for (int y : it->second) {
            if (used_[y] || !consistent(x, y, depth)) continue;
            f_[x] = y;
            used_[y] = true;
            if (search(depth + 1)) return true;
            f_[x] = -1;
            used_[y] = false;
        }
        return false;
    }

    const Structure& a_;
    const Structure& b_;
    const std::vector<std::uint64_t>& ca_;
    const std::vector<std::uint64_t>& cb_;
    IsoOptions opt_;
    std::vector<std::vector<Occurrence>> occ_a_;
    std::vector<Adj> sym_adj_a_, sym_adj_b_;
    std::vector<int> order_, position_, f_;
    std::vector<bool> used_;
    std::unordered_map<std::uint64_t, std::vector<int>> by_colour_;
};

}  // namespace

std::optional<std::vector<int>> iso(const Structure& m, const Structure& n, IsoOptions opt) {
    if (!(m.sig == n.sig)) throw Error(ErrorKind::signature_mismatch, "iso on different signatures");
    auto cm = refine(m, opt);
    auto cn = refine(n, opt);
    return IsoSearch(m, n, cm, cn, opt).run();
}

bool isomorphic(const Structure& m, const Structure& n, IsoOptions opt) {
    return iso(m, n, opt).has_value();
}

std::uint64_t invariant_hash(const Structure& m, IsoOptions opt) {
    return histogram_hash(m, refine(m, opt));
}

std::pair<int, bool> IsoClassSet::insert(const Structure& s) {
    auto col = refine(s, opt_);
    auto h = histogram_hash(s, col);
    auto& bucket = buckets_[h];
    for (int idx : bucket)
        if (IsoSearch(s, items_[idx], col, colors_[idx], opt_).run()) return {idx, false};
    int idx = static_cast<int>(items_.size());
    items_.push_back(s);
    colors_.push_back(std::move(col));
    bucket.push_back(idx);
    return {idx, true};
}

std::optional<int> IsoClassSet::find(const Structure& s) const {
    auto col = refine(s, opt_);
    auto h = histogram_hash(s, col);
    auto it = buckets_.find(h);
    if (it == buckets_.end()) return std::nullopt;
    for (int idx : it->second)
        if (IsoSearch(s, items_[idx], col, colors_[idx], opt_).run()) return idx;
    return std::nullopt;
}

}  // namespace tows
