#include "tows/twists.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "tows/io.hpp"

namespace tows::twists {

namespace {

int cmp3(int a, int b) { return a < b ? -1 : (a == b ? 0 : 1); }

AtomicType pair_type(const Structure& m, int x, int y) { return atp(m, {x, y}); }

bool adjacent(const Structure& m, int x, int y) {
    for (std::size_t s = 0; s < m.sig.symbols.size(); ++s) {
        if (m.sig.symbols[s].arity != 2) continue;
        if (m.has_tuple(static_cast<int>(s), {x, y}) || m.has_tuple(static_cast<int>(s), {y, x})) return true;
    }
    return false;
}

bool covers(const Structure& m, int lower, int upper) { return m.parent[upper] == lower; }

bool comparable(const Structure& m, int x, int y) { return m.strictly_below(x, y) || m.strictly_below(y, x); }

std::string name_of(const Structure& m, int x) { return m.names[x]; }

std::string cell_name(const Structure& m, const Mesh& mu, int s, int i, int j) {
    return "mu" + std::to_string(s) + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")=" +
           name_of(m, mu.at(i, j));
}

bool independent_set(const Structure& m, const std::vector<int>& xs, std::string* witness = nullptr) {
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b)
            if (adjacent(m, xs[a], xs[b])) {
                if (witness) *witness = name_of(m, xs[a]) + " ~ " + name_of(m, xs[b]);
                return false;
            }
    return true;
}

bool antichain_set(const Structure& m, const std::vector<int>& xs, std::string* witness = nullptr) {
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b)
            if (comparable(m, xs[a], xs[b])) {
                if (witness) *witness = name_of(m, xs[a]) + " and " + name_of(m, xs[b]) + " comparable";
                return false;
            }
    return true;
}

bool chain_set(const Structure& m, const std::vector<int>& xs) {
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b)
            if (!comparable(m, xs[a], xs[b])) return false;
    return true;
}

// Maximum of a chain (the element above all others), -1 if xs is not a chain.
int chain_max(const Structure& m, const std::vector<int>& xs) {
    for (int x : xs) {
        bool top = true;
        for (int y : xs)
            if (y != x && !m.strictly_below(y, x)) top = false;
        if (top) return x;
    }
    return -1;
}

int chain_min(const Structure& m, const std::vector<int>& xs) {
    for (int x : xs) {
        bool bottom = true;
        for (int y : xs)
            if (y != x && !m.strictly_below(x, y)) bottom = false;
        if (bottom) return x;
    }
    return -1;
}

// atp(u, v) constant over u in us, v in vs, u != v.
bool homogeneous_sets(const Structure& m, const std::vector<int>& us, const std::vector<int>& vs,
                      std::string* witness = nullptr) {
    std::optional<AtomicType> first;
    int fu = -1, fv = -1;
    for (int u : us)
        for (int v : vs) {
            if (u == v) continue;
            AtomicType t = pair_type(m, u, v);
            if (!first) {
                first = t;
                fu = u;
                fv = v;
            } else if (t != *first) {
                if (witness)
                    *witness = "(" + name_of(m, fu) + "," + name_of(m, fv) + ") vs (" + name_of(m, u) + "," +
                               name_of(m, v) + ")";
                return false;
            }
        }
    return true;
}

bool pattern_below(OrderPattern p, int di, int dj) {
    switch (p) {
        case OrderPattern::antichain: return false;
        case OrderPattern::lex_ij: return di == -1 || (di == 0 && dj == -1);
        case OrderPattern::lex_rev_i_j: return di == 1 || (di == 0 && dj == -1);
        case OrderPattern::lex_i_rev_j: return di == -1 || (di == 0 && dj == 1);
        case OrderPattern::lex_rev_i_rev_j: return di == 1 || (di == 0 && dj == 1);
        case OrderPattern::lex_ji: return dj == -1 || (dj == 0 && di == -1);
        case OrderPattern::lex_rev_j_i: return dj == 1 || (dj == 0 && di == -1);
        case OrderPattern::lex_j_rev_i: return dj == -1 || (dj == 0 && di == 1);
        case OrderPattern::lex_rev_j_rev_i: return dj == 1 || (dj == 0 && di == 1);
        case OrderPattern::rows_i: return dj == 0 && di == -1;
        case OrderPattern::rows_rev_i: return dj == 0 && di == 1;
        case OrderPattern::cols_j: return di == 0 && dj == -1;
        case OrderPattern::cols_rev_j: return di == 0 && dj == 1;
        case OrderPattern::other: return false;
    }
    return false;
}

constexpr OrderPattern kPatterns[] = {
    OrderPattern::antichain,   OrderPattern::lex_ij,          OrderPattern::lex_rev_i_j,
    OrderPattern::lex_i_rev_j, OrderPattern::lex_rev_i_rev_j, OrderPattern::lex_ji,
    OrderPattern::lex_rev_j_i, OrderPattern::lex_j_rev_i,     OrderPattern::lex_rev_j_rev_i,
    OrderPattern::rows_i,      OrderPattern::rows_rev_i,      OrderPattern::cols_j,
    OrderPattern::cols_rev_j,
};

// Order pattern read directly from the cells; `other` if none of the table rows fits.
OrderPattern read_pattern(const Structure& m, const Mesh& mu) {
    for (OrderPattern p : kPatterns) {
        bool ok = true;
        for (int i = 0; i < mu.rows && ok; ++i)
            for (int j = 0; j < mu.cols && ok; ++j)
                for (int i2 = 0; i2 < mu.rows && ok; ++i2)
                    for (int j2 = 0; j2 < mu.cols && ok; ++j2) {
                        if (i == i2 && j == j2) continue;
                        if (m.strictly_below(mu.at(i, j), mu.at(i2, j2)) != pattern_below(p, cmp3(i, i2), cmp3(j, j2)))
                            ok = false;
                    }
        if (ok) return p;
    }
    return OrderPattern::other;
}

// Table otp(i, row) -> atp(mu(i,j), guard) if it depends only on otp; nullopt otherwise.
std::optional<std::map<int, AtomicType>> guard_table(const Structure& m, const Mesh& mu, int row, int guard) {
    std::map<int, AtomicType> table;
    for (int i = 0; i < mu.rows; ++i)
        for (int j = 0; j < mu.cols; ++j) {
            AtomicType t = pair_type(m, mu.at(i, j), guard);
            int key = cmp3(i, row);
            auto [it, fresh] = table.emplace(key, t);
            if (!fresh && it->second != t) return std::nullopt;
        }
    return table;
}

bool table_constant(const std::map<int, AtomicType>& t) {
    for (const auto& [k, v] : t)
        if (v != t.begin()->second) return false;
    return true;
}

Mesh interior_columns(const Mesh& mu) {
    std::vector<int> rows, cols;
    for (int i = 0; i < mu.rows; ++i) rows.push_back(i);
    for (int j = 1; j + 1 < mu.cols; ++j) cols.push_back(j);
    return mu.sub(rows, cols);
}

void check_same_shape(const Mesh& a, const Mesh& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw Error(ErrorKind::index_mismatch, "meshes do not share their index sets");
}

std::string pair_witness(const Structure& m, const Mesh& mu, const Mesh& nu, int s, int t) {
    // Two quadruples with distinct atomic types among off-diagonal ones, or the irregular pair.
    std::map<IndexKey, std::pair<AtomicType, std::string>> seen;
    std::optional<std::pair<AtomicType, std::string>> off;
    for (int i = 0; i < mu.rows; ++i)
        for (int j = 0; j < mu.cols; ++j)
            for (int i2 = 0; i2 < nu.rows; ++i2)
                for (int j2 = 0; j2 < nu.cols; ++j2) {
                    AtomicType ty = pair_type(m, mu.at(i, j), nu.at(i2, j2));
                    std::string here = cell_name(m, mu, s, i, j) + "/" + cell_name(m, nu, t, i2, j2);
                    IndexKey key{cmp3(i, i2), cmp3(j, j2)};
                    auto it = seen.find(key);
                    if (it != seen.end() && it->second.first != ty)
                        return "irregular: " + it->second.second + " vs " + here;
                    seen.emplace(key, std::make_pair(ty, here));
                    if (i == i2 && j == j2) continue;
                    if (!off) off = std::make_pair(ty, here);
                    else if (off->first != ty) return "off-diagonal types differ: " + off->second + " vs " + here;
                }
    return "pair is homogeneous";
}

}  // namespace

// ---------------------------------------------------------------- meshes

Mesh Mesh::transpose() const {
    Mesh t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

Mesh Mesh::sub(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
    Mesh s(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (std::size_t a = 0; a < row_idx.size(); ++a)
        for (std::size_t b = 0; b < col_idx.size(); ++b)
            s.at(static_cast<int>(a), static_cast<int>(b)) = at(row_idx[a], col_idx[b]);
    return s;
}

void check_mesh(const Structure& m, const Mesh& mu) {
    if (mu.rows < 1 || mu.cols < 1 || static_cast<int>(mu.cells.size()) != mu.rows * mu.cols)
        throw Error(ErrorKind::index_mismatch, "mesh shape does not match its cells");
    std::set<int> seen;
    for (int c : mu.cells) {
        if (c < 0 || c >= m.size()) throw Error(ErrorKind::index_mismatch, "mesh cell outside the universe");
        if (!seen.insert(c).second)
            throw Error(ErrorKind::index_mismatch, "mesh is not injective at " + m.names[c]);
    }
}

PairClass pair_class(const Structure& m, const Mesh& mu, const Mesh& nu) {
    check_same_shape(mu, nu);
    check_mesh(m, mu);
    check_mesh(m, nu);
    PairClass pc;
    pc.regular = true;
    bool all_same = true, off_same = true;
    std::optional<AtomicType> first, first_off;
    for (int i = 0; i < mu.rows; ++i)
        for (int j = 0; j < mu.cols; ++j)
            for (int i2 = 0; i2 < nu.rows; ++i2)
                for (int j2 = 0; j2 < nu.cols; ++j2) {
                    AtomicType t = pair_type(m, mu.at(i, j), nu.at(i2, j2));
                    IndexKey key{cmp3(i, i2), cmp3(j, j2)};
                    auto [it, fresh] = pc.table.emplace(key, t);
                    if (!fresh && it->second != t) pc.regular = false;
                    if (!first) first = t;
                    else if (t != *first) all_same = false;
                    if (i == i2 && j == j2) continue;
                    if (!first_off) first_off = t;
                    else if (t != *first_off) off_same = false;
                }
    std::set<int> a(mu.cells.begin(), mu.cells.end());
    pc.disjoint = std::none_of(nu.cells.begin(), nu.cells.end(), [&](int c) { return a.count(c) > 0; });
    pc.homogeneous = all_same;
    pc.quasi_homogeneous = pc.regular && off_same;
    pc.matching = pc.quasi_homogeneous && !pc.homogeneous;
    pc.conducting = (mu.rows == mu.cols && mu.rows <= 3) || (pc.regular && !pc.homogeneous);
    if (!pc.regular) pc.table.clear();
    return pc;
}

const char* pattern_name(OrderPattern p) {
    switch (p) {
        case OrderPattern::antichain: return "antichain";
        case OrderPattern::lex_ij: return "<_{I,J}";
        case OrderPattern::lex_rev_i_j: return "<_{~I,J}";
        case OrderPattern::lex_i_rev_j: return "<_{I,~J}";
        case OrderPattern::lex_rev_i_rev_j: return "<_{~I,~J}";
        case OrderPattern::lex_ji: return "<_{J,I}";
        case OrderPattern::lex_rev_j_i: return "<_{~J,I}";
        case OrderPattern::lex_j_rev_i: return "<_{J,~I}";
        case OrderPattern::lex_rev_j_rev_i: return "<_{~J,~I}";
        case OrderPattern::rows_i: return "<_I";
        case OrderPattern::rows_rev_i: return "<_~I";
        case OrderPattern::cols_j: return "<_J";
        case OrderPattern::cols_rev_j: return "<_~J";
        case OrderPattern::other: return "other";
    }
    return "other";
}

bool is_lexicographic(OrderPattern p) {
    return p == OrderPattern::lex_ij || p == OrderPattern::lex_rev_i_j || p == OrderPattern::lex_i_rev_j ||
           p == OrderPattern::lex_rev_i_rev_j;
}

bool is_antilexicographic(OrderPattern p) {
    return p == OrderPattern::lex_ji || p == OrderPattern::lex_rev_j_i || p == OrderPattern::lex_j_rev_i ||
           p == OrderPattern::lex_rev_j_rev_i;
}

bool is_vertical_guard(const Structure& m, const Mesh& mu, const std::vector<int>& guard) {
    if (static_cast<int>(guard.size()) != mu.rows) return false;
    std::map<int, AtomicType> table;
    for (int row = 0; row < mu.rows; ++row) {
        auto t = guard_table(m, mu, row, guard[row]);
        if (!t) return false;
        for (const auto& [k, v] : *t) {
            auto [it, fresh] = table.emplace(k, v);
            if (!fresh && it->second != v) return false;
        }
    }
    return !table.empty() && !table_constant(table);
}

std::optional<std::vector<int>> find_vertical_guard(const Structure& m, const Mesh& mu) {
    if (mu.rows < 2 || mu.cols < 1) return std::nullopt;
    // Per row: distinct admissible partial tables with a witness element.
    std::vector<std::vector<std::pair<std::map<int, AtomicType>, int>>> options(mu.rows);
    std::map<int, std::set<AtomicType>> values;
    for (int row = 0; row < mu.rows; ++row) {
        for (int c = 0; c < m.size(); ++c) {
            auto t = guard_table(m, mu, row, c);
            if (!t) continue;
            auto& opts = options[row];
            if (std::none_of(opts.begin(), opts.end(), [&](const auto& o) { return o.first == *t; }))
                opts.emplace_back(*t, c);
            for (const auto& [k, v] : *t) values[k].insert(v);
        }
        if (options[row].empty()) return std::nullopt;
    }
    const std::vector<AtomicType> lt(values[-1].begin(), values[-1].end());
    const std::vector<AtomicType> eq(values[0].begin(), values[0].end());
    const std::vector<AtomicType> gt(values[1].begin(), values[1].end());
    for (const auto& a : lt)
        for (const auto& b : eq)
            for (const auto& c : gt) {
                if (a == b && b == c) continue;
                std::map<int, AtomicType> full{{-1, a}, {0, b}, {1, c}};
                std::vector<int> guard;
                for (int row = 0; row < mu.rows; ++row) {
                    int pick = -1;
                    for (const auto& [t, e] : options[row]) {
                        bool agree = std::all_of(t.begin(), t.end(), [&](const auto& kv) { return full.at(kv.first) == kv.second; });
                        if (agree) {
                            pick = e;
                            break;
                        }
                    }
                    if (pick < 0) break;
                    guard.push_back(pick);
                }
                if (static_cast<int>(guard.size()) == mu.rows) return guard;
            }
    return std::nullopt;
}

bool is_pseudo_vertical(const Structure& m, const Mesh& mu) {
    if (mu.cols < 3) return false;
    if (!pair_class(m, mu, mu).regular) return false;
    return find_vertical_guard(m, interior_columns(mu)).has_value();
}

bool is_inner_vertical(const Structure& m, const Mesh& mu) {
    if (mu.cols < 3) return false;
    if (!pair_class(m, mu, mu).regular) return false;
    Mesh inner = interior_columns(mu);
    std::vector<int> lo, hi;
    for (int i = 0; i < mu.rows; ++i) {
        lo.push_back(mu.at(i, 0));
        hi.push_back(mu.at(i, mu.cols - 1));
    }
    return is_vertical_guard(m, inner, lo) || is_vertical_guard(m, inner, hi);
}

MeshClass mesh_class(const Structure& m, const Mesh& mu) {
    check_mesh(m, mu);
    MeshClass mc;
    PairClass self = pair_class(m, mu, mu);
    mc.regular = self.regular;
    mc.pattern = mc.regular ? read_pattern(m, mu) : OrderPattern::other;
    mc.chain = chain_set(m, mu.cells);
    mc.independent = independent_set(m, mu.cells);
    Mesh tr = mu.transpose();
    mc.vertical = find_vertical_guard(m, mu).has_value();
    mc.horizontal = find_vertical_guard(m, tr).has_value();
    mc.pseudo_vertical = is_pseudo_vertical(m, mu);
    mc.pseudo_horizontal = is_pseudo_vertical(m, tr);
    mc.inner_vertical = is_inner_vertical(m, mu);
    mc.inner_horizontal = is_inner_vertical(m, tr);
    return mc;
}

// ---------------------------------------------------------------- twisters

bool TwisterReport::pass() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass; });
}

std::string TwisterReport::text() const {
    std::ostringstream out;
    for (const auto& p : properties) {
        out << p.name << ' ' << (p.pass ? "pass" : "FAIL");
        if (!p.pass) out << ' ' << p.witness;
        out << '\n';
    }
    if (exception_used) out << "tw4 exception: an end pair is conducting but not matching\n";
    out << "twister " << (pass() ? "pass" : "FAIL") << '\n';
    return out.str();
}

TwisterReport validate_twister(const Structure& m, const GuardedSequence& seq) {
    const int h = seq.length();
    if (h < 1) throw Error(ErrorKind::index_mismatch, "a twister has at least one mesh");
    for (const auto& mu : seq.meshes) {
        check_same_shape(seq.meshes.front(), mu);
        check_mesh(m, mu);
    }
    const int rows = seq.rows(), cols = seq.cols();
    if (!seq.guard_a.empty() && static_cast<int>(seq.guard_a.size()) != rows)
        throw Error(ErrorKind::index_mismatch, "guard A must be indexed by I");
    if (!seq.guard_b.empty() && static_cast<int>(seq.guard_b.size()) != cols)
        throw Error(ErrorKind::index_mismatch, "guard B must be indexed by J");
    for (int x : seq.guard_a)
        if (x < 0 || x >= m.size()) throw Error(ErrorKind::index_mismatch, "guard outside the universe");
    for (int x : seq.guard_b)
        if (x < 0 || x >= m.size()) throw Error(ErrorKind::index_mismatch, "guard outside the universe");

    const auto& mus = seq.meshes;
    std::vector<bool> inner_v(h), inner_h(h), is_chain(h), is_antichain(h);
    for (int s = 0; s < h; ++s) {
        inner_v[s] = is_inner_vertical(m, mus[s]);
        inner_h[s] = is_inner_vertical(m, mus[s].transpose());
        is_chain[s] = chain_set(m, mus[s].cells);
        is_antichain[s] = antichain_set(m, mus[s].cells);
    }
    TwisterReport rep;
    auto add = [&](const char* name) -> PropertyResult& {
        rep.properties.push_back({name, true, ""});
        return rep.properties.back();
    };
    auto fail = [](PropertyResult& p, const std::string& w) {
        if (p.pass) {
            p.pass = false;
            p.witness = w;
        }
    };

    auto& tw1 = add("tw1");
    if (!inner_v[0] && !find_vertical_guard(m, mus[0])) fail(tw1, "mu1 is neither vertical nor inner-vertical");

    auto& tw2 = add("tw2");
    for (int s = 1; s + 1 < h; ++s) {
        std::string w;
        if (!independent_set(m, mus[s].cells, &w)) fail(tw2, "mu" + std::to_string(s + 1) + " not independent: " + w);
        if (!antichain_set(m, mus[s].cells, &w)) fail(tw2, "mu" + std::to_string(s + 1) + " not an antichain: " + w);
    }

    auto& tw3 = add("tw3");
    if (!inner_h[h - 1] && !find_vertical_guard(m, mus[h - 1].transpose()))
        fail(tw3, "mu" + std::to_string(h) + " is neither horizontal nor inner-horizontal");

    auto& tw4 = add("tw4");
    for (int s = 0; s + 1 < h; ++s) {
        PairClass pc = pair_class(m, mus[s], mus[s + 1]);
        if (pc.matching) continue;
        bool first_end = s == 0 && is_chain[0] && is_antichain[1];
        bool last_end = s + 2 == h && is_chain[h - 1] && is_antichain[h - 2];
        if ((first_end || last_end) && pc.conducting) {
            rep.exception_used = true;
            continue;
        }
        fail(tw4, "pair (mu" + std::to_string(s + 1) + ",mu" + std::to_string(s + 2) +
                      ") not matching: " + pair_witness(m, mus[s], mus[s + 1], s + 1, s + 2));
    }

    auto& tw5 = add("tw5");
    for (int s = 0; s < h; ++s)
        for (int t = s + 2; t < h; ++t)
            if (!pair_class(m, mus[s], mus[t]).homogeneous)
                fail(tw5, "pair (mu" + std::to_string(s + 1) + ",mu" + std::to_string(t + 1) +
                              ") not homogeneous: " + pair_witness(m, mus[s], mus[t], s + 1, t + 1));

    auto& tw6 = add("tw6");
    if (inner_v[0]) {
        if (!seq.guard_a.empty()) fail(tw6, "mu1 is inner-vertical but A is not empty");
    } else if (seq.guard_a.empty() || !is_vertical_guard(m, mus[0], seq.guard_a)) {
        fail(tw6, "A is not a vertical guard of mu1");
    }

    auto& tw7 = add("tw7");
    if (inner_h[h - 1]) {
        if (!seq.guard_b.empty()) fail(tw7, "mu" + std::to_string(h) + " is inner-horizontal but B is not empty");
    } else if (seq.guard_b.empty() || !is_vertical_guard(m, mus[h - 1].transpose(), seq.guard_b)) {
        fail(tw7, "B is not a horizontal guard of mu" + std::to_string(h));
    }

    auto& tw8 = add("tw8");
    {
        std::map<int, std::string> owner;
        auto claim = [&](int x, const std::string& who) {
            auto [it, fresh] = owner.emplace(x, who);
            if (!fresh) fail(tw8, name_of(m, x) + " lies in " + it->second + " and " + who);
        };
        for (int x : seq.guard_a) claim(x, "A");
        for (int s = 0; s < h; ++s)
            for (int x : mus[s].cells) claim(x, "mu" + std::to_string(s + 1));
        for (int x : seq.guard_b) claim(x, "B");
    }

    auto& tw9 = add("tw9");
    for (int s = 1; s < h; ++s) {
        std::string w;
        if (!homogeneous_sets(m, mus[s].cells, seq.guard_a, &w))
            fail(tw9, "(A,mu" + std::to_string(s + 1) + ") not homogeneous: " + w);
    }

    auto& tw10 = add("tw10");
    for (int s = 0; s + 1 < h; ++s) {
        std::string w;
        if (!homogeneous_sets(m, mus[s].cells, seq.guard_b, &w))
            fail(tw10, "(mu" + std::to_string(s + 1) + ",B) not homogeneous: " + w);
    }

    auto& tw11 = add("tw11");
    {
        std::string w;
        if (!homogeneous_sets(m, seq.guard_a, seq.guard_b, &w)) fail(tw11, "(A,B) not homogeneous: " + w);
    }

    auto& tw12 = add("tw12");
    for (const auto* g : {&seq.guard_a, &seq.guard_b}) {
        const char* label = g == &seq.guard_a ? "A" : "B";
        std::string w;
        if (!independent_set(m, *g, &w)) fail(tw12, std::string(label) + " not independent: " + w);
        if (!chain_set(m, *g) && !antichain_set(m, *g)) fail(tw12, std::string(label) + " neither chain nor antichain");
    }

    auto& tw13 = add("tw13");
    {
        auto hit = [&](const std::vector<int>& xs, const std::string& who) {
            if (std::find(xs.begin(), xs.end(), m.root) != xs.end()) fail(tw13, "root lies in " + who);
        };
        hit(seq.guard_a, "A");
        for (int s = 0; s < h; ++s) hit(mus[s].cells, "mu" + std::to_string(s + 1));
        hit(seq.guard_b, "B");
    }

    auto& tw14 = add("tw14");
    for (int s = 1; s < h; ++s)
        if (inner_v[s]) fail(tw14, "mu" + std::to_string(s + 1) + " is inner-vertical");
    for (int s = 0; s + 1 < h; ++s)
        if (inner_h[s]) fail(tw14, "mu" + std::to_string(s + 1) + " is inner-horizontal");
    return rep;
}

int preclean_type(const Structure& m, const GuardedSequence& seq) {
    if (seq.meshes.empty()) return 0;
    const bool has_a = !seq.guard_a.empty(), has_b = !seq.guard_b.empty();
    if (has_a && has_b) return antichain_set(m, seq.guard_a) && antichain_set(m, seq.guard_b) ? 1 : 0;
    if (has_a || has_b) return 0;
    OrderPattern first = read_pattern(m, seq.meshes.front());
    OrderPattern last = read_pattern(m, seq.meshes.back());
    if (first == OrderPattern::cols_j && last == OrderPattern::rows_i) return 2;
    if (first == OrderPattern::lex_ij && is_antilexicographic(last)) return 3;
    return 0;
}

namespace {

// mu chain, nu antichain; mu(i,j) < nu(i',j') iff i <= i' (by_rows) or j <= j' (columns,
// mirrored when `reversed`); union independent.
bool simple_pair(const Structure& m, const Mesh& mu, const Mesh& nu, bool by_rows, bool reversed) {
    if (!chain_set(m, mu.cells) || !antichain_set(m, nu.cells)) return false;
    if (!pair_class(m, mu, mu).regular || !pair_class(m, nu, nu).regular) return false;
    if (!pair_class(m, mu, nu).conducting) return false;
    std::vector<int> all = mu.cells;
    all.insert(all.end(), nu.cells.begin(), nu.cells.end());
    if (!independent_set(m, all)) return false;
    for (int i = 0; i < mu.rows; ++i)
        for (int j = 0; j < mu.cols; ++j)
            for (int i2 = 0; i2 < nu.rows; ++i2)
                for (int j2 = 0; j2 < nu.cols; ++j2) {
                    bool want = by_rows ? i <= i2 : (reversed ? j >= j2 : j <= j2);
                    if (m.strictly_below(mu.at(i, j), nu.at(i2, j2)) != want) return false;
                }
    return true;
}

}  // namespace

std::string CleanReport::text() const {
    std::ostringstream out;
    out << "preclean-type " << preclean_type << '\n';
    for (const auto& f : failures) out << "violation " << f << '\n';
    out << "clean " << (clean ? "true" : "false") << '\n';
    return out.str();
}

CleanReport validate_clean(const Structure& m, const GuardedSequence& seq) {
    if (seq.rows() == 2 && seq.cols() == 2) {
        // Inner guards need an interior index, so order 2 is judged as a core.
        CleanReport rep;
        Core c = core_of(LabelledTwist{m, seq});
        rep.preclean_type = c.type;
        if (c.type == 0) {
            rep.failures.push_back("no pre-clean type applies");
        } else {
            for (auto& v : validate_core(c).violations) rep.failures.push_back(v);
        }
        rep.clean = rep.failures.empty();
        return rep;
    }
    TwisterReport tw = validate_twister(m, seq);
    if (!tw.pass()) throw Error(ErrorKind::not_a_twister, tw.text());
    CleanReport rep;
    rep.preclean_type = preclean_type(m, seq);
    if (rep.preclean_type == 0) rep.failures.push_back("no pre-clean type applies");
    const auto& mus = seq.meshes;
    const int h = seq.length();
    for (int x : mus[h - 1].cells)
        for (int y : mus[0].cells)
            if (m.strictly_below(x, y)) {
                rep.failures.push_back("mu" + std::to_string(h) + " vertex " + m.names[x] + " below mu1 vertex " + m.names[y]);
                goto root_check;
            }
root_check:
    {
        auto root_homogeneous = [&](const std::vector<int>& xs, const std::string& who) {
            if (!homogeneous_sets(m, {m.root}, xs)) rep.failures.push_back("root not homogeneous to " + who);
        };
        root_homogeneous(seq.guard_a, "A");
        root_homogeneous(seq.guard_b, "B");
        for (int s = 0; s < h; ++s) root_homogeneous(mus[s].cells, "mu" + std::to_string(s + 1));
    }
    if (rep.preclean_type == 3 && h >= 2) {
        bool first_ok = pair_class(m, mus[0], mus[1]).matching || simple_pair(m, mus[0], mus[1], true, false);
        if (!first_ok) rep.failures.push_back("(mu1,mu2) neither matching nor simply vertical");
        bool reversed = read_pattern(m, mus[h - 1]) == OrderPattern::lex_rev_j_i ||
                        read_pattern(m, mus[h - 1]) == OrderPattern::lex_rev_j_rev_i;
        bool last_ok = pair_class(m, mus[h - 1], mus[h - 2]).matching ||
                       simple_pair(m, mus[h - 1], mus[h - 2], false, reversed);
        if (!last_ok)
            rep.failures.push_back("(mu" + std::to_string(h) + ",mu" + std::to_string(h - 1) +
                                   ") neither matching nor simply horizontal");
    }
    rep.clean = rep.failures.empty();
    return rep;
}

// ---------------------------------------------------------------- matching and star types

const char* match_name(MatchType t) {
    switch (t) {
        case MatchType::forward: return "M->";
        case MatchType::backward: return "M<-";
        case MatchType::forward_edge: return "M_->";
        case MatchType::backward_edge: return "M_<-";
        case MatchType::edge: return "M_";
        case MatchType::edge_low: return "M_0";
        case MatchType::edge_chain: return "M_1";
        case MatchType::edge_high: return "M_2";
    }
    return "?";
}

const char* star_name(StarType t) {
    switch (t) {
        case StarType::v_cover: return "S->v";
        case StarType::v_cover_edge: return "S_->v";
        case StarType::v_edge: return "S_v";
        case StarType::h_cover: return "S<-h";
        case StarType::h_cover_edge: return "S_<-h";
        case StarType::h_edge: return "S_h";
    }
    return "?";
}

MatchType matching_type(const Structure& m, const Mesh& first, const Mesh& second) {
    PairClass pc = pair_class(m, first, second);
    if (!pc.matching) throw Error(ErrorKind::pattern_not_matched, "pair is not matching");
    const int top1 = chain_max(m, first.cells);
    const int top2 = chain_max(m, second.cells);
    const int bottom2 = chain_min(m, second.cells);
    auto all_cells = [&](const std::function<bool(int, int)>& pred) {
        for (int i = 0; i < first.rows; ++i)
            for (int j = 0; j < first.cols; ++j)
                if (!pred(first.at(i, j), second.at(i, j))) return false;
        return true;
    };
    auto edge = [&](int x, int y) { return adjacent(m, x, y); };
    auto near = [&](int x, int y) { return covers(m, x, y) || covers(m, y, x); };
    if (top1 >= 0 && all_cells([&](int x, int y) { return covers(m, top1, y) && edge(x, y); }))
        return MatchType::edge_low;
    if (top1 >= 0 && bottom2 >= 0 && covers(m, top1, bottom2) && all_cells(edge)) return MatchType::edge_chain;
    if (top2 >= 0 && all_cells([&](int x, int y) { return covers(m, top2, x) && edge(x, y); }))
        return MatchType::edge_high;
    if (all_cells([&](int x, int y) { return covers(m, x, y) && !edge(x, y); })) return MatchType::forward;
    if (all_cells([&](int x, int y) { return covers(m, y, x) && !edge(x, y); })) return MatchType::backward;
    if (all_cells([&](int x, int y) { return covers(m, x, y) && edge(x, y); })) return MatchType::forward_edge;
    if (all_cells([&](int x, int y) { return covers(m, y, x) && edge(x, y); })) return MatchType::backward_edge;
    if (all_cells([&](int x, int y) { return !near(x, y) && edge(x, y); })) return MatchType::edge;
    throw Error(ErrorKind::pattern_not_matched, "matching pair fits no displayed cover/edge pattern");
}

StarType star_type(const Structure& m, const std::vector<int>& guard, const Mesh& mu, bool vertical) {
    check_mesh(m, mu);
    if (static_cast<int>(guard.size()) != (vertical ? mu.rows : mu.cols))
        throw Error(ErrorKind::index_mismatch, "guard length does not match the mesh side");
    auto all_cells = [&](const std::function<bool(int, int)>& pred) {
        for (int i = 0; i < mu.rows; ++i)
            for (int j = 0; j < mu.cols; ++j)
                if (!pred(guard[vertical ? i : j], mu.at(i, j))) return false;
        return true;
    };
    auto edge = [&](int x, int y) { return adjacent(m, x, y); };
    auto cover_e = [&](bool with_edge) {
        return all_cells([&](int g, int c) { return covers(m, g, c) && edge(g, c) == with_edge; });
    };
    auto apart_e = all_cells([&](int g, int c) { return !comparable(m, g, c) && edge(g, c); });
    if (cover_e(false)) return vertical ? StarType::v_cover : StarType::h_cover;
    if (cover_e(true)) return vertical ? StarType::v_cover_edge : StarType::h_cover_edge;
    if (apart_e) return vertical ? StarType::v_edge : StarType::h_edge;
    throw Error(ErrorKind::pattern_not_matched, std::string("guard and mesh form no ") +
                                                    (vertical ? "vertical" : "horizontal") + " star");
}

// ---------------------------------------------------------------- files

namespace {

struct RawLabels {
    int rows = 0, cols = 0, length = -1, type = 0;
    bool has_order = false;
    std::vector<std::string> guard_a, guard_b;
    std::vector<std::vector<std::string>> meshes;
    int line_a = 0, line_b = 0;
    std::vector<int> mesh_lines;
};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + msg);
}

int to_int(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        parse_fail(line, "expected an integer, got '" + tok + "'");
    }
}

// Reads label lines until a `tows` header (returned index) or end of input.
std::size_t read_labels(const std::vector<io::Line>& lines, std::size_t pos, RawLabels& raw, bool allow_type) {
    for (; pos < lines.size(); ++pos) {
        const auto& ln = lines[pos];
        const auto& t = ln.tokens;
        const std::string& key = t[0];
        if (key == "tows") break;
        if (key == "type" && allow_type) {
            if (t.size() != 2) parse_fail(ln.number, "type takes one value");
            raw.type = to_int(t[1], ln.number);
        } else if (key == "order") {
            if (t.size() != 3) parse_fail(ln.number, "order takes |I| and |J|");
            raw.rows = to_int(t[1], ln.number);
            raw.cols = to_int(t[2], ln.number);
            raw.has_order = true;
        } else if (key == "length") {
            if (t.size() != 2) parse_fail(ln.number, "length takes one value");
            raw.length = to_int(t[1], ln.number);
        } else if (key == "guardA" || key == "guardB") {
            auto& dst = key == "guardA" ? raw.guard_a : raw.guard_b;
            (key == "guardA" ? raw.line_a : raw.line_b) = ln.number;
            if (t.size() == 2 && t[1] == "-") continue;
            dst.assign(t.begin() + 1, t.end());
            if (dst.empty()) parse_fail(ln.number, key + " needs elements or '-'");
        } else if (key == "mesh") {
            if (t.size() < 2) parse_fail(ln.number, "mesh needs an index");
            int s = to_int(t[1], ln.number);
            if (s != static_cast<int>(raw.meshes.size()) + 1)
                parse_fail(ln.number, "meshes must be numbered 1, 2, ... in order");
            raw.meshes.emplace_back(t.begin() + 2, t.end());
            raw.mesh_lines.push_back(ln.number);
        } else {
            parse_fail(ln.number, "unknown label line '" + key + "'");
        }
    }
    if (!raw.has_order) parse_fail(lines.empty() ? 0 : lines.front().number, "missing order line");
    if (raw.meshes.empty()) parse_fail(lines.empty() ? 0 : lines.front().number, "no mesh lines");
    if (raw.length >= 0 && raw.length != static_cast<int>(raw.meshes.size()))
        parse_fail(lines.front().number, "declared length differs from the number of meshes");
    return pos;
}

GuardedSequence resolve(const RawLabels& raw, const Structure& m) {
    auto lookup = [&](const std::string& name, int line) {
        auto id = m.find(name);
        if (!id) parse_fail(line, "unknown element '" + name + "'");
        return *id;
    };
    GuardedSequence seq;
    if (!raw.guard_a.empty() && static_cast<int>(raw.guard_a.size()) != raw.rows)
        parse_fail(raw.line_a, "guardA must list |I| elements");
    if (!raw.guard_b.empty() && static_cast<int>(raw.guard_b.size()) != raw.cols)
        parse_fail(raw.line_b, "guardB must list |J| elements");
    for (const auto& n : raw.guard_a) seq.guard_a.push_back(lookup(n, raw.line_a));
    for (const auto& n : raw.guard_b) seq.guard_b.push_back(lookup(n, raw.line_b));
    for (std::size_t s = 0; s < raw.meshes.size(); ++s) {
        const auto& names = raw.meshes[s];
        if (static_cast<int>(names.size()) != raw.rows * raw.cols)
            parse_fail(raw.mesh_lines[s], "mesh must list |I|*|J| elements row by row");
        Mesh mu(raw.rows, raw.cols);
        for (std::size_t c = 0; c < names.size(); ++c) mu.cells[c] = lookup(names[c], raw.mesh_lines[s]);
        try {
            check_mesh(m, mu);
        } catch (const Error& e) {
            parse_fail(raw.mesh_lines[s], e.what());
        }
        seq.meshes.push_back(std::move(mu));
    }
    return seq;
}

void write_labels(std::ostream& out, const Structure& m, const GuardedSequence& seq) {
    out << "order " << seq.rows() << ' ' << seq.cols() << '\n';
    out << "length " << seq.length() << '\n';
    auto guard = [&](const char* key, const std::vector<int>& g) {
        out << key;
        if (g.empty()) out << " -";
        for (int x : g) out << ' ' << m.names[x];
        out << '\n';
    };
    guard("guardA", seq.guard_a);
    guard("guardB", seq.guard_b);
    for (int s = 0; s < seq.length(); ++s) {
        out << "mesh " << s + 1;
        for (int x : seq.meshes[s].cells) out << ' ' << m.names[x];
        out << '\n';
    }
}

void expect(const std::vector<io::Line>& lines, const std::string& header) {
    if (lines.empty() || lines[0].tokens[0] != header)
        parse_fail(lines.empty() ? 1 : lines[0].number, "expected '" + header + " 1' header");
    if (lines[0].tokens.size() != 2 || lines[0].tokens[1] != "1")
        parse_fail(lines[0].number, "unsupported " + header + " version");
}

}  // namespace

LabelledTwist parse_twist(const std::string& text) {
    auto lines = io::tokenize(text);
    expect(lines, "twist");
    RawLabels raw;
    std::size_t pos = read_labels(lines, 1, raw, false);
    if (pos == lines.size()) parse_fail(lines.back().number, "missing embedded tows block");
    std::vector<io::Line> block(lines.begin() + static_cast<std::ptrdiff_t>(pos), lines.end());
    LabelledTwist t;
    t.structure = io::parse_tows_lines(block);
    t.seq = resolve(raw, t.structure);
    return t;
}

std::string write_twist(const LabelledTwist& t) {
    std::ostringstream out;
    out << "twist 1\n";
    write_labels(out, t.structure, t.seq);
    out << io::write_tows(t.structure);
    return out.str();
}

Core parse_core(const std::string& text) {
    auto lines = io::tokenize(text);
    expect(lines, "core");
    RawLabels raw;
    std::size_t pos = read_labels(lines, 1, raw, true);
    if (raw.type == 0) parse_fail(lines[0].number, "missing type line");
    if (pos == lines.size()) parse_fail(lines.back().number, "missing embedded tows block");
    std::vector<io::Line> block(lines.begin() + static_cast<std::ptrdiff_t>(pos), lines.end());
    Core c;
    c.twist.structure = io::parse_tows_lines(block);
    c.twist.seq = resolve(raw, c.twist.structure);
    c.type = raw.type;
    c.line_guard_a = raw.line_a;
    c.line_guard_b = raw.line_b;
    c.line_mesh = raw.mesh_lines;
    return c;
}

std::string write_core(const Core& c) {
    std::ostringstream out;
    out << "core 1\ntype " << c.type << '\n';
    write_labels(out, c.twist.structure, c.twist.seq);
    out << io::write_tows(c.twist.structure);
    return out.str();
}

std::string write_labels(const Structure& m, const GuardedSequence& seq) {
    std::ostringstream out;
    out << "labels 1\n";
    write_labels(out, m, seq);
    return out.str();
}

GuardedSequence parse_labels(const std::string& text, const Structure& m) {
    auto lines = io::tokenize(text);
    expect(lines, "labels");
    RawLabels raw;
    std::size_t pos = read_labels(lines, 1, raw, false);
    if (pos != lines.size()) parse_fail(lines[pos].number, "labels files carry no structure");
    return resolve(raw, m);
}

// ---------------------------------------------------------------- builder

namespace {

enum class Part { root, guard_a, mesh, guard_b };

struct Slot {
    Part part = Part::root;
    int s = 0, i = 0, j = 0;
};

bool has_i(Part p) { return p == Part::guard_a || p == Part::mesh; }
bool has_j(Part p) { return p == Part::mesh || p == Part::guard_b; }

// Core element for the representative of (x, y) under index comparison.
std::pair<int, int> representative(const GuardedSequence& core, int root, const Slot& x, const Slot& y) {
    auto reduce = [](bool hx, bool hy, int a, int b, int& ra, int& rb) {
        ra = rb = 0;
        if (hx && hy) {
            if (a < b) rb = 1;
            else if (a > b) ra = 1;
        }
    };
    int xi, yi, xj, yj;
    reduce(has_i(x.part), has_i(y.part), x.i, y.i, xi, yi);
    reduce(has_j(x.part), has_j(y.part), x.j, y.j, xj, yj);
    auto pick = [&](const Slot& sl, int ri, int rj) {
        switch (sl.part) {
            case Part::root: return root;
            case Part::guard_a: return core.guard_a[ri];
            case Part::guard_b: return core.guard_b[rj];
            case Part::mesh: return core.meshes[sl.s].at(ri, rj);
        }
        return root;
    };
    return {pick(x, xi, xj), pick(y, yi, yj)};
}

void check_core_shape(const Core& c) {
    const auto& seq = c.twist.seq;
    if (seq.meshes.empty()) throw Error(ErrorKind::invalid_core, "core has no meshes");
    if (seq.rows() != 2 || seq.cols() != 2) throw Error(ErrorKind::invalid_core, "core meshes must be 2x2");
    if (!seq.guard_a.empty() && seq.guard_a.size() != 2) throw Error(ErrorKind::invalid_core, "guard A needs 2 elements");
    if (!seq.guard_b.empty() && seq.guard_b.size() != 2) throw Error(ErrorKind::invalid_core, "guard B needs 2 elements");
    for (const auto& s : c.twist.structure.sig.symbols)
        if (s.arity > 2) throw Error(ErrorKind::invalid_core, "cores use unary and binary symbols only");
}

}  // namespace

LabelledTwist build_twist(const Core& c, int n) {
    check_core_shape(c);
    if (n < 1) throw Error(ErrorKind::invalid_spec, "twist order must be positive");
    const Structure& base = c.twist.structure;
    const GuardedSequence& cs = c.twist.seq;
    const int h = cs.length();

    LabelledTwist out;
    Structure& m = out.structure;
    m.set_signature(base.sig);
    std::vector<Slot> slots;
    auto add = [&](const std::string& name, Slot sl) {
        int id = m.add_element(name);
        slots.push_back(sl);
        return id;
    };
    m.root = add(base.names[base.root], {Part::root});
    const bool with_a = !cs.guard_a.empty(), with_b = !cs.guard_b.empty();
    if (with_a)
        for (int i = 0; i < n; ++i) out.seq.guard_a.push_back(add("a" + std::to_string(i + 1), {Part::guard_a, 0, i, 0}));
    for (int s = 0; s < h; ++s) {
        Mesh mu(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                mu.at(i, j) = add("m" + std::to_string(s + 1) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                                  {Part::mesh, s, i, j});
        out.seq.meshes.push_back(std::move(mu));
    }
    if (with_b)
        for (int j = 0; j < n; ++j) out.seq.guard_b.push_back(add("b" + std::to_string(j + 1), {Part::guard_b, 0, 0, j}));
    if (m.index.size() != static_cast<std::size_t>(m.size()))
        throw Error(ErrorKind::invalid_core, "root name collides with generated names");

    const int size = m.size();
    std::vector<std::vector<char>> less(size, std::vector<char>(size, 0));
    for (int x = 0; x < size; ++x)
        for (int y = 0; y < size; ++y) {
            if (x == y) continue;
            auto [x0, y0] = representative(cs, base.root, slots[x], slots[y]);
            if (x0 == y0) throw Error(ErrorKind::invalid_core, "representatives collapse");
            less[x][y] = base.strictly_below(x0, y0);
            for (std::size_t s = 0; s < base.sig.symbols.size(); ++s) {
                const Symbol& sym = base.sig.symbols[s];
                if (sym.arity != 2) continue;
                if (sym.symmetric && x > y) continue;
                if (base.has_tuple(static_cast<int>(s), {x0, y0})) m.add_tuple(static_cast<int>(s), {x, y});
            }
        }
    for (int x = 0; x < size; ++x) {
        auto [x0, unused] = representative(cs, base.root, slots[x], slots[x]);
        (void)unused;
        for (std::size_t s = 0; s < base.sig.symbols.size(); ++s)
            if (base.sig.symbols[s].arity == 1 && base.has_tuple(static_cast<int>(s), {x0}))
                m.add_tuple(static_cast<int>(s), {x});
        for (std::size_t s = 0; s < base.sig.symbols.size(); ++s)
            if (base.sig.symbols[s].arity == 2 && !base.sig.symbols[s].symmetric &&
                base.has_tuple(static_cast<int>(s), {x0, x0}))
                m.add_tuple(static_cast<int>(s), {x, x});
    }
    // Parents: the down-set of every element must be the down-set of its largest member plus it.
    std::vector<int> below_count(size, 0);
    for (int x = 0; x < size; ++x)
        for (int y = 0; y < size; ++y) below_count[y] += less[x][y];
    for (int y = 0; y < size; ++y) {
        if (y == m.root) {
            if (below_count[y] != 0) throw Error(ErrorKind::invalid_core, "root is not minimum");
            continue;
        }
        int par = -1;
        for (int x = 0; x < size; ++x)
            if (less[x][y] && (par < 0 || below_count[x] > below_count[par])) par = x;
        if (par < 0 || !less[m.root][y]) throw Error(ErrorKind::invalid_core, "root is not below " + m.names[y]);
        if (below_count[par] + 1 != below_count[y])
            throw Error(ErrorKind::invalid_core, "copied order is not a tree-order at " + m.names[y]);
        for (int x = 0; x < size; ++x)
            if (less[x][par] && !less[x][y])
                throw Error(ErrorKind::invalid_core, "copied order is not transitive at " + m.names[y]);
        m.parent[y] = par;
    }
    m.validate();
    return out;
}

Core core_of(const LabelledTwist& t) {
    const auto& seq = t.seq;
    if (seq.meshes.empty()) throw Error(ErrorKind::unlabeled_input, "core extraction needs layer labels");
    if (seq.rows() < 2 || seq.cols() < 2) throw Error(ErrorKind::invalid_spec, "core extraction needs order at least 2");
    const Structure& m = t.structure;
    std::vector<int> keep{m.root};
    for (std::size_t i = 0; i < seq.guard_a.size() && i < 2; ++i) keep.push_back(seq.guard_a[i]);
    for (const auto& mu : seq.meshes)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) keep.push_back(mu.at(i, j));
    for (std::size_t j = 0; j < seq.guard_b.size() && j < 2; ++j) keep.push_back(seq.guard_b[j]);
    Core c;
    c.twist.structure = induced(m, keep);
    const Structure& sub = c.twist.structure;
    auto map = [&](int x) { return sub.id(m.names[x]); };
    for (std::size_t i = 0; i < seq.guard_a.size() && i < 2; ++i) c.twist.seq.guard_a.push_back(map(seq.guard_a[i]));
    for (const auto& mu : seq.meshes) {
        Mesh small(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) small.at(i, j) = map(mu.at(i, j));
        c.twist.seq.meshes.push_back(std::move(small));
    }
    for (std::size_t j = 0; j < seq.guard_b.size() && j < 2; ++j) c.twist.seq.guard_b.push_back(map(seq.guard_b[j]));
    c.type = preclean_type(c.twist.structure, c.twist.seq);
    return c;
}

// ---------------------------------------------------------------- core validation

std::string CoreReport::text() const {
    std::ostringstream out;
    for (const auto& v : violations) out << "violation " << v << '\n';
    out << "core " << (valid() ? "valid" : "invalid") << '\n';
    return out.str();
}

CoreReport validate_core(const Core& c) {
    CoreReport rep;
    auto bad = [&](int line, const std::string& msg) {
        rep.violations.push_back(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    };
    const Structure& m = c.twist.structure;
    const GuardedSequence& seq = c.twist.seq;
    const int h = seq.length();
    auto mesh_line = [&](int s) { return s < static_cast<int>(c.line_mesh.size()) ? c.line_mesh[s] : 0; };
    try {
        check_core_shape(c);
    } catch (const Error& e) {
        bad(0, e.what());
        return rep;
    }
    if (!m.is_graph()) bad(0, "a core is a tree-ordered graph");
    if (c.type < 1 || c.type > 3) {
        bad(0, "type must be 1, 2 or 3");
        return rep;
    }
    const bool guarded = !seq.guard_a.empty() || !seq.guard_b.empty();
    if (c.type == 1 && (seq.guard_a.empty() || seq.guard_b.empty())) bad(c.line_guard_a, "type 1 needs both guards");
    if (c.type != 1 && guarded) bad(c.line_guard_a, "types 2 and 3 have empty guards");
    if (c.type != 1 && h < 2) bad(mesh_line(0), "types 2 and 3 need length at least 2");
    if (!rep.valid()) return rep;

    // Layers in sequence order, with their source lines.
    struct Layer {
        std::string name;
        std::vector<int> cells;
        int line;
    };
    std::vector<Layer> layers;
    if (c.type == 1) layers.push_back({"A", seq.guard_a, c.line_guard_a});
    for (int s = 0; s < h; ++s) layers.push_back({"mu" + std::to_string(s + 1), seq.meshes[s].cells, mesh_line(s)});
    if (c.type == 1) layers.push_back({"B", seq.guard_b, c.line_guard_b});

    std::vector<int> owner(m.size(), -1);
    for (std::size_t l = 0; l < layers.size(); ++l)
        for (int x : layers[l].cells) {
            if (x == m.root) bad(layers[l].line, "the root carries a layer label");
            else if (owner[x] >= 0) bad(layers[l].line, m.names[x] + " is labelled twice");
            else owner[x] = static_cast<int>(l);
        }
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root && owner[x] < 0) bad(0, m.names[x] + " carries no layer label");
    if (!rep.valid()) return rep;

    const int first_mesh = c.type == 1 ? 1 : 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        std::string w;
        if (!independent_set(m, L.cells, &w)) bad(L.line, L.name + " is not independent: " + w);
        if (!homogeneous_sets(m, {m.root}, L.cells)) bad(L.line, L.name + " is split by the root neighbourhood");
        const int s = static_cast<int>(l) - first_mesh;  // mesh index, or out of range for guards
        const bool end_mesh = s == 0 || s == h - 1;
        if (c.type == 1 || !end_mesh) {
            if (!antichain_set(m, L.cells, &w)) bad(L.line, L.name + " is not an antichain: " + w);
        }
    }
    if (c.type == 2) {
        if (read_pattern(m, seq.meshes[0]) != OrderPattern::cols_j) bad(mesh_line(0), "mu1 must be ordered as <_J");
        if (read_pattern(m, seq.meshes[h - 1]) != OrderPattern::rows_i)
            bad(mesh_line(h - 1), "mu" + std::to_string(h) + " must be ordered as <_I");
    }
    if (c.type == 3) {
        if (read_pattern(m, seq.meshes[0]) != OrderPattern::lex_ij) bad(mesh_line(0), "mu1 must be ordered as <_{I,J}");
        if (!is_antilexicographic(read_pattern(m, seq.meshes[h - 1])))
            bad(mesh_line(h - 1), "mu" + std::to_string(h) + " must be anti-lexicographic");
    }

    // Non-consecutive layers are incomparable, up to the type-3 exceptions.
    for (std::size_t p = 0; p < layers.size(); ++p)
        for (std::size_t q = 0; q < layers.size(); ++q) {
            if (p == q || (p + 1 == q) || (q + 1 == p)) continue;
            for (int x : layers[p].cells)
                for (int y : layers[q].cells) {
                    if (!m.strictly_below(x, y)) continue;
                    const int sp = static_cast<int>(p) - first_mesh, sq = static_cast<int>(q) - first_mesh;
                    bool allowed = c.type == 3 && ((sp == 0 && sq > 0) || (sp == h - 1 && sq > 0 && sq < h - 1));
                    if (!allowed)
                        bad(layers[q].line, layers[p].name + " vertex " + m.names[x] + " is below " + layers[q].name +
                                                " vertex " + m.names[y]);
                }
        }

    // Consecutive pairs.
    auto plain = [](MatchType t) {
        return t == MatchType::forward || t == MatchType::backward || t == MatchType::forward_edge ||
               t == MatchType::backward_edge || t == MatchType::edge;
    };
    auto no_edges_between = [&](const Mesh& a, const Mesh& b) {
        for (int x : a.cells)
            for (int y : b.cells)
                if (adjacent(m, x, y)) return false;
        return true;
    };
    // below(x in a, y in b) exactly when want(i, j, i', j').
    auto order_fits = [&](const Mesh& a, const Mesh& b, const std::function<bool(int, int, int, int)>& want) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int i2 = 0; i2 < 2; ++i2)
                    for (int j2 = 0; j2 < 2; ++j2)
                        if (m.strictly_below(a.at(i, j), b.at(i2, j2)) != want(i, j, i2, j2)) return false;
        return true;
    };
    auto match_of = [&](int s) -> std::optional<MatchType> {
        try {
            return matching_type(m, seq.meshes[s], seq.meshes[s + 1]);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    if (c.type == 1) {
        try {
            star_type(m, seq.guard_a, seq.meshes[0], true);
        } catch (const Error& e) {
            bad(c.line_guard_a, std::string("(A,mu1): ") + e.what());
        }
        try {
            star_type(m, seq.guard_b, seq.meshes[h - 1], false);
        } catch (const Error& e) {
            bad(c.line_guard_b, "(B,mu" + std::to_string(h) + "): " + e.what());
        }
    }
    for (int s = 0; s + 1 < h; ++s) {
        auto mt = match_of(s);
        const std::string pair = "(mu" + std::to_string(s + 1) + ",mu" + std::to_string(s + 2) + ")";
        const bool first = s == 0, last = s + 2 == h;
        if (c.type == 1 || (!first && !last)) {
            if (!mt || !plain(*mt)) bad(mesh_line(s + 1), pair + " is not one of the five plain matching types");
            continue;
        }
        if (c.type == 2) {
            if (!mt || *mt != MatchType::edge) bad(mesh_line(s + 1), pair + " must be an incomparable edge matching");
            continue;
        }
        const Mesh& a = seq.meshes[s];
        const Mesh& b = seq.meshes[s + 1];
        if (first) {
            bool ok = mt && (*mt == MatchType::edge || *mt == MatchType::edge_low || *mt == MatchType::edge_chain);
            ok = ok || (no_edges_between(a, b) &&
                        order_fits(a, b, [](int i, int, int i2, int) { return i2 >= i; }) &&
                        order_fits(b, a, [](int, int, int, int) { return false; }));
            if (!ok) bad(mesh_line(s + 1), pair + " is neither an edge matching nor simply vertical");
        }
        if (last) {
            bool ok = mt && (*mt == MatchType::edge || *mt == MatchType::edge_chain || *mt == MatchType::edge_high);
            auto up = [](int, int j, int, int j2) { return j2 >= j; };
            auto down = [](int, int j, int, int j2) { return j2 <= j; };
            ok = ok || (no_edges_between(a, b) && (order_fits(b, a, up) || order_fits(b, a, down)) &&
                        order_fits(a, b, [](int, int, int, int) { return false; }));
            if (!ok) bad(mesh_line(s + 1), pair + " is neither an edge matching nor simply horizontal");
        }
    }
    if (!rep.valid()) return rep;

    // Regularity: the order-2 extrapolation reproduces the core exactly.
    try {
        LabelledTwist two = build_twist(c, 2);
        std::vector<int> to_two(m.size(), -1);
        to_two[m.root] = two.structure.root;
        for (std::size_t i = 0; i < seq.guard_a.size(); ++i) to_two[seq.guard_a[i]] = two.seq.guard_a[i];
        for (std::size_t j = 0; j < seq.guard_b.size(); ++j) to_two[seq.guard_b[j]] = two.seq.guard_b[j];
        for (int s = 0; s < h; ++s)
            for (std::size_t k = 0; k < 4; ++k) to_two[seq.meshes[s].cells[k]] = two.seq.meshes[s].cells[k];
        for (int x = 0; x < m.size(); ++x)
            for (int y = 0; y < m.size(); ++y) {
                if (x == y) continue;
                if (pair_type(m, x, y) != pair_type(two.structure, to_two[x], to_two[y])) {
                    bad(0, "core is not regular at the pair " + m.names[x] + ", " + m.names[y]);
                    return rep;
                }
            }
    } catch (const Error& e) {
        bad(0, e.what());
        return rep;
    }

    // Authoritative check: the order-4 twist carries a clean twister of the declared type.
    try {
        LabelledTwist four = build_twist(c, 4);
        CleanReport cr = validate_clean(four.structure, four.seq);
        if (cr.preclean_type != c.type)
            bad(0, "order-4 twist has pre-clean type " + std::to_string(cr.preclean_type) + ", declared " +
                       std::to_string(c.type));
        for (const auto& f : cr.failures) bad(0, "order-4 twist: " + f);
    } catch (const Error& e) {
        bad(0, std::string("order-4 twist: ") + e.what());
    }
    return rep;
}

// ---------------------------------------------------------------- search

namespace {

struct SearchLayer {
    Part part;
    int s;  // mesh index for meshes
};

class TwistSearch {
public:
    TwistSearch(const Structure& m, int type, int h, int order) : m_(m), type_(type), h_(h), k_(order) {
        if (type == 1) layers_.push_back({Part::guard_a, 0});
        for (int s = 0; s < h; ++s) layers_.push_back({Part::mesh, s});
        if (type == 1) layers_.push_back({Part::guard_b, 0});
        // Interleave by cell so equal-index constraints bite early.
        for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j)
                for (int l = 0; l < static_cast<int>(layers_.size()); ++l) {
                    Part p = layers_[l].part;
                    if (p == Part::mesh) slots_.push_back({l, i, j});
                    else if (p == Part::guard_a && j == 0) slots_.push_back({l, i, 0});
                    else if (p == Part::guard_b && i == 0) slots_.push_back({l, 0, j});
                }
        assign_.assign(slots_.size(), -1);
        const int n = m.size();
        used_.assign(n, false);
        children_ = m.children();
        neighbours_.assign(n, {});
        type_id_.assign(static_cast<std::size_t>(n) * n, -1);
        below_.assign(static_cast<std::size_t>(n) * n, false);
        adj_.assign(static_cast<std::size_t>(n) * n, false);
        std::map<AtomicType, int> ids;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                const std::size_t k = static_cast<std::size_t>(x) * n + y;
                type_id_[k] = ids.emplace(pair_type(m, x, y), static_cast<int>(ids.size())).first->second;
                below_[k] = m.strictly_below(x, y);
                adj_[k] = adjacent(m, x, y);
                if (adj_[k]) neighbours_[x].push_back(y);
            }
        const std::size_t nl = layers_.size();
        table_.assign(nl * nl * 16, -1);
        uniform_.assign(nl * nl, -1);
        diag_.assign(nl * nl, -1);
        off_.assign(nl * nl, -1);
    }

    std::optional<GuardedSequence> run() {
        if (go(0)) return sequence();
        return std::nullopt;
    }

private:
    struct SlotRef {
        int layer, i, j;
    };

    const Structure& m_;
    int type_, h_, k_;
    std::vector<SearchLayer> layers_;
    std::vector<SlotRef> slots_;
    std::vector<int> assign_;
    std::vector<bool> used_;
    std::vector<std::vector<int>> children_, neighbours_;
    std::vector<int> type_id_;
    std::vector<bool> below_, adj_;
    // Fixed atomic-type ids, -1 while open; `undo_` lists cells set since each choice point.
    std::vector<int> table_;    // (layer, layer, otp_i, otp_j), 2 meaning no shared index
    std::vector<int> uniform_;  // homogeneous layer pairs
    std::vector<int> diag_;     // matching pairs, diagonal value
    std::vector<int> off_;      // matching pairs, off-diagonal value
    std::vector<int*> undo_;

    int tid(int x, int y) const { return type_id_[static_cast<std::size_t>(x) * m_.size() + y]; }
    bool lt(int x, int y) const { return below_[static_cast<std::size_t>(x) * m_.size() + y]; }
    bool adj(int x, int y) const { return adj_[static_cast<std::size_t>(x) * m_.size() + y]; }
    int lpair(int a, int b) const { return a * static_cast<int>(layers_.size()) + b; }

    // Binds cell to v; false on conflict.
    bool bind(int& cell, int v) {
        if (cell == -1) {
            cell = v;
            undo_.push_back(&cell);
            return true;
        }
        return cell == v;
    }

    bool has_i_layer(int l) const { return has_i(layers_[l].part); }
    bool has_j_layer(int l) const { return has_j(layers_[l].part); }

    int mesh_of(int l) const { return layers_[l].part == Part::mesh ? layers_[l].s : -1; }

    // Relationship class of an ordered layer pair.
    enum class Rel { same, matching, loose, homogeneous };
    Rel rel(int a, int b) const {
        if (a == b) return Rel::same;
        if (std::abs(a - b) > 1) return Rel::homogeneous;
        int lo = std::min(a, b);
        int sa = mesh_of(lo), sb = mesh_of(lo + 1);
        if (type_ == 3 && ((sa == 0 && sb == 1) || (sa == h_ - 2 && sb == h_ - 1))) return Rel::loose;
        return Rel::matching;
    }

    bool diagonal(int la, const SlotRef& a, int lb, const SlotRef& b) const {
        bool di = !(has_i_layer(la) && has_i_layer(lb)) || a.i == b.i;
        bool dj = !(has_j_layer(la) && has_j_layer(lb)) || a.j == b.j;
        return di && dj;
    }

    OrderPattern end_pattern(int l) const {
        int s = mesh_of(l);
        if (s < 0) return OrderPattern::antichain;
        if (type_ == 2 && s == 0) return OrderPattern::cols_j;
        if (type_ == 2 && s == h_ - 1) return OrderPattern::rows_i;
        if (type_ == 3 && s == 0) return OrderPattern::lex_ij;
        if (type_ == 3 && s == h_ - 1) return OrderPattern::other;  // any anti-lexicographic order
        return OrderPattern::antichain;
    }

    bool consistent(int idx, int e) {
        const SlotRef& a = slots_[idx];
        for (int t = 0; t < idx; ++t)
            if (slots_[t].layer == a.layer) {
                if (adj(m_.root, e) != adj(m_.root, assign_[t])) return false;
                break;
            }
        for (int t = 0; t < idx; ++t) {
            const SlotRef& b = slots_[t];
            const int f = assign_[t];
            int ki = has_i_layer(a.layer) && has_i_layer(b.layer) ? cmp3(a.i, b.i) : 2;
            int kj = has_j_layer(a.layer) && has_j_layer(b.layer) ? cmp3(a.j, b.j) : 2;
            const int ab = tid(e, f), ba = tid(f, e);
            auto cell = [&](int la, int lb, int i, int j) -> int& {
                return table_[static_cast<std::size_t>(lpair(la, lb)) * 16 + (i + 1) * 4 + (j + 1)];
            };
            if (!bind(cell(a.layer, b.layer, ki, kj), ab)) return false;
            if (!bind(cell(b.layer, a.layer, ki == 2 ? 2 : -ki, kj == 2 ? 2 : -kj), ba)) return false;
            const int lo = std::min(a.layer, b.layer), hi = std::max(a.layer, b.layer);
            const int canon = a.layer <= b.layer ? ab : ba;
            switch (rel(a.layer, b.layer)) {
                case Rel::same: {
                    if (adj(e, f)) return false;
                    OrderPattern p = end_pattern(a.layer);
                    if (p == OrderPattern::other) {
                        if (!lt(e, f) && !lt(f, e)) return false;
                    } else if (lt(e, f) != pattern_below(p, ki == 2 ? 0 : ki, kj == 2 ? 0 : kj) ||
                               lt(f, e) != pattern_below(p, ki == 2 ? 0 : -ki, kj == 2 ? 0 : -kj)) {
                        return false;
                    }
                    break;
                }
                case Rel::homogeneous:
                    if (!bind(uniform_[lpair(lo, hi)], canon)) return false;
                    break;
                case Rel::matching: {
                    auto& bucket = diagonal(a.layer, a, b.layer, b) ? diag_ : off_;
                    if (!bind(bucket[lpair(lo, hi)], canon)) return false;
                    const int d = diag_[lpair(lo, hi)], o = off_[lpair(lo, hi)];
                    if (d >= 0 && o >= 0 && d == o) return false;
                    break;
                }
                case Rel::loose: break;
            }
        }
        return true;
    }

    // Order-2 twisters are cores: every required matching or star pair has a cover or an
    // edge on its diagonal, so a placed diagonal partner bounds the candidates.
    std::vector<int> candidates(int idx) const {
        const SlotRef& a = slots_[idx];
        if (k_ == 2)
            for (int t = 0; t < idx; ++t) {
                const SlotRef& b = slots_[t];
                if (std::abs(a.layer - b.layer) != 1 || rel(a.layer, b.layer) != Rel::matching) continue;
                if (!diagonal(a.layer, a, b.layer, b)) continue;
                const int f = assign_[t];
                std::set<int> near(neighbours_[f].begin(), neighbours_[f].end());
                near.insert(children_[f].begin(), children_[f].end());
                if (m_.parent[f] >= 0) near.insert(m_.parent[f]);
                return {near.begin(), near.end()};
            }
        std::vector<int> all(m_.size());
        for (int e = 0; e < m_.size(); ++e) all[e] = e;
        return all;
    }

    bool go(int idx) {
        if (idx == static_cast<int>(slots_.size())) return accept();
        for (int e : candidates(idx)) {
            if (e == m_.root || used_[e]) continue;
            const std::size_t mark = undo_.size();
            if (consistent(idx, e)) {
                assign_[idx] = e;
                used_[e] = true;
                if (go(idx + 1)) return true;
                used_[e] = false;
                assign_[idx] = -1;
            }
            while (undo_.size() > mark) {
                *undo_.back() = -1;
                undo_.pop_back();
            }
        }
        return false;
    }

    GuardedSequence sequence() const {
        GuardedSequence seq;
        if (type_ == 1) {
            seq.guard_a.assign(k_, -1);
            seq.guard_b.assign(k_, -1);
        }
        for (int s = 0; s < h_; ++s) seq.meshes.emplace_back(k_, k_);
        for (std::size_t t = 0; t < slots_.size(); ++t) {
            const SlotRef& r = slots_[t];
            const SearchLayer& L = layers_[r.layer];
            if (L.part == Part::guard_a) seq.guard_a[r.i] = assign_[t];
            else if (L.part == Part::guard_b) seq.guard_b[r.j] = assign_[t];
            else seq.meshes[L.s].at(r.i, r.j) = assign_[t];
        }
        return seq;
    }

    bool accept() const {
        GuardedSequence seq = sequence();
        if (k_ == 2) {
            LabelledTwist lt{m_, seq};
            Core c = core_of(lt);
            c.type = type_;
            return validate_core(c).valid();
        }
        try {
            CleanReport cr = validate_clean(m_, seq);
            return cr.clean && cr.preclean_type == type_;
        } catch (const Error&) {
            return false;
        }
    }
};

}  // namespace

std::optional<GuardedSequence> find_twist(const Structure& m, int max_len, int order, int max_size) {
    const int bound = max_size > 0 ? max_size : size_limit(14);
    if (m.size() > bound)
        throw Error(ErrorKind::size_bound_exceeded,
                    "find_twist: " + std::to_string(m.size()) + " elements exceed " + std::to_string(bound));
    if (order < 2) throw Error(ErrorKind::invalid_spec, "twister order must be at least 2");
    if (!m.is_graph()) throw Error(ErrorKind::signature_mismatch, "find_twist needs a tree-ordered graph");
    for (int h = max_len; h >= 1; --h)
        for (int type = 1; type <= 3; ++type) {
            if (type != 1 && h < 2) continue;
            const int needed = h * order * order + (type == 1 ? 2 * order : 0);
            if (needed > m.size() - 1) continue;
            TwistSearch search(m, type, h, order);
            if (auto seq = search.run()) return seq;
        }
    return std::nullopt;
}

}  // namespace tows::twists
