#include "tows/matroid.hpp"

#include <algorithm>
#include <sstream>

namespace tows::matroid {

namespace {

std::vector<int> cover_indices(const Structure& m) {
    std::vector<int> idx(m.size(), -1);
    int next = 0;
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) idx[x] = next++;
    return idx;
}

// Covers on the tree path between u and v, as a vector over the cover enumeration.
Gf2Vector path_vector(const Structure& m, const std::vector<int>& idx, int u, int v) {
    Gf2Vector out(static_cast<std::size_t>(m.size() - 1));
    for (int x = u; x != m.root; x = m.parent[x]) out.flip(idx[x]);
    for (int x = v; x != m.root; x = m.parent[x]) out.flip(idx[x]);
    return out;
}

int highest_bit(const Gf2Vector& v) {
    for (std::size_t i = v.size(); i-- > 0;)
        if (v.test(i)) return static_cast<int>(i);
    return -1;
}

// Reduces `w` against pivots; returns the residue.
Gf2Vector reduce(Gf2Vector w, const std::vector<std::pair<int, Gf2Vector>>& basis) {
    while (true) {
        int h = highest_bit(w);
        if (h < 0) return w;
        auto it = std::find_if(basis.begin(), basis.end(), [h](const auto& b) { return b.first == h; });
        if (it == basis.end()) return w;
        w ^= it->second;
    }
}

std::string tuple_label(const Structure& m, std::size_t s, int i) {
    return m.sig.symbols[s].name + ":" + std::to_string(i);
}

}  // namespace

Flattening flatten(const Structure& m) {
    Flattening f;
    f.cover_index = cover_indices(m);
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) f.covers.push_back(x);
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        int i = 0;
        for (const Tuple& t : m.rels[s]) {
            Hyperedge h;
            h.label = tuple_label(m, s, i++);
            h.support = t;
            std::sort(h.support.begin(), h.support.end());
            h.support.erase(std::unique(h.support.begin(), h.support.end()), h.support.end());
            f.hyperedges.push_back(std::move(h));
        }
    }
    return f;
}

Gf2Vector fundamental_cycle(const Structure& m, int u, int v) {
    if (u < 0 || v < 0 || u >= m.size() || v >= m.size())
        throw Error(ErrorKind::element_not_found, "fundamental cycle endpoint");
    if (m.parent[u] == v || m.parent[v] == u)
        throw Error(ErrorKind::invalid_structure, "pair is a tree cover, not a non-tree edge");
    return path_vector(m, cover_indices(m), u, v);
}

Graph FundamentalGraph::as_graph() const {
    Graph g;
    for (const auto& y : part_y) g.add_vertex(y);
    for (const auto& z : part_z) g.add_vertex(z);
    const int ny = static_cast<int>(part_y.size());
    for (std::size_t z = 0; z < nbhd.size(); ++z)
        for (const auto& vec : nbhd[z])
            for (std::size_t y = 0; y < vec.size(); ++y)
                if (vec.test(y)) g.add_edge(static_cast<int>(y), ny + static_cast<int>(z));
    return g;
}

FundamentalGraph FundamentalGraph::without_y(int y) const {
    FundamentalGraph out;
    out.slots = slots;
    out.part_z = part_z;
    for (int i = 0; i < static_cast<int>(part_y.size()); ++i)
        if (i != y) out.part_y.push_back(part_y[i]);
    for (const auto& row : nbhd) {
        std::vector<Gf2Vector> nr;
        for (const auto& vec : row) {
            Gf2Vector v(out.part_y.size());
            int k = 0;
            for (int i = 0; i < static_cast<int>(vec.size()); ++i) {
                if (i == y) continue;
                v[k++] = vec[i];
            }
            nr.push_back(v);
        }
        out.nbhd.push_back(nr);
    }
    return out;
}

FundamentalGraph FundamentalGraph::without_z(int z) const {
    FundamentalGraph out = *this;
    out.part_z.erase(out.part_z.begin() + z);
    out.nbhd.erase(out.nbhd.begin() + z);
    return out;
}

FundamentalGraph lambda_graph(const Structure& m) {
    if (!m.is_graph()) throw Error(ErrorKind::signature_mismatch, "lambda_graph needs a TOWS graph");
    auto idx = cover_indices(m);
    FundamentalGraph f;
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) f.part_y.push_back("y:" + m.names[x]);
    int i = 0;
    for (const Tuple& t : m.rels[0]) {
        f.part_z.push_back("z:" + tuple_label(m, 0, i++));
        f.nbhd.push_back({path_vector(m, idx, t[0], t[1])});
    }
    return f;
}

FundamentalGraph lambda_general(const Structure& m) {
    auto idx = cover_indices(m);
    auto flat = flatten(m);
    FundamentalGraph f;
    f.slots = std::max(1, m.sig.max_arity() - 1);
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) f.part_y.push_back("y:" + m.names[x]);
    const std::size_t ny = f.part_y.size();
    for (const auto& h : flat.hyperedges) {
        f.part_z.push_back("z:" + h.label);
        std::vector<std::pair<int, Gf2Vector>> basis;
        for (std::size_t i = 1; i < h.support.size(); ++i) {
            Gf2Vector w = reduce(path_vector(m, idx, h.support[0], h.support[i]), basis);
            int p = highest_bit(w);
            if (p >= 0) basis.emplace_back(p, w);
        }
        std::vector<Gf2Vector> row(f.slots, Gf2Vector(ny));
        for (std::size_t s = 0; s < basis.size(); ++s) row[s] = basis[s].second;
        f.nbhd.push_back(std::move(row));
    }
    return f;
}

int gf2_rank(std::vector<Gf2Vector> vectors) {
    std::vector<std::pair<int, Gf2Vector>> basis;
    for (auto& v : vectors) {
        Gf2Vector w = reduce(v, basis);
        int p = highest_bit(w);
        if (p >= 0) basis.emplace_back(p, w);
    }
    return static_cast<int>(basis.size());
}

FundamentalGraph change_basis(const FundamentalGraph& f, const std::vector<Gf2Matrix>& matrices) {
    if (matrices.size() != f.nbhd.size())
        throw Error(ErrorKind::invalid_basis_change, "one matrix per hyperedge vertex required");
    FundamentalGraph out = f;
    const std::size_t ny = f.part_y.size();
    for (std::size_t z = 0; z < matrices.size(); ++z) {
        const auto& mat = matrices[z];
        if (static_cast<int>(mat.size()) != f.slots)
            throw Error(ErrorKind::invalid_basis_change, "matrix size for " + f.part_z[z]);
        std::vector<Gf2Vector> rows;
        for (const auto& r : mat) {
            if (static_cast<int>(r.size()) != f.slots)
                throw Error(ErrorKind::invalid_basis_change, "matrix size for " + f.part_z[z]);
            Gf2Vector bits(f.slots);
            for (int t = 0; t < f.slots; ++t) bits[t] = (r[t] & 1) != 0;
            rows.push_back(bits);
        }
        if (gf2_rank(rows) != f.slots)
            throw Error(ErrorKind::invalid_basis_change, "singular matrix for " + f.part_z[z]);
        for (int s = 0; s < f.slots; ++s) {
            Gf2Vector acc(ny);
            for (int t = 0; t < f.slots; ++t)
                if (rows[s].test(t)) acc ^= f.nbhd[z][t];
            out.nbhd[z][s] = acc;
        }
    }
    return out;
}

bool lambda_equivalent(const FundamentalGraph& a, const FundamentalGraph& b) {
    if (a.part_y != b.part_y || a.part_z != b.part_z)
        throw Error(ErrorKind::part_mismatch, "fundamental graphs over different parts");
    for (std::size_t z = 0; z < a.nbhd.size(); ++z) {
        int ra = gf2_rank(a.nbhd[z]);
        int rb = gf2_rank(b.nbhd[z]);
        auto both = a.nbhd[z];
        both.insert(both.end(), b.nbhd[z].begin(), b.nbhd[z].end());
        if (ra != rb || gf2_rank(both) != ra) return false;
    }
    return true;
}

std::string write_fund(const FundamentalGraph& f) {
    std::ostringstream out;
    out << "fund 1\nslots " << f.slots << "\npartY";
    for (const auto& y : f.part_y) out << ' ' << y;
    out << "\npartZ";
    for (const auto& z : f.part_z) out << ' ' << z;
    out << '\n';
    for (std::size_t z = 0; z < f.nbhd.size(); ++z)
        for (int s = 0; s < static_cast<int>(f.nbhd[z].size()); ++s)
            for (std::size_t y = 0; y < f.nbhd[z][s].size(); ++y)
                if (f.nbhd[z][s].test(y)) out << "adj E" << s + 1 << ' ' << f.part_y[y] << ' ' << f.part_z[z] << '\n';
    return out.str();
}

}  // namespace tows::matroid
