#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "tows/generate.hpp"
#include "tows/matroid.hpp"
#include "tows/minors.hpp"
#include "tows/racks.hpp"

using namespace tows;
using namespace testing_support;

namespace {

using NameSet = std::set<std::string>;

NameSet bits_to_names(const matroid::FundamentalGraph& f, const matroid::Gf2Vector& v) {
    NameSet out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) out.insert(f.part_y[i]);
    return out;
}

// Multiset of single-slot neighbourhoods, by Y names.
std::multiset<NameSet> neighbourhoods(const matroid::FundamentalGraph& f) {
    std::multiset<NameSet> out;
    for (const auto& slots : f.nbhd) out.insert(bits_to_names(f, slots[0]));
    return out;
}

// Tree path between u and v as upper-element names, by walking parents.
NameSet path_oracle(const Structure& m, int u, int v) {
    NameSet out;
    std::vector<int> up_u = m.ancestors(u), up_v = m.ancestors(v);
    std::set<int> on_v(up_v.begin(), up_v.end());
    int meet = -1;
    for (int x : up_u)
        if (on_v.count(x)) {
            meet = x;
            break;
        }
    for (int x : up_u) {
        if (x == meet) break;
        out.insert("y:" + m.names[x]);
    }
    for (int x : up_v) {
        if (x == meet) break;
        out.insert("y:" + m.names[x]);
    }
    return out;
}

// Dimension of the span of the given vectors by explicit closure.
int span_dimension(const std::vector<matroid::Gf2Vector>& vs) {
    std::set<std::string> span;
    std::string zero(vs.empty() ? 0 : vs[0].size(), '0');
    span.insert(zero);
    for (const auto& v : vs) {
        std::set<std::string> next = span;
        for (const auto& s : span) {
            std::string out;
            boost::to_string(matroid::Gf2Vector(s) ^ v, out);
            next.insert(out);
        }
        span = next;
    }
    int d = 0;
    while ((1u << d) < span.size()) ++d;
    return d;
}

}  // namespace

TEST_SUITE("matroid") {
    TEST_CASE("flatten examples") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {{"r", "b"}});
        auto f = matroid::flatten(m);
        CHECK(f.covers == std::vector<int>{m.id("a"), m.id("b")});
        REQUIRE(f.hyperedges.size() == 1);
        CHECK(f.hyperedges[0].support == std::vector<int>{m.root, m.id("b")});
        Structure tern = tows_text("tows 1\nsignature R/3\nuniverse r a b c\nroot r\nparent a r\nparent b r\nparent c r\nrel R a b c\nrel R a a b\n");
        auto ft = matroid::flatten(tern);
        CHECK(ft.covers.size() == 3);
        REQUIRE(ft.hyperedges.size() == 2);
        std::set<std::vector<int>> supports;
        for (const auto& h : ft.hyperedges) supports.insert(h.support);
        CHECK(supports == std::set<std::vector<int>>{{1, 2, 3}, {1, 2}});
    }

    TEST_CASE("fundamental cycle examples") {
        Structure star = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {});
        auto v = matroid::fundamental_cycle(star, star.id("a"), star.id("b"));
        CHECK(v.count() == 2);
        Structure chain = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {});
        CHECK(matroid::fundamental_cycle(chain, chain.root, chain.id("b")).count() == 2);
        CHECK_THROWS_AS(matroid::fundamental_cycle(chain, chain.id("a"), chain.id("b")), Error);
        CHECK_THROWS_AS(matroid::fundamental_cycle(chain, 0, 7), Error);
    }

    TEST_CASE("lambda_graph examples") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {{"a", "b"}});
        auto f = matroid::lambda_graph(m);
        CHECK(f.part_z.size() == 1);
        CHECK(neighbourhoods(f) == std::multiset<NameSet>{{"y:a", "y:b"}});
        Structure bare = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {});
        CHECK(matroid::lambda_graph(bare).part_z.empty());
        std::string text = matroid::write_fund(f);
        CHECK(text.rfind("fund 1\n", 0) == 0);
        CHECK(text.find("partY y:a y:b") != std::string::npos);
        CHECK(text.find("adj E1 y:a z:E:0") != std::string::npos);
    }

    TEST_CASE("lambda of a (0, empty) grounding of K_{2,2} is its 1-subdivision") {
        Structure gr = racks::grounding(ordered_biclique(2, 2), racks::GroundingSpec{0, {}});
        Graph lam = matroid::lambda_graph(gr).as_graph();
        CHECK(brute_isomorphic(lam, subdivided_once(biclique(2, 2))));
    }

    TEST_CASE("lambda_general examples") {
        Structure tern = tows_text("tows 1\nsignature R/3\nuniverse r a b c\nroot r\nparent a r\nparent b r\nparent c r\nrel R a b c\n");
        auto f = matroid::lambda_general(tern);
        REQUIRE(f.slots == 2);
        REQUIRE(f.nbhd.size() == 1);
        CHECK(bits_to_names(f, f.nbhd[0][0]) == NameSet{"y:a", "y:b"});
        CHECK(bits_to_names(f, f.nbhd[0][1]) == NameSet{"y:a", "y:c"});

        Structure g = tows_graph({"a", "b", "c"}, {{"a", "r"}, {"b", "a"}, {"c", "r"}}, {{"b", "c"}, {"a", "c"}});
        CHECK(matroid::lambda_equivalent(matroid::lambda_general(g), matroid::lambda_graph(g)));

        Structure single = tows_text("tows 1\nsignature R/3\nuniverse r a\nroot r\nparent a r\nrel R a a a\n");
        auto fs = matroid::lambda_general(single);
        REQUIRE(fs.nbhd.size() == 1);
        for (const auto& v : fs.nbhd[0]) CHECK(v.none());
    }

    TEST_CASE("change_basis and lambda_equivalent") {
        Structure tern = tows_text("tows 1\nsignature R/3\nuniverse r a b c\nroot r\nparent a r\nparent b r\nparent c r\nrel R a b c\n");
        auto f = matroid::lambda_general(tern);
        CHECK(matroid::change_basis(f, {{{1, 0}, {0, 1}}}) == f);
        auto swapped = matroid::change_basis(f, {{{0, 1}, {1, 0}}});
        CHECK(swapped.nbhd[0][0] == f.nbhd[0][1]);
        CHECK(swapped.nbhd[0][1] == f.nbhd[0][0]);
        auto mixed = matroid::change_basis(f, {{{1, 1}, {0, 1}}});
        CHECK(mixed.nbhd[0][0] == (f.nbhd[0][0] ^ f.nbhd[0][1]));
        CHECK(matroid::lambda_equivalent(f, mixed));
        try {
            matroid::change_basis(f, {{{1, 1}, {1, 1}}});
            FAIL("singular matrix accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_basis_change);
        }
        auto toggled = f;
        toggled.nbhd[0][0].flip(0);  // {b} alone leaves the span of {a,b},{a,c}
        CHECK_FALSE(matroid::lambda_equivalent(f, toggled));
        Structure none = tows_graph({"a"}, {{"a", "r"}}, {});
        CHECK(matroid::lambda_equivalent(matroid::lambda_graph(none), matroid::lambda_graph(none)));
    }

    TEST_CASE("gf2 rank") {
        matroid::Gf2Vector a(std::string("011")), b(std::string("110")), c(std::string("101"));
        CHECK(matroid::gf2_rank({a, b, c}) == 2);
        CHECK(matroid::gf2_rank({a, b}) == 2);
        CHECK(matroid::gf2_rank({}) == 0);
    }
}

TEST_SUITE("matroid properties") {
    TEST_CASE("fundamental cycles match the parent-walk oracle") {
        generate::Rng rng(31);
        for (int round = 0; round < 30; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 9, 4);
            auto f = matroid::lambda_graph(m);
            for (std::size_t z = 0; z < f.nbhd.size(); ++z) {
                auto t = std::next(m.rels[0].begin(), static_cast<long>(z));
                CHECK(bits_to_names(f, f.nbhd[z][0]) == path_oracle(m, (*t)[0], (*t)[1]));
            }
        }
    }

    TEST_CASE("cover contraction removes exactly y(e)") {
        generate::Rng rng(32);
        int tested = 0;
        for (int round = 0; round < 60; ++round) {
            Structure m = generate::random_tows_graph(rng, 3 + round % 8, 1 + round % 4);
            int v = 1 + static_cast<int>(rng() % (m.size() - 1));
            int u = m.parent[v];
            // skip contractions that create loops or parallel edges
            bool collapses = m.has_tuple(0, {std::min(u, v), std::max(u, v)});
            for (int w = 0; w < m.size(); ++w)
                if (m.has_tuple(0, {std::min(u, w), std::max(u, w)}) && m.has_tuple(0, {std::min(v, w), std::max(v, w)}))
                    collapses = true;
            if (collapses) continue;
            ++tested;
            auto before = matroid::lambda_graph(m);
            int yv = -1;
            for (std::size_t i = 0; i < before.part_y.size(); ++i)
                if (before.part_y[i] == "y:" + m.names[v]) yv = static_cast<int>(i);
            REQUIRE(yv >= 0);
            auto after = matroid::lambda_graph(minors::contract_cover(m, u, v));
            CHECK(neighbourhoods(after) == neighbourhoods(before.without_y(yv)));
        }
        CHECK(tested >= 20);
    }

    TEST_CASE("edge deletion removes exactly z(f)") {
        generate::Rng rng(33);
        for (int round = 0; round < 30; ++round) {
            Structure m = generate::random_tows_graph(rng, 3 + round % 8, 1 + round % 4);
            auto before = matroid::lambda_graph(m);
            int z = static_cast<int>(rng() % m.rels[0].size());
            Tuple f = *std::next(m.rels[0].begin(), z);
            auto after = matroid::lambda_graph(minors::delete_tuple(m, 0, f));
            CHECK(neighbourhoods(after) == neighbourhoods(before.without_z(z)));
        }
    }

    TEST_CASE("generalized neighbourhoods span the path space of each hyperedge") {
        generate::Rng rng(34);
        for (int round = 0; round < 30; ++round) {
            Structure m = generate::random_structure(rng, 2 + round % 7, 3);
            auto f = matroid::lambda_general(m);
            auto flat = matroid::flatten(m);
            REQUIRE(f.nbhd.size() == flat.hyperedges.size());
            for (std::size_t z = 0; z < f.nbhd.size(); ++z) {
                const auto& sup = flat.hyperedges[z].support;
                std::vector<matroid::Gf2Vector> paths;
                for (int u : sup)
                    for (int v : sup)
                        if (u < v) {
                            matroid::Gf2Vector p(flat.covers.size());
                            for (const auto& name : path_oracle(m, u, v))
                                p.set(static_cast<std::size_t>(flat.cover_index[m.id(name.substr(2))]));
                            paths.push_back(p);
                        }
                int dim = span_dimension(paths);
                CHECK(dim == static_cast<int>(sup.size()) - 1);
                CHECK(matroid::gf2_rank(f.nbhd[z]) == dim);
                std::vector<matroid::Gf2Vector> joint = paths;
                joint.insert(joint.end(), f.nbhd[z].begin(), f.nbhd[z].end());
                CHECK(span_dimension(joint) == dim);
            }
        }
    }

    TEST_CASE("arity-2 general lambda is equivalent to lambda_graph") {
        generate::Rng rng(35);
        for (int round = 0; round < 30; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 8, round % 5);
            CHECK(matroid::lambda_equivalent(matroid::lambda_general(m), matroid::lambda_graph(m)));
        }
    }

    TEST_CASE("random invertible basis changes preserve equivalence") {
        generate::Rng rng(36);
        for (int round = 0; round < 30; ++round) {
            Structure m = generate::random_structure(rng, 3 + round % 6, 3);
            auto f = matroid::lambda_general(m);
            std::vector<matroid::Gf2Matrix> mats;
            for (std::size_t z = 0; z < f.nbhd.size(); ++z) {
                matroid::Gf2Matrix b;
                do {
                    b.assign(static_cast<std::size_t>(f.slots), std::vector<int>(static_cast<std::size_t>(f.slots)));
                    for (auto& row : b)
                        for (int& x : row) x = static_cast<int>(rng() % 2);
                    std::vector<matroid::Gf2Vector> rows;
                    for (const auto& row : b) {
                        matroid::Gf2Vector r(static_cast<std::size_t>(f.slots));
                        for (int k = 0; k < f.slots; ++k) r[k] = row[k];
                        rows.push_back(r);
                    }
                    if (matroid::gf2_rank(rows) == f.slots) break;
                } while (true);
                mats.push_back(b);
            }
            CHECK(matroid::lambda_equivalent(f, matroid::change_basis(f, mats)));
        }
    }
}
