#include "doctest.h"
#include "helpers.hpp"
#include "tows/generate.hpp"
#include "tows/minors.hpp"
#include "tows/sparsity.hpp"

using namespace tows;
using namespace testing_support;

namespace {

bool contains_class(const std::vector<Structure>& set, const Structure& m) {
    for (const auto& s : set)
        if (isomorphic(s, m)) return true;
    return false;
}

// Graph on the union of E and the cover edges.
Graph with_covers(const Structure& m) {
    Graph g = graph_reduct(m);
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) g.add_edge(x, m.parent[x]);
    return g;
}

}  // namespace

TEST_SUITE("minors") {
    TEST_CASE("contract_cover examples") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {{"a", "b"}});
        Structure c = minors::contract_cover(m, m.id("a"), m.id("b"));
        CHECK(c.names == std::vector<std::string>{"r", "a"});
        CHECK(c.rels[0].empty());
        Structure star = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {});
        Structure s = minors::contract_cover(star, star.root, star.id("a"));
        CHECK(s.names == std::vector<std::string>{"r", "b"});
        Structure tern = tows_text("tows 1\nsignature R/3\nuniverse r a b c\nroot r\nparent a r\nparent b r\nparent c b\nrel R a b c\n");
        Structure t = minors::contract_cover(tern, tern.id("b"), tern.id("c"));
        CHECK(t.rels[0] == std::set<Tuple>{{t.id("a"), t.id("b"), t.id("b")}});
        try {
            minors::contract_cover(star, star.id("a"), star.id("b"));
            FAIL("non-cover accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::not_a_cover);
        }
    }

    TEST_CASE("deletion examples") {
        Structure chain = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {});
        Structure d = minors::delete_vertex(chain, chain.id("a"));
        CHECK(d.size() == 2);
        CHECK(d.parent[d.id("b")] == d.root);
        Structure e = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {{"a", "b"}});
        Structure noedge = minors::delete_tuple(e, 0, {1, 2});
        CHECK(noedge.rels[0].empty());
        CHECK(noedge.parent == e.parent);
        Structure leaf = minors::delete_vertex(chain, chain.id("b"));
        CHECK(leaf.names == std::vector<std::string>{"r", "a"});
        CHECK_THROWS_AS(minors::delete_vertex(chain, chain.root), Error);
    }

    TEST_CASE("shrink examples") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {{"a", "b"}});
        CHECK(isomorphic(minors::shrink(m, std::set<int>{0, 1, 2}, std::set<int>{}), m));
        Structure s = minors::shrink(m, std::set<int>{0, 1}, std::set<int>{});
        CHECK(s.names == std::vector<std::string>{"r", "a"});
        CHECK(s.rels[0].empty());
        Structure star = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {{"a", "b"}});
        Structure t = minors::shrink(star, std::set<int>{0, 1, 2}, std::set<int>{star.id("a")});
        CHECK(t.names == std::vector<std::string>{"r", "b"});
        CHECK(t.rels[0].empty());
        Structure marked = star;
        marked.marks["V"] = {0, 1, 2};
        marked.marks["D"] = {1};
        Structure u = minors::shrink(marked);
        CHECK(isomorphic(u, t));
        CHECK(u.marks.empty());
    }

    TEST_CASE("enum_cont and enum_minors examples") {
        Structure pt = tows_text("tows 1\nsignature E/2s\nuniverse r\nroot r\n");
        CHECK(minors::enum_cont(pt).size() == 1);
        Structure two = tows_graph({"a"}, {{"a", "r"}}, {});
        CHECK(minors::enum_cont(two).size() == 2);
        Structure bare = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {});
        CHECK(minors::same_classes(minors::enum_minors(bare), minors::enum_cont(bare)));
        Structure edge = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {{"a", "b"}});
        auto all = minors::enum_minors(edge);
        auto cont = minors::enum_cont(edge);
        CHECK(all.size() > cont.size());
        for (const auto& c : cont) CHECK(contains_class(all, c));
    }

    TEST_CASE("size bound is enforced") {
        generate::Rng rng(41);
        Structure big = generate::random_tows_graph(rng, 40, 2);
        try {
            minors::enum_cont(big);
            FAIL("bound not enforced");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::size_bound_exceeded);
        }
    }

    TEST_CASE("sp examples") {
        Structure m = tows_graph({"a", "b", "c"}, {{"a", "r"}, {"b", "a"}, {"c", "r"}}, {{"b", "c"}});
        Graph id = minors::sp(m, {0, 1, 2, 3}, {});
        CHECK(brute_isomorphic(id, with_covers(m)));
        Graph one = minors::sp(m, {0}, {});
        CHECK(one.size() == 1);
        CHECK(one.edge_count() == 0);
    }

    TEST_CASE("poset check examples") {
        Structure one_cover = tows_graph({"a"}, {{"a", "r"}}, {});
        auto r1 = minors::minor_poset_check(one_cover);
        CHECK(r1.isomorphic);
        CHECK(r1.minors == 2);
        CHECK(r1.induced == 2);
        Structure tri = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {{"a", "b"}});
        auto r2 = minors::minor_poset_check(tri);
        CHECK(r2.isomorphic);
        CHECK(r2.induced == 8);
        CHECK(r2.minors == 8);
    }
}

TEST_SUITE("minors properties") {
    TEST_CASE("cont is idempotent and mon commutes with cont") {
        generate::Rng rng(42);
        for (int round = 0; round < 20; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 5, round % 3);
            auto cont = minors::enum_cont(m);
            CHECK(minors::same_classes(minors::cont_of(cont), cont));
            CHECK(minors::same_classes(minors::mon_of(cont), minors::cont_of(minors::mon(m))));
        }
    }

    TEST_CASE("every shrink output is in the contraction closure") {
        generate::Rng rng(43);
        for (int round = 0; round < 20; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 5, round % 3);
            auto cont = minors::enum_cont(m);
            for (int k = 0; k < 5; ++k) {
                std::set<int> v{m.root}, d;
                for (int x = 0; x < m.size(); ++x) {
                    if (rng() % 2) v.insert(x);
                    if (x != m.root && rng() % 4 == 0) d.insert(x);
                }
                CHECK(contains_class(cont, minors::shrink(m, v, d)));
            }
        }
    }

    TEST_CASE("enum_cont covers every single deletion and contraction") {
        generate::Rng rng(44);
        for (int round = 0; round < 15; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 5, round % 3);
            auto cont = minors::enum_cont(m);
            for (int x = 0; x < m.size(); ++x) {
                if (x == m.root) continue;
                CHECK(contains_class(cont, minors::delete_vertex(m, x)));
                CHECK(contains_class(cont, minors::contract_cover(m, m.parent[x], x)));
            }
        }
    }

    TEST_CASE("sp outputs are minors of E plus the covers") {
        generate::Rng rng(45);
        for (int round = 0; round < 8; ++round) {
            Graph g = generate::random_graph(rng, 3 + round % 3, 0.5);
            Structure m = generate::spanning_tree_ordering(rng, g);
            Graph host = with_covers(m);
            for (const auto& h : minors::sp_all(m)) {
                CHECK(brute_minor(h, host));
                CHECK(sparsity::is_minor(h, host));
            }
        }
    }

    TEST_CASE("poset check holds on random small graphs") {
        generate::Rng rng(46);
        for (int round = 0; round < 12; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 4, round % 4);
            auto r = minors::minor_poset_check(m);
            CHECK_MESSAGE(r.isomorphic, r.failure);
        }
    }
}
