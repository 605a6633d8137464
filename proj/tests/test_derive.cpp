#include "doctest.h"
#include "helpers.hpp"
#include "tows/derive.hpp"
#include "tows/generate.hpp"

using namespace tows;
using namespace testing_support;

namespace {

Structure ternary_under_root() {
    return tows_text("tows 1\nsignature R/3\nuniverse r a b c\nroot r\nparent a r\nparent b r\nparent c r\nrel R a b c\n");
}

// Gaifman graph computed straight from the tuples.
Graph gaifman_oracle(const Structure& m) {
    Graph g;
    for (const auto& n : m.names) g.add_vertex(n);
    for (const auto& rel : m.rels)
        for (const Tuple& t : rel)
            for (int u : t)
                for (int v : t)
                    if (u != v) g.add_edge(u, v);
    return g;
}

}  // namespace

TEST_SUITE("derive") {
    TEST_CASE("gaifman examples") {
        Graph tri = derive::gaifman(ternary_under_root());
        CHECK(tri.edge_count() == 3);
        CHECK(tri.adj[tri.id("r")].empty());
        Structure m = tows_graph({"a", "b", "c"}, {{"a", "r"}, {"b", "a"}, {"c", "r"}}, {{"a", "c"}, {"b", "c"}});
        CHECK(io::write_graph(derive::gaifman(m)) == io::write_graph(graph_reduct(m)));
        Structure empty = tows_text("tows 1\nsignature R/3\nuniverse r a\nroot r\nparent a r\n");
        CHECK(derive::gaifman(empty).edge_count() == 0);
    }

    TEST_CASE("tgaif examples") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {{"a", "b"}});
        CHECK(io::write_tows(derive::tgaif(m)) == io::write_tows(m));
        Structure t = derive::tgaif(ternary_under_root());
        CHECK(t.is_graph());
        CHECK(t.rels[0].size() == 3);
        for (int x = 0; x < t.size(); ++x) CHECK(t.parent[x] == ternary_under_root().parent[x]);
        Structure e = derive::tgaif(tows_text("tows 1\nsignature R/3\nuniverse r a\nroot r\nparent a r\n"));
        CHECK(e.rels[0].empty());
    }

    TEST_CASE("incidence examples") {
        // K_2 gives a path on three vertices
        Graph k2 = derive::incidence(graph_to_structure(complete(2)));
        Graph k2_noroot = graph_induced(k2, {k2.id("x0"), k2.id("x1"), 3});
        CHECK(brute_isomorphic(k2_noroot, path(3)));
        // C_3 gives C_6 (root isolated)
        Graph c3 = derive::incidence(graph_to_structure(cycle(3)));
        std::vector<int> keep;
        for (int v = 0; v < c3.size(); ++v)
            if (c3.names[v] != "~root") keep.push_back(v);
        CHECK(brute_isomorphic(graph_induced(c3, keep), cycle(6)));
        Graph none = derive::incidence(graph_to_structure(named_graph(3, {})));
        CHECK(none.size() == 4);
        CHECK(none.edge_count() == 0);
    }

    TEST_CASE("tinc example: one edge under the root") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {{"a", "b"}});
        Structure t = derive::tinc(m);
        REQUIRE(t.size() == 4);
        int e = 3;
        CHECK(t.parent[e] == t.root);
        CHECK(t.rels[0] == std::set<Tuple>{{t.id("a"), e}, {t.id("b"), e}});
        Structure bare = derive::tinc(tows_graph({"a"}, {{"a", "r"}}, {}));
        CHECK(bare.size() == 2);
        CHECK(bare.rels[0].empty());
    }

    TEST_CASE("mark_tinc2 traces") {
        Structure m = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "r"}}, {{"a", "b"}});
        Structure n = derive::mark_tinc2(m);
        CHECK(n.mark("V").size() == 3);
        CHECK(n.mark("P").size() == 1);
        CHECK(n.mark("M1").size() == 1);
        CHECK(n.mark("M2").size() == 1);
        // the P-marked vertex is the image of the first-level tuple vertex
        int p = *n.mark("P").begin();
        CHECK(n.parent[p] == n.root);

        Structure tern = derive::mark_tinc2(ternary_under_root());
        CHECK(tern.mark("P").size() == 1);
        for (const char* name : {"M1", "M2", "M3"}) CHECK(tern.mark(name).size() == 1);

        Structure pt = derive::mark_tinc2(tows_text("tows 1\nsignature E/2s\nuniverse r\nroot r\n"));
        CHECK(pt.mark("V").size() == 1);
        CHECK(pt.mark("P").empty());
        CHECK(pt.size() == 1);
    }

    TEST_CASE("decode round trip examples") {
        Structure edge = tows_graph({"a", "b"}, {{"a", "r"}, {"b", "a"}}, {{"a", "b"}});
        CHECK(isomorphic(derive::tinc_decode(derive::mark_tinc2(edge)), edge));
        Structure tern = tows_text("tows 1\nsignature R/3\nuniverse r a b c\nroot r\nparent a r\nparent b a\nparent c r\nrel R c a b\n");
        Structure back = derive::tinc_decode(derive::mark_tinc2(tern));
        REQUIRE(isomorphic(back, tern));
        CHECK(back.rels[0] == std::set<Tuple>{{back.id("c"), back.id("a"), back.id("b")}});
        Structure empty = tows_text("tows 1\nsignature R/3 S/2\nuniverse r a\nroot r\nparent a r\n");
        Structure eb = derive::tinc_decode(derive::mark_tinc2(empty));
        CHECK(isomorphic(eb, empty));
        CHECK(eb.sig == empty.sig);
        Structure unmarked = derive::tinc(derive::tinc(edge));
        CHECK_THROWS_AS(derive::tinc_decode(unmarked), Error);
    }

    TEST_CASE("starify examples") {
        Structure chain = tows_graph({"a", "b", "c"}, {{"a", "r"}, {"b", "a"}, {"c", "b"}}, {});
        Graph s = derive::starify(chain, std::set<int>{chain.root, chain.id("b")});
        CHECK(s.edges() == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
        std::set<int> all{0, 1, 2, 3};
        CHECK(derive::starify(chain, all).edge_count() == 0);
        Structure m = tows_graph({"a", "b", "c"}, {{"a", "r"}, {"b", "a"}, {"c", "r"}}, {{"b", "c"}});
        Graph only_root = derive::starify(m, std::set<int>{m.root});
        CHECK(only_root.edge_count() == 4);
        for (int x = 1; x < 4; ++x) CHECK(only_root.has_edge(0, x));
        CHECK(only_root.has_edge(m.id("b"), m.id("c")));
        try {
            derive::starify(chain, std::set<int>{chain.id("a")});
            FAIL("root unmarked must be rejected");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_marking);
        }
    }
}

TEST_SUITE("derive properties") {
    TEST_CASE("gaifman matches the tuple oracle") {
        generate::Rng rng(21);
        for (int round = 0; round < 40; ++round) {
            Structure m = generate::random_structure(rng, 1 + round % 8, 3);
            CHECK(io::write_graph(derive::gaifman(m)) == io::write_graph(gaifman_oracle(m)));
            CHECK(io::write_graph(graph_reduct(derive::tgaif(m))) == io::write_graph(gaifman_oracle(m)));
        }
    }

    TEST_CASE("tinc keeps the order and matches incidence") {
        generate::Rng rng(22);
        for (int round = 0; round < 20; ++round) {
            Structure m = generate::random_structure(rng, 1 + round % 8, 3);
            Structure t = derive::tinc(m);
            Graph inc = derive::incidence(m);
            CHECK(io::write_graph(graph_reduct(t)) == io::write_graph(inc));
            for (int x = 0; x < m.size(); ++x)
                for (int y = 0; y < m.size(); ++y) CHECK(t.strictly_below(x, y) == m.strictly_below(x, y));
            for (int x = m.size(); x < t.size(); ++x) {
                CHECK(t.parent[x] == t.root);
                for (int y = m.size(); y < t.size(); ++y)
                    if (x != y) CHECK(order_rel(t, x, y) == OrderRel::incomparable);
            }
        }
    }

    TEST_CASE("incidence of a graph is its 1-subdivision") {
        generate::Rng rng(23);
        for (int round = 0; round < 20; ++round) {
            Graph g = generate::random_graph(rng, 1 + round % 6, 0.5);
            Graph inc = derive::incidence(graph_to_structure(g));
            std::vector<int> keep;
            for (int v = 0; v < inc.size(); ++v)
                if (inc.names[v] != "~root") keep.push_back(v);
            CHECK(brute_isomorphic(graph_induced(inc, keep), subdivided_once(g)));
        }
    }

    TEST_CASE("decode inverts mark_tinc2") {
        generate::Rng rng(24);
        for (int round = 0; round < 40; ++round) {
            Structure m = generate::random_structure(rng, 1 + round % 8, 3);
            CHECK(isomorphic(derive::tinc_decode(derive::mark_tinc2(m)), m));
        }
    }

    TEST_CASE("starify adds exactly one edge per unmarked element") {
        generate::Rng rng(25);
        for (int round = 0; round < 40; ++round) {
            Structure m = generate::random_tows_graph(rng, 2 + round % 8, 0);
            std::set<int> marked{m.root};
            for (int x = 0; x < m.size(); ++x)
                if (rng() % 3 == 0) marked.insert(x);
            Graph s = derive::starify(m, marked);
            CHECK(s.edge_count() == m.size() - static_cast<int>(marked.size()));
            for (int x = 0; x < m.size(); ++x) {
                if (marked.count(x)) continue;
                int c = m.parent[x];
                while (!marked.count(c)) c = m.parent[c];
                CHECK(s.has_edge(c, x));
            }
        }
    }
}
