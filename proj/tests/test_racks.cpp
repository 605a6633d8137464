#include "doctest.h"
#include "helpers.hpp"
#include "tows/generate.hpp"
#include "tows/minors.hpp"
#include "tows/racks.hpp"

using namespace tows;
using namespace testing_support;

namespace {

twists::Core load_core(int type) {
    return twists::parse_core(io::read_file(data_file("core_t" + std::to_string(type) + ".core")));
}

// E-reduct without the root, as a graph.
Graph e_without_root(const Structure& m) {
    Graph g = graph_reduct(m);
    std::vector<int> keep;
    for (int v = 0; v < g.size(); ++v)
        if (v != m.root) keep.push_back(v);
    return graph_induced(g, keep);
}

OrderedBipartite ordered_path3() {
    OrderedBipartite g;
    g.a = {"a1", "a2"};
    g.b = {"b1"};
    g.add_edge(0, 0);
    g.add_edge(1, 0);
    return g;
}

}  // namespace

TEST_SUITE("racks") {
    TEST_CASE("grounding examples") {
        Structure g0 = racks::grounding(ordered_biclique(1, 1), {0, {}});
        REQUIRE(g0.size() == 3);
        CHECK(g0.parent[g0.id("a1")] == g0.root);
        CHECK(g0.parent[g0.id("b1")] == g0.root);
        CHECK(g0.rels[0] == std::set<Tuple>{{g0.id("a1"), g0.id("b1")}});

        Structure g1 = racks::grounding(ordered_biclique(2, 2), {1, {1}});
        CHECK(g1.size() == 1 + 4 + 4);
        int adjacent_to_root = 0;
        for (const Tuple& t : g1.rels[0])
            if (t[0] == g1.root || t[1] == g1.root) ++adjacent_to_root;
        CHECK(adjacent_to_root == 4);
        for (const Tuple& t : g1.rels[0])
            if (t[0] == g1.root) CHECK(g1.names[t[1]].find('~') != std::string::npos);

        try {
            racks::grounding(ordered_biclique(1, 1), {1, {5}});
            FAIL("layer out of range accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_spec);
        }
    }

    TEST_CASE("rack examples") {
        Structure r0 = racks::rack(ordered_biclique(1, 1), {0, {}, {}, {}});
        Structure g0 = racks::grounding(ordered_biclique(1, 1), {0, {}});
        CHECK(io::write_tows(r0) == io::write_tows(g0));

        Structure r1 = racks::rack(ordered_biclique(1, 1), {1, {}, {1}, {}});
        REQUIRE(r1.size() == 4);
        int a = r1.id("a1"), b = r1.id("b1");
        int x = -1;
        for (int v = 0; v < r1.size(); ++v)
            if (v != a && v != b && v != r1.root) x = v;
        CHECK(r1.parent[a] == r1.root);
        CHECK(r1.parent[x] == a);
        CHECK(r1.parent[b] == r1.root);
        CHECK(r1.rels[0] == std::set<Tuple>{{std::min(a, x), std::max(a, x)}, {std::min(x, b), std::max(x, b)}});

        Structure chain = racks::rack(ordered_path3(), {0, {}, {}, {}});
        CHECK(chain.parent[chain.id("a2")] == chain.id("a1"));

        try {
            racks::rack(ordered_biclique(1, 1), {2, {}, {1}, {1}});
            FAIL("overlapping hang sets accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_spec);
        }
        CHECK(racks::RackSpec{3, {1}, {4}, {}}.text() == "h 3 nr 1 ca 4 cb -");
    }

    TEST_CASE("host construction") {
        auto t1 = load_core(1);
        Structure h = racks::host(t1, ordered_biclique(1, 1));
        CHECK(h.size() == 1 + 1 + t1.length() + 1);
        auto t3 = load_core(3);
        CHECK_NOTHROW(racks::host(t3, ordered_path3()));
        OrderedBipartite empty;
        empty.a = {"a1"};
        CHECK_THROWS_AS(racks::host(t1, empty), Error);
        auto bad = t1;
        bad.twist.seq.meshes[2] = bad.twist.seq.meshes[1];
        try {
            racks::host(bad, ordered_biclique(1, 1));
            FAIL("invalid core accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_core);
        }
    }

    TEST_CASE("mark predicates") {
        Structure m = tows_graph({"a", "b", "c", "d", "e"}, {{"a", "r"}, {"b", "a"}, {"c", "a"}, {"d", "a"}, {"e", "r"}},
                                 {{"b", "e"}});
        auto p = racks::mark_predicates(m);
        CHECK(p.m == std::set<int>{m.id("a"), m.id("e")});
        CHECK_FALSE(p.small.count(m.id("a")));
        CHECK(p.big.count(m.id("a")));
        CHECK(p.small.count(m.id("e")));
        for (int x = 0; x < m.size(); ++x) CHECK(p.small.count(x) + p.big.count(x) == 1);
    }

    TEST_CASE("calibrations of the shipped cores") {
        auto c1 = racks::calibrate(load_core(1));
        REQUIRE(c1.ok);
        CHECK_FALSE(c1.is_rack);
        CHECK(c1.spec.text() == "h 2 nr 0,1 ca - cb -");
        auto c2 = racks::calibrate(load_core(2));
        REQUIRE(c2.ok);
        CHECK(c2.spec.text() == "h 2 nr 1,3 ca - cb -");
        auto c3 = racks::calibrate(load_core(3));
        REQUIRE(c3.ok);
        CHECK(c3.is_rack);
        CHECK(c3.spec.text() == "h 3 nr 1 ca 4 cb -");
    }

    TEST_CASE("pipeline examples and a flipped mark") {
        for (int type = 1; type <= 3; ++type) {
            auto core = load_core(type);
            CAPTURE(type);
            for (auto g : {ordered_biclique(1, 1), ordered_biclique(2, 2), ordered_path3()}) {
                auto r = racks::verify_pipeline(core, g);
                CHECK_MESSAGE(r.ok, r.text());
            }
            auto cal = racks::calibrate(core);
            auto g = ordered_biclique(2, 2);
            Structure h = racks::host(core, g);
            REQUIRE(racks::verify_host(cal, g, h).ok);
            // any flip that changes the number of survivors must be rejected
            auto survivors = [](const Structure& s) {
                int n = 0;
                for (int x = 0; x < s.size(); ++x) n += x == s.root || (s.mark("V").count(x) && !s.mark("D").count(x));
                return n;
            };
            int decisive = 0;
            for (const char* mark : {"V", "D"})
                for (int x = 0; x < h.size(); ++x) {
                    if (x == h.root) continue;
                    Structure mutated = h;
                    auto& s = mutated.marks[mark];
                    if (!s.erase(x)) s.insert(x);
                    if (survivors(mutated) == survivors(h)) continue;
                    ++decisive;
                    CHECK_FALSE(racks::verify_host(cal, g, mutated).ok);
                }
            CHECK(decisive >= static_cast<int>(h.mark("V").size()));
        }
    }
}

TEST_SUITE("racks properties") {
    TEST_CASE("grounding E-reduct is the h-subdivision plus root edges") {
        generate::Rng rng(61);
        for (int round = 0; round < 20; ++round) {
            auto g = generate::random_ordered_bipartite(rng, 1 + round % 3, 1 + round % 4, 0.6);
            int h = round % 3;
            Structure gr = racks::grounding(g, {h, {}});
            CHECK(graph_isomorphic(e_without_root(gr), subdivide(g.graph(), h)));
            for (int x = 0; x < gr.size(); ++x)
                if (x != gr.root) CHECK(gr.parent[x] == gr.root);
            std::set<int> nr;
            for (int layer = 0; layer <= h + 1; ++layer)
                if (rng() % 2) nr.insert(layer);
            Structure with_root = racks::grounding(g, {h, nr});
            int root_edges = 0;
            for (const Tuple& t : with_root.rels[0]) root_edges += t[0] == with_root.root || t[1] == with_root.root;
            int expected = 0;
            for (int layer : nr) {
                if (layer == 0) expected += static_cast<int>(g.a.size());
                else if (layer == h + 1) expected += static_cast<int>(g.b.size());
                else expected += static_cast<int>(g.edges.size());
            }
            CHECK(root_edges == expected);
        }
    }

    TEST_CASE("racks share the E-relation of the grounding and are valid tree orders") {
        generate::Rng rng(62);
        for (int round = 0; round < 20; ++round) {
            auto g = generate::random_ordered_bipartite(rng, 1 + round % 3, 1 + round % 3, 0.7);
            int h = 1 + round % 3;
            racks::RackSpec spec{h, {}, {}, {}};
            for (int layer = 1; layer <= h + 1; ++layer)
                if (rng() % 3 == 0) spec.ca.insert(layer);
            for (int layer = 1; layer <= h; ++layer)
                if (!spec.ca.count(layer) && rng() % 3 == 0) spec.cb.insert(layer);
            Structure r = racks::rack(g, spec);
            Structure gr = racks::grounding(g, {h, {}});
            CHECK_NOTHROW(r.validate());
            CHECK(io::write_graph(graph_reduct(r)) == io::write_graph(graph_reduct(gr)));
            // part A forms a chain in its listed order
            for (std::size_t i = 1; i < g.a.size(); ++i)
                CHECK(r.strictly_below(r.id(g.a[i - 1]), r.id(g.a[i])));
        }
    }

    TEST_CASE("shrink of the marked host equals the calibrated target on random inputs") {
        generate::Rng rng(63);
        for (int type = 1; type <= 3; ++type) {
            auto core = load_core(type);
            auto cal = racks::calibrate(core);
            REQUIRE(cal.ok);
            for (int round = 0; round < 6; ++round) {
                auto g = generate::random_ordered_bipartite(rng, 1 + round % 3, 1 + (round + 1) % 3, 0.6);
                if (g.edges.empty()) g.add_edge(0, 0);
                Structure h = racks::host(core, g);
                Structure target = cal.is_rack ? racks::rack(g, cal.spec) : racks::grounding(g, {cal.spec.h, cal.spec.nr});
                CHECK(isomorphic(minors::shrink(h), target));
            }
        }
    }
}
