#include "doctest.h"
#include "helpers.hpp"
#include "tows/twists.hpp"

using namespace tows;
using namespace testing_support;

namespace {

twists::Core load_core(int type) {
    return twists::parse_core(io::read_file(data_file("core_t" + std::to_string(type) + ".core")));
}

const twists::PropertyResult& property(const twists::TwisterReport& r, const std::string& name) {
    for (const auto& p : r.properties)
        if (p.name == name) return p;
    throw std::runtime_error("missing property " + name);
}

// Element counts of the order-n twist, derived by counting guards and mesh cells.
int expected_size(int type, int n) {
    switch (type) {
        case 1: return 6 * n * n + 2 * n + 1;  // six meshes, guards on both sides
        case 2: return 6 * n * n + 1;          // six meshes, no guards
        default: return 8 * n * n + 1;         // eight meshes, no guards
    }
}

// Root plus two rows x cols meshes whose cells are all children of the root.
struct TwoMeshes {
    Structure m;
    twists::Mesh mu, nu;
};

TwoMeshes flat_meshes(int rows, int cols) {
    TwoMeshes t;
    t.m.set_signature(Signature::graph());
    t.m.root = t.m.add_element("r");
    t.mu = twists::Mesh(rows, cols);
    t.nu = twists::Mesh(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            t.mu.at(i, j) = t.m.add_element("p" + std::to_string(i) + std::to_string(j));
            t.m.parent[t.mu.at(i, j)] = t.m.root;
        }
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            t.nu.at(i, j) = t.m.add_element("q" + std::to_string(i) + std::to_string(j));
            t.m.parent[t.nu.at(i, j)] = t.m.root;
        }
    return t;
}

}  // namespace

TEST_SUITE("twists") {
    TEST_CASE("pair classification examples") {
        TwoMeshes t = flat_meshes(2, 2);
        auto c = twists::pair_class(t.m, t.mu, t.nu);
        CHECK(c.regular);
        CHECK(c.homogeneous);
        CHECK(c.disjoint);
        CHECK_FALSE(c.matching);

        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t.m.add_tuple(0, {t.mu.at(i, j), t.nu.at(i, j)});
        auto d = twists::pair_class(t.m, t.mu, t.nu);
        CHECK(d.regular);
        CHECK(d.matching);
        CHECK_FALSE(d.homogeneous);

        auto e = twists::pair_class(t.m, t.mu, t.mu);
        CHECK(e.regular);
        CHECK_FALSE(e.disjoint);
        CHECK(e.table.at({0, 0}) == atp(t.m, {t.mu.at(0, 0), t.mu.at(0, 0)}));

        CHECK_THROWS_AS(twists::pair_class(t.m, t.mu, t.mu.sub({0}, {0, 1})), Error);
    }

    TEST_CASE("mesh classification examples") {
        TwoMeshes t = flat_meshes(3, 3);
        auto anti = twists::mesh_class(t.m, t.mu);
        CHECK(anti.pattern == twists::OrderPattern::antichain);
        CHECK(anti.independent);
        CHECK_FALSE(anti.vertical);
        CHECK_FALSE(anti.horizontal);

        // cells chained in lexicographic (I then J) order
        Structure lex = t.m;
        int prev = lex.root;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                lex.parent[t.mu.at(i, j)] = prev;
                prev = t.mu.at(i, j);
            }
        auto lc = twists::mesh_class(lex, t.mu);
        CHECK(lc.pattern == twists::OrderPattern::lex_ij);
        CHECK(lc.chain);
        CHECK(lc.inner_vertical);

        // each row a chain along J, rows pairwise incomparable
        Structure rows = t.m;
        for (int i = 0; i < 3; ++i)
            for (int j = 1; j < 3; ++j) rows.parent[t.mu.at(i, j)] = t.mu.at(i, j - 1);
        auto rc = twists::mesh_class(rows, t.mu);
        CHECK(rc.pattern == twists::OrderPattern::cols_j);
        CHECK_FALSE(rc.chain);
        CHECK(twists::mesh_class(rows, t.mu.transpose()).pattern == twists::OrderPattern::rows_i);
    }

    TEST_CASE("matching and star types") {
        TwoMeshes t = flat_meshes(2, 2);
        Structure cover = t.m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) cover.parent[t.nu.at(i, j)] = t.mu.at(i, j);
        CHECK(twists::matching_type(cover, t.mu, t.nu) == twists::MatchType::forward);
        CHECK(twists::matching_type(cover, t.nu, t.mu) == twists::MatchType::backward);

        Structure edge = t.m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) edge.add_tuple(0, {t.mu.at(i, j), t.nu.at(i, j)});
        CHECK(twists::matching_type(edge, t.mu, t.nu) == twists::MatchType::edge);
        CHECK_THROWS_AS(twists::matching_type(t.m, t.mu, t.nu), Error);

        // guard a(i) covered by every cell of row i, no edges
        Structure star = t.m;
        std::vector<int> guard;
        for (int i = 0; i < 2; ++i) {
            int g = star.add_element("g" + std::to_string(i));
            star.parent[g] = star.root;
            guard.push_back(g);
            for (int j = 0; j < 2; ++j) star.parent[t.mu.at(i, j)] = g;
        }
        CHECK(twists::star_type(star, guard, t.mu, true) == twists::StarType::v_cover);
    }

    TEST_CASE("shipped cores are valid and a chain middle layer is not") {
        for (int type = 1; type <= 3; ++type) {
            auto core = load_core(type);
            CHECK(core.type == type);
            auto rep = twists::validate_core(core);
            CHECK_MESSAGE(rep.valid(), rep.text());
        }
        auto core = load_core(1);
        auto& m = core.twist.structure;
        const auto& mid = core.twist.seq.meshes[2];
        m.parent[mid.at(0, 1)] = mid.at(0, 0);
        m.parent[mid.at(1, 0)] = mid.at(0, 1);
        m.parent[mid.at(1, 1)] = mid.at(1, 0);
        CHECK_FALSE(twists::validate_core(core).valid());
    }

    TEST_CASE("twist and core files round trip") {
        auto text = io::read_file(data_file("core_t2.core"));
        CHECK(twists::write_core(twists::parse_core(text)) == text);
        auto t = twists::build_twist(load_core(1), 3);
        auto tt = twists::write_twist(t);
        CHECK(twists::write_twist(twists::parse_twist(tt)) == tt);
        auto labels = twists::write_labels(t.structure, t.seq);
        auto seq = twists::parse_labels(labels, t.structure);
        CHECK(seq.meshes == t.seq.meshes);
        CHECK(seq.guard_a == t.seq.guard_a);
        CHECK(seq.guard_b == t.seq.guard_b);
    }

    TEST_CASE("built twists: size, cleanliness and core recovery") {
        for (int type = 1; type <= 3; ++type) {
            auto core = load_core(type);
            CAPTURE(type);
            CHECK(isomorphic(twists::build_twist(core, 2).structure, core.twist.structure));
            for (int n = 2; n <= 5; ++n) {
                CAPTURE(n);
                auto t = twists::build_twist(core, n);
                CHECK(t.structure.size() == expected_size(type, n));
                CHECK(t.seq.rows() == n);
                if (n >= 3) {
                    auto rep = twists::validate_twister(t.structure, t.seq);
                    CHECK_MESSAGE(rep.pass(), rep.text());
                    auto clean = twists::validate_clean(t.structure, t.seq);
                    CHECK(clean.clean);
                    CHECK(clean.preclean_type == type);
                }
                CHECK(isomorphic(twists::core_of(t).twist.structure, core.twist.structure));
            }
        }
        auto core = load_core(1);
        CHECK(twists::write_core(twists::core_of(core.twist)) == twists::write_core(core));
        auto t1 = twists::build_twist(core, 2);
        t1.seq = {t1.seq.guard_a, {}, t1.seq.guard_b};
        for (const auto& mu : core.twist.seq.meshes) t1.seq.meshes.push_back(mu.sub({0}, {0}));
        CHECK_THROWS_AS(twists::core_of(t1), Error);
    }

    TEST_CASE("twister mutations are caught") {
        auto t = twists::build_twist(load_core(1), 4);
        // drop one matching edge between consecutive meshes
        auto broken = t;
        bool dropped = false;
        for (int k = 0; k + 1 < t.seq.length() && !dropped; ++k) {
            int x = t.seq.meshes[k].at(1, 1), y = t.seq.meshes[k + 1].at(1, 1);
            Tuple e{std::min(x, y), std::max(x, y)};
            if (broken.structure.rels[0].erase(e)) dropped = true;
        }
        REQUIRE(dropped);
        auto rep = twists::validate_twister(broken.structure, broken.seq);
        CHECK_FALSE(rep.pass());
        CHECK_FALSE(property(rep, "tw4").pass);
        CHECK_FALSE(property(rep, "tw4").witness.empty());

        auto rooted = t;
        rooted.seq.meshes[2].at(0, 0) = rooted.structure.root;
        CHECK_FALSE(property(twists::validate_twister(rooted.structure, rooted.seq), "tw13").pass);
        CHECK_THROWS_AS(twists::validate_clean(rooted.structure, rooted.seq), Error);
    }

    TEST_CASE("a last-mesh vertex below a first-mesh vertex is not clean") {
        auto t = twists::build_twist(load_core(1), 4);
        const auto& first = t.seq.meshes.front();
        const auto& last = t.seq.meshes.back();
        // hang the whole last mesh below one first-mesh cell so the twister properties survive
        auto& m = t.structure;
        int anchor = first.at(0, 0);
        for (int g : t.seq.guard_b) m.parent[g] = anchor;
        REQUIRE(m.strictly_below(anchor, last.at(1, 1)));
        auto rep = twists::validate_twister(m, t.seq);
        if (rep.pass()) CHECK_FALSE(twists::validate_clean(m, t.seq).clean);
        else CHECK_THROWS_AS(twists::validate_clean(m, t.seq), Error);
    }

    TEST_CASE("find_twist") {
        for (int type = 1; type <= 3; ++type) {
            auto core = load_core(type);
            CAPTURE(type);
            auto found = twists::find_twist(core.twist.structure, core.length(), 2, 200);
            REQUIRE(found);
            CHECK(found->length() == core.length());
            twists::Core c;
            c.twist = {core.twist.structure, *found};
            c.type = type;
            CHECK(twists::validate_core(c).valid());
        }
        Structure anti;
        anti.set_signature(Signature::graph());
        anti.root = anti.add_element("r");
        for (int x = 0; x < 8; ++x) anti.parent[anti.add_element("v" + std::to_string(x))] = anti.root;
        CHECK_FALSE(twists::find_twist(anti, 6, 2, 200));
        auto big = twists::build_twist(load_core(1), 3);
        auto sub = twists::find_twist(big.structure, 6, 2, 200);
        REQUIRE(sub);
        auto recovered = twists::core_of({big.structure, *sub});
        CHECK(twists::validate_core(recovered).valid());
        try {
            twists::find_twist(big.structure, 6, 2, 10);
            FAIL("bound not enforced");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::size_bound_exceeded);
        }
    }
}
