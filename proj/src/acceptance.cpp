#include "tows/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "tows/derive.hpp"
#include "tows/generate.hpp"
#include "tows/io.hpp"
#include "tows/matroid.hpp"
#include "tows/minors.hpp"
#include "tows/racks.hpp"
#include "tows/sparsity.hpp"
#include "tows/twists.hpp"

namespace tows::acceptance {

namespace {

using generate::Rng;

struct Outcome {
    bool holds = true;
    std::string detail;
};

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Graph complete_bipartite(int t) {
    OrderedBipartite g;
    for (int i = 1; i <= t; ++i) {
        g.a.push_back("a" + std::to_string(i));
        g.b.push_back("b" + std::to_string(i));
    }
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) g.add_edge(i, j);
    return g.graph();
}

OrderedBipartite ordered_complete_bipartite(int t) {
    OrderedBipartite g;
    for (int i = 1; i <= t; ++i) {
        g.a.push_back("a" + std::to_string(i));
        g.b.push_back("b" + std::to_string(i));
    }
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) g.add_edge(i, j);
    return g;
}

std::vector<twists::Core> load_cores(const std::string& dir) {
    std::vector<twists::Core> out;
    for (const char* f : {"core_t1.core", "core_t2.core", "core_t3.core"})
        out.push_back(twists::parse_core(io::read_file(dir + "/" + f)));
    return out;
}

// ---------------------------------------------------------------- 1

Outcome subdivision_identity(Rng&) {
    Outcome o;
    int checked = 0;
    for (int h = 0; h <= 2; ++h)
        for (int t = 2; t <= 3; ++t) {
            racks::GroundingSpec spec{h, {}};
            Structure gr = racks::grounding(ordered_complete_bipartite(t), spec);
            Graph lam = matroid::lambda_graph(gr).as_graph();
            Graph expected = subdivide(complete_bipartite(t), 2 * h + 1);
            ++checked;
            if (!graph_isomorphic(lam, expected)) {
                o.holds = false;
                o.detail = "h=" + std::to_string(h) + " t=" + std::to_string(t) + " not isomorphic";
                return o;
            }
        }
    o.detail = std::to_string(checked) + " (h,t) pairs isomorphic";
    return o;
}

// ---------------------------------------------------------------- 2

Outcome incidence_subdivision(Rng& rng) {
    Outcome o;
    for (int k = 0; k < 30; ++k) {
        Graph g = generate::random_graph(rng, uniform(rng, 1, 8), 0.4);
        Structure m = graph_to_structure(g);
        Graph inc = derive::incidence(m);
        std::vector<int> keep;
        for (int v = 0; v < inc.size(); ++v)
            if (v != m.root) keep.push_back(v);
        if (!graph_isomorphic(graph_induced(inc, keep), subdivide(g, 1))) {
            o.holds = false;
            o.detail = "instance " + std::to_string(k) + " differs";
            return o;
        }
    }
    o.detail = "30 random graphs";
    return o;
}

// ---------------------------------------------------------------- 3

Outcome decode_round_trip(Rng& rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        Structure m = generate::random_structure(rng, uniform(rng, 1, 8), 3);
        Structure back = derive::tinc_decode(derive::mark_tinc2(m));
        if (!isomorphic(back, m)) {
            o.holds = false;
            o.detail = "instance " + std::to_string(k) + " not recovered";
            return o;
        }
    }
    o.detail = "50 random structures";
    return o;
}

// ---------------------------------------------------------------- 4

Outcome poset_bridge(Rng& rng) {
    Outcome o;
    int minors_total = 0;
    for (int k = 0; k < 20; ++k) {
        Structure m = generate::random_tows_graph(rng, uniform(rng, 1, 5), uniform(rng, 0, 3));
        auto r = minors::minor_poset_check(m);
        minors_total += r.minors;
        if (!r.isomorphic) {
            o.holds = false;
            o.detail = "instance " + std::to_string(k) + ": " + r.failure;
            return o;
        }
    }
    o.detail = "20 random TOWS graphs, " + std::to_string(minors_total) + " labelled minors";
    return o;
}

// ---------------------------------------------------------------- 5

// z-neighbourhoods as sets of cover names; empty ones dropped.
std::vector<std::set<std::string>> z_sets(const matroid::FundamentalGraph& f) {
    std::vector<std::set<std::string>> out;
    for (const auto& row : f.nbhd) {
        std::set<std::string> s;
        for (std::size_t y = 0; y < row[0].size(); ++y)
            if (row[0].test(y)) s.insert(f.part_y[y]);
        if (!s.empty()) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::set<std::string>> dedup(std::vector<std::set<std::string>> v) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Outcome fundamental_identities(Rng& rng) {
    Outcome o;
    int covers = 0, edges = 0;
    for (int k = 0; k < 30; ++k) {
        Structure m = generate::random_tows_graph(rng, uniform(rng, 2, 10), uniform(rng, 0, 12));
        auto lam = matroid::lambda_graph(m);
        for (int v = 0; v < m.size(); ++v) {
            if (v == m.root) continue;
            int y = static_cast<int>(std::find(lam.part_y.begin(), lam.part_y.end(), "y:" + m.names[v]) - lam.part_y.begin());
            auto contracted = matroid::lambda_graph(minors::contract_cover(m, m.parent[v], v));
            auto removed = lam.without_y(y);
            ++covers;
            if (z_sets(contracted) != dedup(z_sets(removed)) || contracted.part_y != removed.part_y) {
                o.holds = false;
                o.detail = "instance " + std::to_string(k) + ": contraction of " + m.names[v];
                return o;
            }
        }
        int z = 0;
        for (const Tuple& t : std::vector<Tuple>(m.rels[0].begin(), m.rels[0].end())) {
            auto lhs = matroid::lambda_graph(minors::delete_tuple(m, 0, t));
            auto rhs = lam.without_z(z++);
            ++edges;
            if (z_sets(lhs) != z_sets(rhs) || lhs.part_y != rhs.part_y) {
                o.holds = false;
                o.detail = "instance " + std::to_string(k) + ": deletion of " + m.names[t[0]] + m.names[t[1]];
                return o;
            }
        }
    }
    o.detail = std::to_string(covers) + " contractions, " + std::to_string(edges) + " deletions";
    return o;
}

// ---------------------------------------------------------------- 6

Outcome twist_machinery(const std::vector<twists::Core>& cores) {
    Outcome o;
    std::ostringstream sizes;
    for (std::size_t c = 0; c < cores.size(); ++c) {
        const auto& core = cores[c];
        const int h = core.length();
        for (int n = 2; n <= 5; ++n) {
            auto t = twists::build_twist(core, n);
            auto clean = twists::validate_clean(t.structure, t.seq);
            int expected = h * n * n + (core.type == 1 ? 2 * n : 0) + 1;
            auto back = twists::core_of(t);
            std::string where = "core t" + std::to_string(c + 1) + " n=" + std::to_string(n);
            if (!clean.clean || clean.preclean_type != core.type) {
                o.holds = false;
                o.detail = where + " not clean of type " + std::to_string(core.type);
                return o;
            }
            if (t.structure.size() != expected) {
                o.holds = false;
                o.detail = where + " size " + std::to_string(t.structure.size()) + " != " + std::to_string(expected);
                return o;
            }
            if (back.type != core.type || !isomorphic(back.twist.structure, core.twist.structure)) {
                o.holds = false;
                o.detail = where + " core_of not isomorphic to the core";
                return o;
            }
            if (n == 5) sizes << (c ? ", " : "") << "t" << c + 1 << ":" << t.structure.size();
        }
    }
    o.detail = "n=2..5 clean, core_of round trips; |tau[5]| " + sizes.str();
    return o;
}

// ---------------------------------------------------------------- 7

Outcome pipeline(Rng& rng, const std::vector<twists::Core>& cores) {
    Outcome o;
    int total = 0;
    std::ostringstream specs;
    for (std::size_t c = 0; c < cores.size(); ++c) {
        const auto& core = cores[c];
        auto cal = racks::calibrate(core);
        if (!cal.ok) {
            o.holds = false;
            o.detail = "core t" + std::to_string(c + 1) + " calibration: " + cal.failure;
            return o;
        }
        specs << (c ? "; " : "") << "t" << c + 1 << (cal.is_rack ? " rack " : " grounding ") << cal.spec.text();
        auto check = [&](const OrderedBipartite& g, const std::string& label) {
            ++total;
            auto r = racks::verify_host(cal, g, racks::host(core, g));
            if (!r.ok) {
                o.holds = false;
                o.detail = "core t" + std::to_string(c + 1) + " " + label + ": " + r.failure;
            }
            return r.ok;
        };
        for (int na = 1; na <= 3; ++na)
            for (int nb = 1; nb <= 3; ++nb) {
                auto all = generate::all_bipartite(na, nb);
                for (std::size_t mask = 0; mask < all.size(); ++mask)
                    if (!check(all[mask], std::to_string(na) + "x" + std::to_string(nb) + " mask " + std::to_string(mask)))
                        return o;
            }
        if (core.type == 3)
            for (int k = 0; k < 20; ++k) {
                auto g = generate::random_ordered_bipartite(rng, uniform(rng, 1, 4), uniform(rng, 1, 4), 0.5);
                if (!check(g, "random ordered instance " + std::to_string(k))) return o;
            }
    }
    o.detail = std::to_string(total) + " inputs; " + specs.str();
    return o;
}

// ---------------------------------------------------------------- 8

Outcome cont_algebra(Rng&) {
    Outcome o;
    auto all = generate::all_small_tows_graphs(5, 2);
    for (const auto& m : all) {
        auto cont = minors::enum_cont(m);
        if (!minors::same_classes(minors::cont_of(cont), cont)) {
            o.holds = false;
            o.detail = "Cont(Cont(M)) != Cont(M) on\n" + io::write_tows(m);
            return o;
        }
        if (!minors::same_classes(minors::mon_of(cont), minors::cont_of(minors::mon(m)))) {
            o.holds = false;
            o.detail = "Mon(Cont(M)) != Cont(Mon(M)) on\n" + io::write_tows(m);
            return o;
        }
    }
    o.detail = std::to_string(all.size()) + " TOWS graphs up to isomorphism";
    return o;
}

// ---------------------------------------------------------------- 9

Outcome sp_soundness(Rng& rng) {
    Outcome o;
    int outputs = 0;
    for (int k = 0; k < 10; ++k) {
        Graph g = generate::random_graph(rng, uniform(rng, 3, 7), 0.45);
        Structure m = generate::spanning_tree_ordering(rng, g);
        Structure flat = m;
        for (int x = 0; x < m.size(); ++x)
            if (x != m.root) flat.add_tuple(0, {x, m.parent[x]});
        Graph host = graph_reduct(flat);
        for (const Graph& s : minors::sp_all(m)) {
            ++outputs;
            if (!sparsity::is_minor(s, host)) {
                o.holds = false;
                o.detail = "instance " + std::to_string(k) + ": output " + io::write_graph(s) + " is not a minor";
                return o;
            }
        }
    }
    o.detail = "10 spanning-tree orderings, " + std::to_string(outputs) + " Sp outputs";
    return o;
}

// ---------------------------------------------------------------- 10

// Pairs of disjoint equal-size vertex sets, every cross pair adjacent.
int naive_biclique(const Graph& g) {
    const int n = g.size();
    std::vector<unsigned> adj(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        for (int w : g.adj[v]) adj[v] |= 1u << w;
    int best = 0;
    for (unsigned s = 1; s < (1u << n); ++s)
        for (unsigned t = 1; t < (1u << n); ++t) {
            if (s & t) continue;
            int size = __builtin_popcount(s);
            if (size != __builtin_popcount(t) || size <= best) continue;
            bool complete = true;
            for (int v = 0; v < n && complete; ++v)
                if (s >> v & 1) complete = (adj[v] & t) == t;
            if (complete) best = size;
        }
    return best;
}

Outcome oracle_agreement(Rng& rng) {
    Outcome o;
    for (int k = 0; k < 30; ++k) {
        Graph g = generate::random_graph(rng, uniform(rng, 1, 10), std::uniform_real_distribution<double>(0.2, 0.8)(rng));
        int fast = sparsity::biclique_number(g), slow = naive_biclique(g);
        if (fast != slow) {
            o.holds = false;
            o.detail = "biclique " + std::to_string(fast) + " vs naive " + std::to_string(slow);
            return o;
        }
    }
    std::vector<int> widths;
    for (int k = 0; k < 20; ++k) {
        bool cograph = k < 10;
        Graph g = cograph ? generate::random_cograph(rng, uniform(rng, 1, 7))
                          : generate::random_graph(rng, uniform(rng, 2, 7), 0.5);
        auto tw = sparsity::tww_exact(g);
        int rw = sparsity::red_width(g, tw.sequence);
        if (cograph && tw.width != 0) {
            o.holds = false;
            o.detail = "cograph with twin-width " + std::to_string(tw.width);
            return o;
        }
        if (rw != tw.width) {
            o.holds = false;
            o.detail = "red width " + std::to_string(rw) + " of the optimal sequence vs " + std::to_string(tw.width);
            return o;
        }
        if (!cograph) widths.push_back(tw.width);
    }
    std::ostringstream w;
    for (std::size_t i = 0; i < widths.size(); ++i) w << (i ? "," : "") << widths[i];
    o.detail = "30 biclique checks, 10 cographs of width 0, random widths " + w.str();
    return o;
}

// ---------------------------------------------------------------- 11

struct MeshPair {
    const Structure* m;
    twists::Mesh a, b;
};

twists::Mesh permute(const twists::Mesh& mu, const std::vector<int>& rows, const std::vector<int>& cols) {
    return mu.sub(rows, cols);
}

bool regular_pair_of_regular_meshes(const MeshPair& p) {
    return twists::pair_class(*p.m, p.a, p.b).regular && twists::pair_class(*p.m, p.a, p.a).regular &&
           twists::pair_class(*p.m, p.b, p.b).regular;
}

Outcome mesh_trichotomy(Rng& rng, const std::vector<twists::Core>& cores) {
    Outcome o;
    std::vector<twists::LabelledTwist> hosts;
    for (const auto& c : cores)
        for (int n : {4, 5}) hosts.push_back(twists::build_twist(c, n));

    // Four or more indices per side: with three, the interior of I or J is a single
    // index and any equal-index partner layer serves as a vertical guard.
    auto pick_indices = [&](int n, bool shuffled) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(static_cast<std::size_t>(uniform(rng, 4, n)));
        if (!shuffled) {
            std::sort(idx.begin(), idx.end());
            if (uniform(rng, 0, 1)) std::reverse(idx.begin(), idx.end());
        }
        return idx;
    };

    int exactly_one = 0, several = 0, none = 0, attempts = 0, from_twists = 0, from_labelings = 0;
    std::string first_several, first_none;
    while (exactly_one + several + none < 200 && attempts < 200000) {
        ++attempts;
        bool labeling = attempts % 2 == 0;
        const auto& t = hosts[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(hosts.size()) - 1))];
        const auto& ms = t.seq.meshes;
        int s = uniform(rng, 0, static_cast<int>(ms.size()) - 1);
        int u = uniform(rng, 0, static_cast<int>(ms.size()) - 1);
        // Twist source: monotone index subsets; labeling source: arbitrary injective relabelings.
        auto rows = pick_indices(ms[s].rows, labeling);
        auto cols = pick_indices(ms[s].cols, labeling);
        MeshPair p{&t.structure, permute(ms[s], rows, cols), permute(ms[u], rows, cols)};
        if (uniform(rng, 0, 1)) {
            p.a = p.a.transpose();
            p.b = p.b.transpose();
        }
        if (!regular_pair_of_regular_meshes(p)) continue;
        (labeling ? from_labelings : from_twists) += 1;
        const Structure& m = *p.m;
        bool pv = twists::is_pseudo_vertical(m, p.a) && twists::is_pseudo_vertical(m, p.b);
        bool ph = twists::is_pseudo_vertical(m, p.a.transpose()) && twists::is_pseudo_vertical(m, p.b.transpose());
        bool qh = twists::pair_class(m, p.a, p.b).quasi_homogeneous;
        int count = pv + ph + qh;
        std::string where = "layers (" + std::to_string(s + 1) + "," + std::to_string(u + 1) + ") in a structure of size " +
                            std::to_string(m.size());
        if (count == 1) ++exactly_one;
        else if (count == 0) {
            ++none;
            if (first_none.empty()) first_none = where;
        } else {
            ++several;
            if (first_several.empty())
                first_several = where + " [pv=" + std::to_string(pv) + " ph=" + std::to_string(ph) + " qh=" + std::to_string(qh) + "]";
        }
    }
    const int total = exactly_one + several + none;
    o.holds = total == 200 && exactly_one == 200;
    o.detail = std::to_string(total) + " pairs (" + std::to_string(from_twists) + " twist, " + std::to_string(from_labelings) +
               " relabelled): exactly one branch " + std::to_string(exactly_one) + ", several " + std::to_string(several) +
               ", none " + std::to_string(none);
    if (!first_several.empty()) o.detail += "; first with several: " + first_several;
    if (!first_none.empty()) o.detail += "; first with none: " + first_none;
    return o;
}

}  // namespace

std::string Result::line() const {
    char timing[64];
    std::snprintf(timing, sizeof timing, "(%.2f s / %.0f s)", seconds, budget);
    return std::string(pass() ? "[PASS] " : "[FAIL] ") + std::to_string(id) + " " + name + " " + timing + " " + detail;
}

std::vector<Result> run(const Options& opt) {
    struct Entry {
        int id;
        const char* name;
        double budget;
        std::function<Outcome(Rng&)> body;
    };
    std::vector<twists::Core> cores;
    auto need_cores = [&]() -> const std::vector<twists::Core>& {
        if (cores.empty()) cores = load_cores(opt.data_dir);
        return cores;
    };
    const std::vector<Entry> entries = {
        {1, "subdivision-identity", 1, subdivision_identity},
        {2, "incidence-subdivision", 1, incidence_subdivision},
        {3, "decode-round-trip", 5, decode_round_trip},
        {4, "minor-poset-bridge", 30, poset_bridge},
        {5, "fundamental-identities", 5, fundamental_identities},
        {6, "twist-machinery", 5, [&](Rng&) { return twist_machinery(need_cores()); }},
        {7, "pipeline", 60, [&](Rng& r) { return pipeline(r, need_cores()); }},
        {8, "cont-algebra", 60, cont_algebra},
        {9, "sp-soundness", 60, sp_soundness},
        {10, "oracle-agreement", 60, oracle_agreement},
        {11, "mesh-trichotomy", 10, [&](Rng& r) { return mesh_trichotomy(r, need_cores()); }},
    };
    std::vector<Result> out;
    for (const auto& e : entries) {
        if (!opt.only.empty() && !opt.only.count(e.id)) continue;
        Result r;
        r.id = e.id;
        r.name = e.name;
        r.budget = e.budget;
        Rng rng(opt.seed + static_cast<std::uint64_t>(e.id));
        auto start = std::chrono::steady_clock::now();
        try {
            Outcome o = e.body(rng);
            r.property_holds = o.holds;
            r.detail = o.detail;
        } catch (const std::exception& ex) {
            r.property_holds = false;
            r.detail = std::string("error: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

std::string summary_json(const std::vector<Result>& results) {
    nlohmann::json j;
    j["criteria"] = nlohmann::json::array();
    int passed = 0;
    for (const auto& r : results) {
        passed += r.pass();
        j["criteria"].push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"pass", r.pass()},
                                 {"property_holds", r.property_holds},
                                 {"seconds", r.seconds},
                                 {"budget", r.budget},
                                 {"detail", r.detail}});
    }
    j["passed"] = passed;
    j["total"] = results.size();
    return j.dump(2);
}

}  // namespace tows::acceptance
