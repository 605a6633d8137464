#include "tows/racks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tows/minors.hpp"

namespace tows::racks {

namespace {

void check_parts(const OrderedBipartite& g) {
    if (g.a.empty() || g.b.empty()) throw Error(ErrorKind::invalid_spec, "both parts must be non-empty");
}

void check_layers(const std::set<int>& layers, int lo, int hi, const char* what) {
    for (int i : layers)
        if (i < lo || i > hi)
            throw Error(ErrorKind::invalid_spec, std::string(what) + " layer " + std::to_string(i) + " outside " +
                                                     std::to_string(lo) + ".." + std::to_string(hi));
}

// h-subdivision with a root; layer[x] is the layer of element x (-1 for the root).
struct Subdivided {
    Structure m;
    std::vector<int> layer;
    std::vector<int> part_a, part_b;  // element ids in part order
};

Subdivided subdivided(const OrderedBipartite& g, int h) {
    check_parts(g);
    if (h < 0) throw Error(ErrorKind::invalid_spec, "length must be non-negative");
    Subdivided out;
    Structure& m = out.m;
    m.set_signature(Signature::graph());
    m.root = m.add_element("~root");
    out.layer.push_back(-1);
    auto add = [&](const std::string& name, int layer) {
        int id = m.add_element(name);
        out.layer.push_back(layer);
        return id;
    };
    for (const auto& x : g.a) out.part_a.push_back(add(x, 0));
    for (const auto& y : g.b) out.part_b.push_back(add(y, h + 1));
    for (auto [i, j] : g.edges) {
        int prev = out.part_a[i];
        for (int k = 1; k <= h; ++k) {
            int w = add(g.a[i] + "~" + g.b[j] + "~" + std::to_string(k), k);
            m.add_tuple(0, {prev, w});
            prev = w;
        }
        m.add_tuple(0, {prev, out.part_b[j]});
    }
    if (m.index.size() != static_cast<std::size_t>(m.size()))
        throw Error(ErrorKind::invalid_spec, "vertex names collide after subdivision");
    return out;
}

void connect_root(Subdivided& s, const std::set<int>& nr) {
    for (int x = 0; x < s.m.size(); ++x)
        if (x != s.m.root && nr.count(s.layer[x])) s.m.add_tuple(0, {s.m.root, x});
}

std::vector<std::set<int>> neighbour_sets(const Structure& m) {
    std::vector<std::set<int>> nb(m.size());
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        if (m.sig.symbols[s].arity != 2) continue;
        for (const Tuple& t : m.rels[s])
            if (t[0] != t[1]) {
                nb[t[0]].insert(t[1]);
                nb[t[1]].insert(t[0]);
            }
    }
    return nb;
}

int chain_extreme(const Structure& m, const std::vector<int>& xs, bool top) {
    for (int x : xs) {
        bool ok = true;
        for (int y : xs)
            if (y != x && !(top ? m.strictly_below(y, x) : m.strictly_below(x, y))) ok = false;
        if (ok) return x;
    }
    return -1;
}

// Provenance of a host element in terms of the (augmented) input graph.
struct Origin {
    enum Kind { part_x, part_y, edge } kind;
    int i = -1, j = -1;
};

}  // namespace

std::string RackSpec::text() const {
    auto list = [](const std::set<int>& s) {
        std::string out;
        for (int v : s) out += (out.empty() ? "" : ",") + std::to_string(v);
        return out.empty() ? std::string("-") : out;
    };
    return "h " + std::to_string(h) + " nr " + list(nr) + " ca " + list(ca) + " cb " + list(cb);
}

Structure grounding(const OrderedBipartite& g, const GroundingSpec& spec) {
    check_layers(spec.nr, 0, spec.h + 1, "root neighbourhood");
    Subdivided s = subdivided(g, spec.h);
    for (int x = 0; x < s.m.size(); ++x)
        if (x != s.m.root) s.m.parent[x] = s.m.root;
    connect_root(s, spec.nr);
    s.m.validate();
    return std::move(s.m);
}

Structure rack(const OrderedBipartite& g, const RackSpec& spec) {
    check_layers(spec.nr, 0, spec.h + 1, "root neighbourhood");
    check_layers(spec.ca, 1, spec.h + 1, "C_A");
    check_layers(spec.cb, 1, spec.h, "C_B");
    for (int i : spec.ca)
        if (spec.cb.count(i)) throw Error(ErrorKind::invalid_spec, "C_A and C_B intersect at " + std::to_string(i));
    Subdivided s = subdivided(g, spec.h);
    Structure& m = s.m;
    const int max_a = s.part_a.back(), max_b = s.part_b.back();
    for (int x = 0; x < m.size(); ++x) {
        if (x == m.root) continue;
        const int layer = s.layer[x];
        m.parent[x] = m.root;
        if (layer == 0) {
            auto it = std::find(s.part_a.begin(), s.part_a.end(), x);
            if (it != s.part_a.begin()) {
                m.parent[x] = *(it - 1);
                continue;
            }
        } else if (layer == spec.h + 1) {
            auto it = std::find(s.part_b.begin(), s.part_b.end(), x);
            if (it != s.part_b.begin()) {
                m.parent[x] = *(it - 1);
                continue;
            }
        }
        if (spec.ca.count(layer)) m.parent[x] = max_a;
        else if (spec.cb.count(layer)) m.parent[x] = max_b;
    }
    connect_root(s, spec.nr);
    m.validate();
    return std::move(m);
}

Predicates mark_predicates(const Structure& m) {
    Predicates p;
    const auto children = m.children();
    const auto nb = neighbour_sets(m);
    auto non_root_neighbours = [&](int x) {
        return static_cast<int>(nb[x].size()) - (nb[x].count(m.root) ? 1 : 0);
    };
    for (int x = 0; x < m.size(); ++x) {
        if (children[x].size() <= 2) p.small.insert(x);
        else p.big.insert(x);
        if (m.parent[x] == m.root) p.m.insert(x);
    }
    for (int x = 0; x < m.size(); ++x) {
        if (x == m.root || !p.big.count(m.parent[x])) continue;
        if (static_cast<int>(children[x].size()) + non_root_neighbours(x) == 2) p.regular.insert(x);
    }
    return p;
}

Structure host(const twists::Core& core, const OrderedBipartite& g) {
    auto report = twists::validate_core(core);
    if (!report.valid()) throw Error(ErrorKind::invalid_core, report.text());
    check_parts(g);
    const int h = core.length();
    const int na = static_cast<int>(g.a.size()), nb = static_cast<int>(g.b.size());

    if (core.type == 1) {
        const int n = std::max(na, nb);
        auto tw = twists::build_twist(core, n);
        std::vector<int> keep{tw.structure.root};
        std::set<std::string> xs, ys;
        for (int i = 0; i < na; ++i) {
            keep.push_back(tw.seq.guard_a[i]);
            xs.insert(tw.structure.names[tw.seq.guard_a[i]]);
        }
        for (auto [i, j] : g.edges)
            for (int s = 0; s < h; ++s) keep.push_back(tw.seq.meshes[s].at(i, j));
        for (int j = 0; j < nb; ++j) {
            keep.push_back(tw.seq.guard_b[j]);
            ys.insert(tw.structure.names[tw.seq.guard_b[j]]);
        }
        Structure out = induced(tw.structure, keep);
        out.marks.clear();
        for (int x = 0; x < out.size(); ++x) {
            if (out.parent[x] == out.root) out.marks["V"].insert(x);
            if (xs.count(out.names[x])) out.marks["X"].insert(x);
            if (ys.count(out.names[x])) out.marks["Y"].insert(x);
        }
        out.marks["D"];
        return out;
    }

    // Types 2 and 3 share the selection; type 3 first augments the input.
    OrderedBipartite in = g;
    std::vector<bool> aux_x(na, false), aux_y(nb, false);
    if (core.type == 3) {
        const auto& cs = core.twist.seq;
        const int top1 = chain_extreme(core.twist.structure, cs.meshes.front().cells, true);
        const int low_h = chain_extreme(core.twist.structure, cs.meshes.back().cells, false);
        const bool low_aux = top1 >= 0 && low_h >= 0 && core.twist.structure.strictly_below(top1, low_h);
        OrderedBipartite plus;
        std::vector<int> x_from;  // index into g.a, or -1 for a1 and -2 for a2
        if (low_aux) x_from = {-1, -2};
        for (int i = 0; i < na; ++i) x_from.push_back(i);
        if (!low_aux) {
            x_from.push_back(-1);
            x_from.push_back(-2);
        }
        for (int f : x_from) plus.a.push_back(f == -1 ? "~a1" : f == -2 ? "~a2" : g.a[f]);
        plus.b = g.b;
        plus.b.push_back("~b1");
        plus.b.push_back("~b2");
        aux_x.assign(plus.a.size(), false);
        aux_y.assign(plus.b.size(), false);
        std::vector<int> x_to(na);
        for (std::size_t k = 0; k < x_from.size(); ++k) {
            if (x_from[k] < 0) aux_x[k] = true;
            else x_to[x_from[k]] = static_cast<int>(k);
        }
        aux_y[nb] = aux_y[nb + 1] = true;
        for (auto [i, j] : g.edges) plus.add_edge(x_to[i], j);
        for (int k = 0; k < static_cast<int>(plus.a.size()); ++k)
            for (int j = 0; j < static_cast<int>(plus.b.size()); ++j)
                if (aux_x[k] || aux_y[j]) plus.add_edge(k, j);
        in = std::move(plus);
    }
    const int pa = static_cast<int>(in.a.size()), pb = static_cast<int>(in.b.size());
    const int n = std::max(pa, pb) + 1;
    auto tw = twists::build_twist(core, n);
    const auto& mus = tw.seq.meshes;
    std::vector<int> keep{tw.structure.root};
    std::map<std::string, Origin> origin;
    auto take = [&](int x, Origin o) {
        keep.push_back(x);
        origin[tw.structure.names[x]] = o;
    };
    for (int i = 0; i < pa; ++i) take(mus.front().at(i + 1, 0), {Origin::part_x, i, -1});
    for (auto [i, j] : in.edges)
        for (int s = 0; s < h; ++s) take(mus[s].at(i + 1, j + 1), {Origin::edge, i, j});
    for (int j = 0; j < pb; ++j) take(mus.back().at(0, j + 1), {Origin::part_y, -1, j});
    Structure out = induced(tw.structure, keep);
    out.marks.clear();
    auto& v_mark = out.marks["V"];
    auto& d_mark = out.marks["D"];
    auto& x_mark = out.marks["X"];
    auto& y_mark = out.marks["Y"];
    std::vector<Origin> org(out.size(), Origin{Origin::edge});
    for (int x = 0; x < out.size(); ++x) {
        if (x == out.root) continue;
        org[x] = origin.at(out.names[x]);
        if (org[x].kind == Origin::part_x && !aux_x[org[x].i]) x_mark.insert(x);
        if (org[x].kind == Origin::part_y && !aux_y[org[x].j]) y_mark.insert(x);
    }
    if (core.type == 2) {
        for (int x = 0; x < out.size(); ++x)
            if (out.parent[x] == out.root) v_mark.insert(x);
        return out;
    }
    const Predicates pred = mark_predicates(out);
    const auto nbs = neighbour_sets(out);
    auto non_root_neighbours = [&](int x) {
        return static_cast<int>(nbs[x].size()) - (nbs[x].count(out.root) ? 1 : 0);
    };
    for (int x = 0; x < out.size(); ++x) {
        if (x == out.root) continue;
        const int p = out.parent[x];
        const bool quiet = non_root_neighbours(x) == 0 && (pred.big.count(p) || non_root_neighbours(p) > 0);
        if (pred.regular.count(x) || quiet) v_mark.insert(x);
    }
    // Z: everything Shrink would fold into auxiliary part vertices or their paths.
    for (int x = 0; x < out.size(); ++x) {
        int rep = x;
        while (rep != out.root && !v_mark.count(rep)) rep = out.parent[rep];
        if (rep == out.root) continue;
        const Origin& o = org[rep];
        const bool aux = (o.kind == Origin::part_x && aux_x[o.i]) || (o.kind == Origin::part_y && aux_y[o.j]) ||
                         (o.kind == Origin::edge && (aux_x[o.i] || aux_y[o.j]));
        if (aux) d_mark.insert(x);
    }
    return out;
}

Calibration calibrate(const twists::Core& core) {
    Calibration cal;
    cal.is_rack = core.type == 3;
    OrderedBipartite probe;
    probe.a = {"x"};
    probe.b = {"y"};
    probe.add_edge(0, 0);
    Structure s = minors::shrink(host(core, probe));
    const auto& xm = s.mark("X");
    const auto& ym = s.mark("Y");
    if (xm.size() != 1 || ym.size() != 1) {
        cal.failure = "part vertices of the probe do not survive Shrink";
        return cal;
    }
    const int x = *xm.begin(), y = *ym.begin();
    const auto nb = neighbour_sets(s);
    std::vector<int> path{x};
    int prev = -1, cur = x;
    while (cur != y) {
        int next = -1;
        for (int w : nb[cur]) {
            if (w == s.root || w == prev) continue;
            if (next >= 0) {
                cal.failure = "probe result branches at " + s.names[cur];
                return cal;
            }
            next = w;
        }
        if (next < 0 || std::find(path.begin(), path.end(), next) != path.end()) {
            cal.failure = "probe result has no path between its part vertices";
            return cal;
        }
        prev = cur;
        cur = next;
        path.push_back(cur);
    }
    if (static_cast<int>(path.size()) != s.size() - 1) {
        cal.failure = "probe result has elements off the path";
        return cal;
    }
    const int hp = static_cast<int>(path.size()) - 2;
    cal.spec.h = hp;
    for (int k = 0; k <= hp + 1; ++k) {
        const int v = path[k];
        if (nb[v].count(s.root)) cal.spec.nr.insert(k);
        const int p = s.parent[v];
        if (p == s.root) continue;
        if (p == x && k >= 1) cal.spec.ca.insert(k);
        else if (p == y && k >= 1 && k <= hp) cal.spec.cb.insert(k);
        else {
            cal.failure = "layer " + std::to_string(k) + " hangs below " + s.names[p];
            return cal;
        }
    }
    if (!cal.is_rack && (!cal.spec.ca.empty() || !cal.spec.cb.empty())) {
        cal.failure = "grounding probe has non-root predecessors";
        return cal;
    }
    cal.ok = true;
    return cal;
}

std::string PipelineReport::text() const {
    std::ostringstream out;
    out << (calibration.is_rack ? "rack " : "grounding ") << calibration.spec.text() << '\n';
    if (!failure.empty()) out << "failure " << failure << '\n';
    out << "pipeline " << (ok ? "true" : "false") << '\n';
    return out.str();
}

PipelineReport verify_host(const Calibration& cal, const OrderedBipartite& g, const Structure& marked_host) {
    PipelineReport rep;
    rep.calibration = cal;
    if (!cal.ok) {
        rep.failure = "calibration: " + cal.failure;
        return rep;
    }
    Structure shrunk = minors::shrink(marked_host);
    Structure expected = cal.is_rack ? rack(g, cal.spec) : grounding(g, GroundingSpec{cal.spec.h, cal.spec.nr});
    rep.ok = isomorphic(shrunk, expected);
    if (!rep.ok)
        rep.failure = "shrink has " + std::to_string(shrunk.size()) + " elements, expected structure has " +
                      std::to_string(expected.size()) + ", not isomorphic";
    return rep;
}

PipelineReport verify_pipeline(const twists::Core& core, const OrderedBipartite& g) {
    return verify_host(calibrate(core), g, host(core, g));
}

}  // namespace tows::racks
