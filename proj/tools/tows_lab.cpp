#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "tows/acceptance.hpp"
#include "tows/derive.hpp"
#include "tows/io.hpp"
#include "tows/matroid.hpp"
#include "tows/minors.hpp"
#include "tows/racks.hpp"
#include "tows/sparsity.hpp"
#include "tows/twists.hpp"

#ifndef TOWS_DATA_DIR
#define TOWS_DATA_DIR "data"
#endif

namespace {

using namespace tows;

enum Exit { exit_ok = 0, exit_false = 1, exit_usage = 2, exit_bound = 3 };

struct Global {
    std::string format;
    std::uint64_t seed = 0;
};

Global global;

std::string emit(const Structure& m) {
    const auto& f = global.format;
    if (f.empty() || f == "tows") return io::write_tows(m);
    if (f == "json") return io::to_json(m) + "\n";
    if (f == "dot") return io::to_dot(m);
    if (f == "graph") return io::write_graph(graph_reduct(m));
    throw Error(ErrorKind::invalid_spec, "unknown format " + f);
}

std::string emit(const Graph& g) {
    const auto& f = global.format;
    if (f.empty() || f == "graph") return io::write_graph(g);
    if (f == "json") return io::to_json(g) + "\n";
    if (f == "dot") return io::to_dot(g);
    if (f == "tows") return io::write_tows(graph_to_structure(g));
    throw Error(ErrorKind::invalid_spec, "unknown format " + f);
}

std::string emit(const OrderedBipartite& g) {
    const auto& f = global.format;
    if (f.empty() || f == "obgraph") return io::write_obgraph(g);
    if (f == "json") return io::to_json(g) + "\n";
    return emit(g.graph());
}

std::string emit(const io::Document& d) {
    return std::visit([](const auto& x) { return emit(x); }, d);
}

// Structure view of any supported file: graphs get a fresh root, labelled files keep their structure.
Structure load_structure(const std::string& path) {
    std::string text = io::read_file(path);
    std::string h = io::header_of(text);
    if (h == "twist") return twists::parse_twist(text).structure;
    if (h == "core") return twists::parse_core(text).twist.structure;
    auto doc = io::parse_document(text);
    if (auto* m = std::get_if<Structure>(&doc)) return *m;
    if (auto* g = std::get_if<Graph>(&doc)) return graph_to_structure(*g);
    return graph_to_structure(std::get<OrderedBipartite>(doc).graph());
}

// Plain graph view: the E-reduct of a structure (root included).
Graph load_graph(const std::string& path) {
    auto doc = io::parse_document(io::read_file(path));
    if (auto* m = std::get_if<Structure>(&doc)) return graph_reduct(*m);
    if (auto* g = std::get_if<Graph>(&doc)) return *g;
    return std::get<OrderedBipartite>(doc).graph();
}

OrderedBipartite load_bipartite(const std::string& path) {
    auto doc = io::parse_document(io::read_file(path));
    if (auto* b = std::get_if<OrderedBipartite>(&doc)) return *b;
    if (auto* g = std::get_if<Graph>(&doc)) return bipartition(*g);
    throw Error(ErrorKind::invalid_spec, path + ": expected a graph or obgraph file");
}

twists::LabelledTwist load_twist(const std::string& path, const std::string& labels) {
    std::string text = io::read_file(path);
    if (!labels.empty()) {
        twists::LabelledTwist t;
        t.structure = load_structure(path);
        t.seq = twists::parse_labels(io::read_file(labels), t.structure);
        return t;
    }
    std::string h = io::header_of(text);
    if (h == "twist") return twists::parse_twist(text);
    if (h == "core") return twists::parse_core(text).twist;
    throw Error(ErrorKind::unlabeled_input, path + ": no layer labels (pass --labels)");
}

std::set<int> parse_int_list(const std::string& s) {
    std::set<int> out;
    if (s.empty() || s == "-") return out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.insert(v);
        } catch (const std::exception&) {
            throw Error(ErrorKind::invalid_spec, "not an integer list: " + s);
        }
    }
    return out;
}

int print_bool(bool v) {
    std::cout << (v ? "true" : "false") << '\n';
    return v ? exit_ok : exit_false;
}

std::set<int> mark_or_empty(const Structure& m, const std::string& name) { return m.mark(name); }

// `seq 1` then `merge KEEP GONE` lines over vertex names.
sparsity::ContractionSequence parse_sequence(const std::string& text, const Graph& g) {
    auto lines = io::tokenize(text);
    if (lines.empty() || lines[0].tokens[0] != "seq")
        throw Error(ErrorKind::parse, "expected 'seq 1' header");
    sparsity::ContractionSequence seq;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& t = lines[i].tokens;
        if (t.size() != 3 || t[0] != "merge")
            throw Error(ErrorKind::parse, "line " + std::to_string(lines[i].number) + ": expected 'merge KEEP GONE'");
        seq.emplace_back(g.id(t[1]), g.id(t[2]));
    }
    return seq;
}

std::string write_sequence(const sparsity::ContractionSequence& seq, const Graph& g) {
    std::string out = "seq 1\n";
    for (auto [a, b] : seq) out += "merge " + g.names[a] + " " + g.names[b] + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tows-lab: tree-ordered weakly sparse structures toolkit"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"tows", "graph", "obgraph", "json", "dot"}));
    app.add_option("--seed", global.seed, "Seed for randomised commands")->capture_default_str();

    std::function<int()> action;
    std::string file, file2, labels, marks, v_name = "V", d_name = "D", nr, ca, cb, sequence, data_dir = TOWS_DATA_DIR,
                                                                                       only;
    int n = 0, h = 0, order = 2, max_len = 1, t_param = -1, n_param = -1;
    bool twice = false, mark = false, general = false, all = false, induced_only = false, emit_marks = false;

    auto* validate = app.add_subcommand("validate", "Parse a file and check its invariants");
    validate->add_option("FILE", file)->required();
    validate->callback([&] {
        action = [&]() -> int {
            std::string text = io::read_file(file);
            std::string hdr = io::header_of(text);
            if (hdr == "core") {
                auto rep = twists::validate_core(twists::parse_core(text));
                std::cout << rep.text();
                return rep.valid() ? exit_ok : exit_false;
            }
            if (hdr == "twist") {
                auto t = twists::parse_twist(text);
                t.structure.validate();
                auto rep = twists::validate_twister(t.structure, t.seq);
                std::cout << rep.text();
                return rep.pass() ? exit_ok : exit_false;
            }
            auto doc = io::parse_document(text);
            if (auto* m = std::get_if<Structure>(&doc)) {
                m->validate();
                std::cout << "tows valid: " << m->size() << " elements\n";
            } else if (auto* g = std::get_if<Graph>(&doc)) {
                std::cout << "graph valid: " << g->size() << " vertices, " << g->edge_count() << " edges\n";
            } else {
                const auto& b = std::get<OrderedBipartite>(doc);
                std::cout << "obgraph valid: " << b.a.size() << "+" << b.b.size() << " vertices, " << b.edges.size()
                          << " edges\n";
            }
            return exit_ok;
        };
    });

    auto* tgaif = app.add_subcommand("tgaif", "Tree-ordered Gaifman graph");
    tgaif->add_option("FILE", file)->required();
    tgaif->callback([&] { action = [&]() -> int { std::cout << emit(derive::tgaif(load_structure(file))); return exit_ok; }; });

    auto* tinc = app.add_subcommand("tinc", "Tree-ordered incidence graph");
    tinc->add_option("FILE", file)->required();
    tinc->add_flag("--twice", twice, "Apply twice");
    tinc->add_flag("--mark", mark, "With --twice: add the decoding marks");
    tinc->callback([&] {
        action = [&]() -> int {
            Structure m = load_structure(file);
            if (twice && mark) std::cout << emit(derive::mark_tinc2(m));
            else if (twice) std::cout << emit(derive::tinc(derive::tinc(m)));
            else std::cout << emit(derive::tinc(m));
            return exit_ok;
        };
    });

    auto* decode = app.add_subcommand("decode", "Recover a structure from its marked double incidence graph");
    decode->add_option("FILE", file)->required();
    decode->callback([&] { action = [&]() -> int { std::cout << emit(derive::tinc_decode(load_structure(file))); return exit_ok; }; });

    auto* starify = app.add_subcommand("starify", "Starification along a marked set");
    starify->add_option("FILE", file)->required();
    starify->add_option("--marks", marks, "Mark playing the role of A, as NAME or A=NAME")->required();
    starify->callback([&] {
        action = [&]() -> int {
            std::string name = marks;
            if (auto eq = marks.find('='); eq != std::string::npos) {
                std::string left = marks.substr(0, eq), right = marks.substr(eq + 1);
                name = left == "A" ? right : left;
            }
            std::cout << emit(derive::starify(load_structure(file), name));
            return exit_ok;
        };
    });

    auto* lambda = app.add_subcommand("lambda", "Fundamental graph");
    lambda->add_option("FILE", file)->required();
    lambda->add_flag("--general", general, "Generalised fundamental graph for arbitrary signatures");
    lambda->callback([&] {
        action = [&]() -> int {
            Structure m = load_structure(file);
            auto f = general ? matroid::lambda_general(m) : matroid::lambda_graph(m);
            if (global.format == "dot" || global.format == "graph" || global.format == "json") std::cout << emit(f.as_graph());
            else std::cout << matroid::write_fund(f);
            return exit_ok;
        };
    });

    auto* shrink = app.add_subcommand("shrink", "Shrink along the marks carried by the file");
    shrink->add_option("FILE", file)->required();
    shrink->add_option("--v", v_name, "Survivor mark")->capture_default_str();
    shrink->add_option("--d", d_name, "Deletion mark")->capture_default_str();
    shrink->callback([&] {
        action = [&]() -> int { std::cout << emit(minors::shrink(load_structure(file), v_name, d_name)); return exit_ok; };
    });

    auto* sp = app.add_subcommand("sp", "Sparsification");
    sp->add_option("FILE", file)->required();
    sp->add_flag("--all", all, "Every marking, up to isomorphism");
    sp->callback([&] {
        action = [&]() -> int {
            Structure m = load_structure(file);
            if (!all) {
                std::set<int> v = m.marks.count("V") ? m.mark("V") : std::set<int>{};
                if (!m.marks.count("V"))
                    for (int x = 0; x < m.size(); ++x) v.insert(x);
                std::cout << emit(minors::sp(m, v, mark_or_empty(m, "D")));
                return exit_ok;
            }
            auto graphs = minors::sp_all(m);
            std::cout << "# " << graphs.size() << " graphs\n";
            for (const auto& g : graphs) std::cout << emit(g);
            return exit_ok;
        };
    });

    auto* minors_cmd = app.add_subcommand("minors", "Tree-ordered minors up to isomorphism");
    minors_cmd->add_option("FILE", file)->required();
    minors_cmd->add_flag("--induced-only", induced_only, "Only deletions and contractions");
    minors_cmd->callback([&] {
        action = [&]() -> int {
            Structure m = load_structure(file);
            auto list = induced_only ? minors::enum_cont(m) : minors::enum_minors(m);
            std::cout << "# " << list.size() << " structures\n";
            for (const auto& s : list) std::cout << emit(s);
            return exit_ok;
        };
    });

    auto* poset = app.add_subcommand("poset-check", "Minor poset against induced subgraphs of the fundamental graph");
    poset->add_option("FILE", file)->required();
    poset->callback([&] {
        action = [&]() -> int {
            auto r = minors::minor_poset_check(load_structure(file));
            std::cout << "minors " << r.minors << "\ninduced " << r.induced << '\n';
            if (!r.failure.empty()) std::cout << "failure " << r.failure << '\n';
            return print_bool(r.isomorphic);
        };
    });

    auto* twist = app.add_subcommand("twist", "Build the order-N twist of a core");
    twist->add_option("CORE", file)->required();
    twist->add_option("N", n)->required()->check(CLI::PositiveNumber);
    twist->callback([&] {
        action = [&]() -> int {
            auto t = twists::build_twist(twists::parse_core(io::read_file(file)), n);
            if (global.format.empty()) std::cout << twists::write_twist(t);
            else std::cout << emit(t.structure);
            return exit_ok;
        };
    });

    auto* core_of = app.add_subcommand("core-of", "Order-2 core of a labelled twist");
    core_of->add_option("FILE", file)->required();
    core_of->add_option("--labels", labels, "Labels file for an unlabelled structure");
    core_of->callback([&] {
        action = [&]() -> int { std::cout << twists::write_core(twists::core_of(load_twist(file, labels))); return exit_ok; };
    });

    auto* vt = app.add_subcommand("validate-twister", "Check twister properties and cleanliness");
    vt->add_option("FILE", file)->required();
    vt->add_option("--labels", labels, "Labels file for an unlabelled structure");
    vt->callback([&] {
        action = [&]() -> int {
            auto t = load_twist(file, labels);
            bool small = t.seq.rows() == 2 && t.seq.cols() == 2;
            auto rep = twists::validate_twister(t.structure, t.seq);
            if (!small) std::cout << rep.text();
            if (!small && !rep.pass()) return exit_false;
            auto clean = twists::validate_clean(t.structure, t.seq);
            std::cout << clean.text();
            return small ? (clean.clean ? exit_ok : exit_false) : exit_ok;
        };
    });

    auto* ft = app.add_subcommand("find-twist", "Search a clean twister");
    ft->add_option("FILE", file)->required();
    ft->add_option("--order", order, "Order |I| = |J|")->capture_default_str();
    ft->add_option("--max-len", max_len, "Maximum length")->required();
    ft->callback([&] {
        action = [&]() -> int {
            twists::LabelledTwist t;
            t.structure = load_structure(file);
            auto found = twists::find_twist(t.structure, max_len, order);
            if (!found) {
                std::cout << "none\n";
                return exit_false;
            }
            t.seq = *found;
            std::cout << twists::write_twist(t);
            return exit_ok;
        };
    });

    auto* grounding = app.add_subcommand("grounding", "Grounding of a bipartite graph");
    grounding->add_option("GRAPH", file)->required();
    grounding->add_option("--h", h, "Subdivision length")->required()->check(CLI::NonNegativeNumber);
    grounding->add_option("--nr", nr, "Layers adjacent to the root, comma separated");
    grounding->callback([&] {
        action = [&]() -> int {
            std::cout << emit(racks::grounding(load_bipartite(file), racks::GroundingSpec{h, parse_int_list(nr)}));
            return exit_ok;
        };
    });

    auto* rack = app.add_subcommand("rack", "Rack of an ordered bipartite graph");
    rack->add_option("OBGRAPH", file)->required();
    rack->add_option("--h", h, "Subdivision length")->required()->check(CLI::NonNegativeNumber);
    rack->add_option("--nr", nr, "Layers adjacent to the root");
    rack->add_option("--ca", ca, "Layers hung below max A");
    rack->add_option("--cb", cb, "Layers hung below max B");
    rack->callback([&] {
        action = [&]() -> int {
            racks::RackSpec spec{h, parse_int_list(nr), parse_int_list(ca), parse_int_list(cb)};
            std::cout << emit(racks::rack(load_bipartite(file), spec));
            return exit_ok;
        };
    });

    auto* host = app.add_subcommand("host", "Host structure of a graph inside the twist of a core");
    host->add_option("CORE", file)->required();
    host->add_option("GRAPH", file2)->required();
    host->add_flag("--emit-marks", emit_marks, "Keep the V and D marks used by shrink");
    host->callback([&] {
        action = [&]() -> int {
            Structure m = racks::host(twists::parse_core(io::read_file(file)), load_bipartite(file2));
            if (!emit_marks) m.marks.clear();
            std::cout << emit(m);
            return exit_ok;
        };
    });

    auto* vp = app.add_subcommand("verify-pipeline", "Shrink of the marked host against the grounding or rack");
    vp->add_option("CORE", file)->required();
    vp->add_option("GRAPH", file2)->required();
    vp->callback([&] {
        action = [&]() -> int {
            auto r = racks::verify_pipeline(twists::parse_core(io::read_file(file)), load_bipartite(file2));
            std::cout << r.text();
            return r.ok ? exit_ok : exit_false;
        };
    });

    auto* check = app.add_subcommand("check", "Sparsity oracles");
    check->require_subcommand(1);
    auto* biclique = check->add_subcommand("biclique", "Biclique number, or whether K_{T,T} is a subgraph");
    biclique->add_option("FILE", file)->required();
    biclique->add_option("--t", t_param, "Threshold");
    biclique->callback([&] {
        action = [&]() -> int {
            int b = sparsity::biclique_number(load_graph(file));
            if (t_param < 0) {
                std::cout << b << '\n';
                return exit_ok;
            }
            return print_bool(b >= t_param);
        };
    });
    auto* subdiv = check->add_subcommand("subdivision", "Induced exact subdivision of a clique");
    subdiv->add_option("FILE", file)->required();
    subdiv->add_option("--t", t_param, "Subdivision vertices per edge")->required();
    subdiv->add_option("--n", n_param, "Clique size")->required();
    subdiv->callback([&] {
        action = [&]() -> int { return print_bool(sparsity::induced_clique_subdivision(load_graph(file), t_param, n_param)); };
    });
    auto* minor = check->add_subcommand("minor", "Minor containment of H in G");
    minor->add_option("H", file)->required();
    minor->add_option("G", file2)->required();
    minor->callback([&] { action = [&]() -> int { return print_bool(sparsity::is_minor(load_graph(file), load_graph(file2))); }; });

    auto* tww = app.add_subcommand("tww", "Exact twin-width, or the red width of a given sequence");
    tww->add_option("FILE", file)->required();
    tww->add_option("--sequence", sequence, "Contraction sequence file");
    tww->callback([&] {
        action = [&]() -> int {
            Graph g = load_graph(file);
            if (!sequence.empty()) {
                std::cout << "red-width " << sparsity::red_width(g, parse_sequence(io::read_file(sequence), g)) << '\n';
                return exit_ok;
            }
            auto r = sparsity::tww_exact(g);
            std::cout << "twin-width " << r.width << '\n' << write_sequence(r.sequence, g);
            return exit_ok;
        };
    });

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_option("--data", data_dir, "Directory holding the sample cores")->capture_default_str();
    selftest->add_option("--only", only, "Comma separated criterion ids");
    selftest->callback([&] {
        action = [&]() -> int {
            acceptance::Options opt;
            opt.data_dir = data_dir;
            opt.seed = global.seed;
            opt.only = parse_int_list(only);
            auto results = acceptance::run(opt);
            bool ok = true;
            for (const auto& r : results) {
                std::cerr << r.line() << '\n';
                ok = ok && r.pass();
            }
            std::cout << acceptance::summary_json(results) << '\n';
            return ok ? exit_ok : exit_false;
        };
    });

    auto* convert = app.add_subcommand("convert", "Re-emit a file in another format");
    convert->add_option("FILE", file)->required();
    convert->callback([&] {
        action = [&]() -> int {
            std::string text = io::read_file(file);
            std::string hdr = io::header_of(text);
            if (hdr == "twist" || hdr == "core") {
                std::cout << emit(load_structure(file));
                return exit_ok;
            }
            std::cout << emit(io::parse_document(text));
            return exit_ok;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return exit_usage;
    }
    try {
        return action ? action() : exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::size_bound_exceeded ? exit_bound : exit_false;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_false;
    }
}
