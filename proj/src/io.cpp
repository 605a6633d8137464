#include "tows/io.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace tows::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + msg);
}

void expect_header(const std::vector<Line>& lines, const std::string& word) {
    if (lines.empty() || lines[0].tokens[0] != word)
        fail(lines.empty() ? 0 : lines[0].number, "expected header '" + word + " 1'");
    if (lines[0].tokens.size() != 2 || lines[0].tokens[1] != "1")
        fail(lines[0].number, "unsupported " + word + " version");
}

Symbol parse_symbol_spec(const std::string& tok, int line) {
    auto slash = tok.find('/');
    if (slash == std::string::npos || slash == 0) fail(line, "bad signature entry " + tok);
    Symbol s;
    s.name = tok.substr(0, slash);
    std::string rest = tok.substr(slash + 1);
    if (!rest.empty() && rest.back() == 's') {
        s.symmetric = true;
        rest.pop_back();
    }
    try {
        std::size_t used = 0;
        s.arity = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(rest);
    } catch (const std::exception&) {
        fail(line, "bad arity in " + tok);
    }
    return s;
}

std::string symbol_spec(const Symbol& s) {
    return s.name + "/" + std::to_string(s.arity) + (s.symmetric ? "s" : "");
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

Structure structure_from_json(const json& j) {
    Structure m;
    Signature sig;
    for (const auto& e : j.at("signature"))
        sig.add(e.at("name").get<std::string>(), e.at("arity").get<int>(), e.value("symmetric", false));
    m.set_signature(sig);
    for (const auto& u : j.at("universe")) m.add_element(u.get<std::string>());
    m.root = m.id(j.at("root").get<std::string>());
    for (const auto& [child, par] : j.at("parent").items()) m.parent[m.id(child)] = m.id(par.get<std::string>());
    for (const auto& [name, tuples] : j.at("relations").items()) {
        int s = m.symbol(name);
        for (const auto& t : tuples) {
            Tuple tup;
            for (const auto& e : t) tup.push_back(m.id(e.get<std::string>()));
            m.add_tuple(s, tup);
        }
    }
    if (j.contains("marks"))
        for (const auto& [name, elems] : j.at("marks").items()) {
            auto& set = m.marks[name];
            for (const auto& e : elems) set.insert(m.id(e.get<std::string>()));
        }
    m.validate();
    return m;
}

Graph graph_from_json(const json& j) {
    Graph g;
    for (const auto& u : j.at("universe")) g.add_vertex(u.get<std::string>());
    if (j.at("relations").contains("E"))
        for (const auto& t : j.at("relations").at("E"))
            g.add_edge(g.id(t.at(0).get<std::string>()), g.id(t.at(1).get<std::string>()));
    return g;
}

OrderedBipartite obgraph_from_json(const json& j) {
    OrderedBipartite ob;
    const auto& marks = j.at("marks");
    for (const auto& x : marks.at("A")) ob.a.push_back(x.get<std::string>());
    for (const auto& y : marks.at("B")) ob.b.push_back(y.get<std::string>());
    auto pos = [](const std::vector<std::string>& v, const std::string& s) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] == s) return static_cast<int>(i);
        throw Error(ErrorKind::element_not_found, s);
    };
    if (j.at("relations").contains("E"))
        for (const auto& t : j.at("relations").at("E"))
            ob.add_edge(pos(ob.a, t.at(0).get<std::string>()), pos(ob.b, t.at(1).get<std::string>()));
    return ob;
}

}  // namespace

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> out;
    int no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++no;
        auto hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::istringstream in{std::string(raw)};
        Line line{no, {}};
        for (std::string tok; in >> tok;) line.tokens.push_back(tok);
        if (!line.tokens.empty()) out.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return out;
}

Structure parse_tows_lines(const std::vector<Line>& lines) {
    expect_header(lines, "tows");
    Structure m;
    Signature sig;
    bool sig_done = false;
    std::optional<std::string> root;
    auto ensure_sig = [&]() {
        if (!sig_done) {
            m.set_signature(sig);
            sig_done = true;
        }
    };
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const auto& t = l.tokens;
        const std::string& kw = t[0];
        try {
            if (kw == "signature") {
                if (sig_done) fail(l.number, "signature after relations");
                for (std::size_t k = 1; k < t.size(); ++k) {
                    Symbol s = parse_symbol_spec(t[k], l.number);
                    sig.add(s.name, s.arity, s.symmetric);
                }
            } else if (kw == "universe") {
                for (std::size_t k = 1; k < t.size(); ++k) m.add_element(t[k]);
            } else if (kw == "root") {
                if (t.size() != 2) fail(l.number, "root takes one element");
                root = t[1];
            } else if (kw == "parent") {
                if (t.size() != 3) fail(l.number, "parent takes child and parent");
                int c = m.id(t[1]);
                if (m.parent[c] != -1) fail(l.number, "second parent for " + t[1]);
                m.parent[c] = m.id(t[2]);
            } else if (kw == "rel") {
                ensure_sig();
                if (t.size() < 2) fail(l.number, "rel needs a symbol");
                int s = m.symbol(t[1]);
                Tuple tup;
                for (std::size_t k = 2; k < t.size(); ++k) tup.push_back(m.id(t[k]));
                m.add_tuple(s, tup);
            } else if (kw == "mark") {
                if (t.size() < 2) fail(l.number, "mark needs a predicate");
                auto& set = m.marks[t[1]];
                for (std::size_t k = 2; k < t.size(); ++k) set.insert(m.id(t[k]));
            } else {
                fail(l.number, "unknown keyword " + kw);
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::parse) throw;
            fail(l.number, e.what());
        }
    }
    ensure_sig();
    if (!root) fail(lines[0].number, "missing root line");
    m.root = m.id(*root);
    if (m.parent[m.root] != -1) fail(lines[0].number, "root has a parent line");
    m.validate();
    return m;
}

Structure parse_tows(std::string_view text) { return parse_tows_lines(tokenize(text)); }

std::string write_tows(const Structure& m) {
    std::ostringstream out;
    out << "tows 1\n";
    out << "signature";
    for (const auto& s : m.sig.symbols) out << ' ' << symbol_spec(s);
    out << "\nuniverse";
    for (const auto& n : m.names) out << ' ' << n;
    out << "\nroot " << m.names[m.root] << '\n';
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) out << "parent " << m.names[x] << ' ' << m.names[m.parent[x]] << '\n';
    for (std::size_t s = 0; s < m.rels.size(); ++s)
        for (const Tuple& t : m.rels[s]) {
            out << "rel " << m.sig.symbols[s].name;
            for (int e : t) out << ' ' << m.names[e];
            out << '\n';
        }
    for (const auto& [name, set] : m.marks) {
        out << "mark " << name;
        for (int e : set) out << ' ' << m.names[e];
        out << '\n';
    }
    return out.str();
}

Graph parse_graph(std::string_view text) {
    auto lines = tokenize(text);
    expect_header(lines, "graph");
    Graph g;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        try {
            if (l.tokens[0] == "universe") {
                for (std::size_t k = 1; k < l.tokens.size(); ++k) g.add_vertex(l.tokens[k]);
            } else if (l.tokens[0] == "edge") {
                if (l.tokens.size() != 3) fail(l.number, "edge takes two vertices");
                int u = g.id(l.tokens[1]), v = g.id(l.tokens[2]);
                if (u == v) fail(l.number, "loop edge");
                g.add_edge(u, v);
            } else {
                fail(l.number, "unknown keyword " + l.tokens[0]);
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::parse) throw;
            fail(l.number, e.what());
        }
    }
    return g;
}

std::string write_graph(const Graph& g) {
    std::ostringstream out;
    out << "graph 1\nuniverse";
    for (const auto& n : g.names) out << ' ' << n;
    out << '\n';
    for (auto [u, v] : g.edges()) out << "edge " << g.names[u] << ' ' << g.names[v] << '\n';
    return out.str();
}

OrderedBipartite parse_obgraph(std::string_view text) {
    auto lines = tokenize(text);
    expect_header(lines, "obgraph");
    OrderedBipartite ob;
    std::unordered_map<std::string, int> in_a, in_b;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const auto& t = l.tokens;
        if (t[0] == "partA" || t[0] == "partB") {
            bool is_a = t[0] == "partA";
            for (std::size_t k = 1; k < t.size(); ++k) {
                if (in_a.count(t[k]) || in_b.count(t[k])) fail(l.number, "duplicate vertex " + t[k]);
                auto& part = is_a ? ob.a : ob.b;
                (is_a ? in_a : in_b)[t[k]] = static_cast<int>(part.size());
                part.push_back(t[k]);
            }
        } else if (t[0] == "edge") {
            if (t.size() != 3) fail(l.number, "edge takes two vertices");
            auto ia = in_a.find(t[1]);
            auto ib = in_b.find(t[2]);
            if (ia == in_a.end() || ib == in_b.end()) {
                ia = in_a.find(t[2]);
                ib = in_b.find(t[1]);
            }
            if (ia == in_a.end() || ib == in_b.end()) fail(l.number, "edge must join partA and partB");
            ob.add_edge(ia->second, ib->second);
        } else {
            fail(l.number, "unknown keyword " + t[0]);
        }
    }
    return ob;
}

std::string write_obgraph(const OrderedBipartite& g) {
    std::ostringstream out;
    out << "obgraph 1\npartA";
    for (const auto& x : g.a) out << ' ' << x;
    out << "\npartB";
    for (const auto& y : g.b) out << ' ' << y;
    out << '\n';
    for (auto [i, j] : g.edges) out << "edge " << g.a[i] << ' ' << g.b[j] << '\n';
    return out.str();
}

std::string to_json(const Structure& m) {
    json j;
    j["version"] = 1;
    j["kind"] = "tows";
    j["signature"] = json::array();
    for (const auto& s : m.sig.symbols)
        j["signature"].push_back({{"name", s.name}, {"arity", s.arity}, {"symmetric", s.symmetric}});
    j["universe"] = m.names;
    j["root"] = m.names[m.root];
    j["parent"] = json::object();
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) j["parent"][m.names[x]] = m.names[m.parent[x]];
    j["relations"] = json::object();
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        json arr = json::array();
        for (const Tuple& t : m.rels[s]) {
            json tup = json::array();
            for (int e : t) tup.push_back(m.names[e]);
            arr.push_back(tup);
        }
        j["relations"][m.sig.symbols[s].name] = arr;
    }
    j["marks"] = json::object();
    for (const auto& [name, set] : m.marks) {
        json arr = json::array();
        for (int e : set) arr.push_back(m.names[e]);
        j["marks"][name] = arr;
    }
    return j.dump(2) + "\n";
}

std::string to_json(const Graph& g) {
    json j;
    j["version"] = 1;
    j["kind"] = "graph";
    j["signature"] = json::array({{{"name", "E"}, {"arity", 2}, {"symmetric", true}}});
    j["universe"] = g.names;
    j["root"] = nullptr;
    j["parent"] = json::object();
    json arr = json::array();
    for (auto [u, v] : g.edges()) arr.push_back({g.names[u], g.names[v]});
    j["relations"] = {{"E", arr}};
    j["marks"] = json::object();
    return j.dump(2) + "\n";
}

std::string to_json(const OrderedBipartite& g) {
    json j;
    j["version"] = 1;
    j["kind"] = "obgraph";
    j["signature"] = json::array({{{"name", "E"}, {"arity", 2}, {"symmetric", false}}});
    std::vector<std::string> uni = g.a;
    uni.insert(uni.end(), g.b.begin(), g.b.end());
    j["universe"] = uni;
    j["root"] = nullptr;
    j["parent"] = json::object();
    json arr = json::array();
    for (auto [a, b] : g.edges) arr.push_back({g.a[a], g.b[b]});
    j["relations"] = {{"E", arr}};
    j["marks"] = {{"A", g.a}, {"B", g.b}};
    return j.dump(2) + "\n";
}

std::string to_dot(const Structure& m) {
    std::ostringstream out;
    out << "digraph tows {\n";
    for (const auto& n : m.names) out << "  " << quote(n) << ";\n";
    for (int x = 0; x < m.size(); ++x)
        if (x != m.root) out << "  " << quote(m.names[m.parent[x]]) << " -> " << quote(m.names[x]) << " [style=bold];\n";
    for (std::size_t s = 0; s < m.rels.size(); ++s) {
        const Symbol& sym = m.sig.symbols[s];
        int idx = 0;
        for (const Tuple& t : m.rels[s]) {
            if (sym.arity == 2 && sym.symmetric) {
                out << "  " << quote(m.names[t[0]]) << " -> " << quote(m.names[t[1]]) << " [dir=none, label="
                    << quote(sym.name) << "];\n";
            } else {
                std::string gadget = sym.name + ":" + std::to_string(idx);
                out << "  " << quote(gadget) << " [shape=box, label=" << quote(sym.name) << "];\n";
                for (std::size_t p = 0; p < t.size(); ++p)
                    out << "  " << quote(gadget) << " -> " << quote(m.names[t[p]]) << " [style=dashed, label=\""
                        << p + 1 << "\"];\n";
            }
            ++idx;
        }
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const Graph& g) {
    std::ostringstream out;
    out << "graph g {\n";
    for (const auto& n : g.names) out << "  " << quote(n) << ";\n";
    for (auto [u, v] : g.edges()) out << "  " << quote(g.names[u]) << " -- " << quote(g.names[v]) << ";\n";
    out << "}\n";
    return out.str();
}

std::string header_of(std::string_view text) {
    for (char c : text) {
        if (c == '{') return "json";
        if (!std::isspace(static_cast<unsigned char>(c))) break;
    }
    auto lines = tokenize(text);
    if (lines.empty()) return "";
    return lines[0].tokens[0];
}

Document parse_document(std::string_view text) {
    std::string h = header_of(text);
    if (h == "tows") return parse_tows(text);
    if (h == "graph") return parse_graph(text);
    if (h == "obgraph") return parse_obgraph(text);
    if (h == "json") {
        json j;
        try {
            j = json::parse(text);
        } catch (const std::exception& e) {
            throw Error(ErrorKind::parse, std::string("json: ") + e.what());
        }
        try {
            std::string kind = j.at("kind").get<std::string>();
            if (j.at("version").get<int>() != 1) throw Error(ErrorKind::parse, "unsupported json version");
            if (kind == "tows") return structure_from_json(j);
            if (kind == "graph") return graph_from_json(j);
            if (kind == "obgraph") return obgraph_from_json(j);
            throw Error(ErrorKind::parse, "unknown json kind " + kind);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse, std::string("json: ") + e.what());
        }
    }
    throw Error(ErrorKind::parse, "unrecognised header '" + h + "'");
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::not_found, "cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace tows::io
