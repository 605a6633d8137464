#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tows/core.hpp"
#include "tows/graph.hpp"

namespace tows::io {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

// Splits into non-empty token lines; '#' starts a comment.
std::vector<Line> tokenize(std::string_view text);

Structure parse_tows(std::string_view text);
Structure parse_tows_lines(const std::vector<Line>& lines);  // header line included
std::string write_tows(const Structure& m);

Graph parse_graph(std::string_view text);
std::string write_graph(const Graph& g);

OrderedBipartite parse_obgraph(std::string_view text);
std::string write_obgraph(const OrderedBipartite& g);

std::string to_json(const Structure& m);
std::string to_json(const Graph& g);
std::string to_json(const OrderedBipartite& g);

std::string to_dot(const Structure& m);
std::string to_dot(const Graph& g);

using Document = std::variant<Structure, Graph, OrderedBipartite>;

// Detects the format from the header line (or a leading '{' for JSON).
Document parse_document(std::string_view text);
std::string header_of(std::string_view text);  // first token of first line, "json" for JSON

std::string read_file(const std::string& path);  // "-" reads standard input

}  // namespace tows::io
