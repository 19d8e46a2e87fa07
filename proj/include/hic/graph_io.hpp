#pragma once

// Line-oriented graph files:
//
//   # comment
//   n <node_count>
//   e <u> <v> [conductance]
//
// Ids are 0-based; a missing conductance means 1.0. Text after '#' is ignored.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hic/graph.hpp"

namespace hic {

namespace detail {

inline bool parse_size(const std::string& token, std::size_t& out) {
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline bool parse_real(const std::string& token, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(token, &used);
        return used == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& why) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

} // namespace detail

/// Reads the raw edge list without checking graph invariants.
inline EdgeList read_edge_list(std::istream& in) {
    EdgeList list;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag)) continue;
        std::vector<std::string> rest;
        for (std::string tok; fields >> tok;) rest.push_back(tok);

        if (!have_header) {
            if (tag != "n" || rest.size() != 1 || !detail::parse_size(rest[0], list.node_count))
                detail::parse_fail(line_no, "expected 'n <node_count>'");
            have_header = true;
            continue;
        }
        if (tag != "e" || rest.size() < 2 || rest.size() > 3)
            detail::parse_fail(line_no, "expected 'e <u> <v> [conductance]'");
        Edge e;
        if (!detail::parse_size(rest[0], e.u) || !detail::parse_size(rest[1], e.v))
            detail::parse_fail(line_no, "bad node id");
        if (rest.size() == 3 && !detail::parse_real(rest[2], e.conductance))
            detail::parse_fail(line_no, "bad conductance '" + rest[2] + "'");
        list.edges.push_back(e);
    }
    if (!have_header) detail::parse_fail(line_no, "missing 'n <node_count>' header");
    return list;
}

/// Reads and checks a graph. Malformed text and invariant violations both
/// surface as ParseError / InvalidGraph.
inline WeightedGraph read_graph(std::istream& in) { return WeightedGraph(read_edge_list(in)); }

inline WeightedGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    return read_graph(in);
}

/// Unit conductances are written without the optional column, others with
/// enough digits to round-trip exactly.
inline void write_graph(std::ostream& out, const WeightedGraph& graph) {
    out << "n " << graph.node_count() << '\n';
    char buf[32];
    for (const auto& e : graph.edges()) {
        out << "e " << e.u << ' ' << e.v;
        if (e.conductance != 1.0) {
            std::snprintf(buf, sizeof buf, "%.17g", e.conductance);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

} // namespace hic
