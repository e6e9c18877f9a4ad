#ifndef KELAYER_GRAPH_IO_HPP
#define KELAYER_GRAPH_IO_HPP

#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kelayer/graph.hpp"

namespace kelayer {

/// Edge-list read failure; `line()` is 1-based, 0 when the problem is not
/// tied to one line (e.g. missing edges at end of file).
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

namespace detail {

inline bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

inline std::vector<unsigned long long> parse_fields(const std::string& text, std::size_t line_no,
                                                    std::size_t expected) {
    std::istringstream in(text);
    std::vector<unsigned long long> out;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            if (token.front() == '-') throw std::invalid_argument("negative");
            value = std::stoull(token, &used);
        } catch (const std::exception&) {
            throw ParseError(line_no, "expected a non-negative integer, got '" + token + "'");
        }
        if (used != token.size()) throw ParseError(line_no, "trailing characters in '" + token + "'");
        out.push_back(value);
    }
    if (out.size() != expected)
        throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                      std::to_string(out.size()));
    return out;
}

}  // namespace detail

/// Reads the `n m` header followed by exactly m `u v` lines (0-based).
/// Blank lines anywhere are ignored.
inline Graph read_graph(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    auto next_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            if (!detail::blank(out)) return true;
        }
        return false;
    };

    if (!next_line(text)) throw ParseError(0, "missing 'n m' header");
    auto header = detail::parse_fields(text, line_no, 2);
    if (header[0] > std::numeric_limits<NodeId>::max())
        throw ParseError(line_no, "node count too large");
    const std::size_t n = header[0];
    const std::size_t m = header[1];

    std::vector<Edge> edges;
    edges.reserve(m);
    while (next_line(text)) {
        auto f = detail::parse_fields(text, line_no, 2);
        if (edges.size() == m)
            throw ParseError(line_no, "more edge lines than the declared " + std::to_string(m));
        if (f[0] >= n || f[1] >= n)
            throw ParseError(line_no, "endpoint out of range for " + std::to_string(n) + " nodes");
        if (f[0] == f[1]) throw ParseError(line_no, "self-loop at node " + std::to_string(f[0]));
        edges.push_back({static_cast<NodeId>(f[0]), static_cast<NodeId>(f[1])});
    }
    if (edges.size() != m)
        throw ParseError(0, "header declares " + std::to_string(m) + " edges but " +
                                std::to_string(edges.size()) + " were found");
    return Graph(n, std::move(edges));
}

inline void write_graph(std::ostream& out, const Graph& g) {
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
    return read_graph(in);
}

inline void write_graph_file(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
    write_graph(out, g);
}

}  // namespace kelayer

#endif  // KELAYER_GRAPH_IO_HPP
