#ifndef KELAYER_GENERATORS_HPP
#define KELAYER_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "kelayer/graph.hpp"
#include "kelayer/rng.hpp"

namespace kelayer {

/// Erdős–Rényi G(n, p) with p = avg_degree / (n - 1).
///
/// Uses geometric skipping over the lexicographic pair order, so the cost is
/// proportional to the number of edges drawn rather than n².
inline Graph generate_er(std::size_t n, double avg_degree, RngStream& rng) {
    if (n == 0) throw std::invalid_argument("generate_er: n must be at least 1");
    if (!(avg_degree >= 0.0)) throw std::invalid_argument("generate_er: negative average degree");
    const double max_degree = static_cast<double>(n - 1);
    if (avg_degree > max_degree + 1e-9)
        throw std::invalid_argument("generate_er: average degree " + std::to_string(avg_degree) +
                                    " exceeds n-1 = " + std::to_string(n - 1));
    if (n == 1 || avg_degree == 0.0) return Graph(n, {});

    const double p = std::min(1.0, avg_degree / max_degree);
    std::vector<Edge> edges;
    if (p >= 1.0) {
        edges.reserve(n * (n - 1) / 2);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
        return Graph(n, std::move(edges));
    }

    edges.reserve(static_cast<std::size_t>(avg_degree * static_cast<double>(n) / 2 * 1.1) + 16);
    const double log_q = std::log1p(-p);
    // Pairs (w, v) with w < v are visited row by row; skip lengths are
    // geometric with success probability p.
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        const double r = rng.uniform();
        const double skip = std::min(std::floor(std::log1p(-r) / log_q), 4e18);
        if (skip >= static_cast<double>(nn) * static_cast<double>(nn)) break;
        w += 1 + static_cast<std::int64_t>(skip);
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn) edges.push_back({static_cast<NodeId>(w), static_cast<NodeId>(v)});
    }
    return Graph(n, std::move(edges));
}

/// Random bipartite graph: each node joins side 0 or 1 with probability 1/2,
/// each cross pair becomes an edge with probability `p`.
inline Graph generate_bipartite(std::size_t n, double p, RngStream& rng) {
    std::vector<char> side(n);
    for (auto& s : side) s = static_cast<char>(rng.next() & 1U);
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (side[u] != side[v] && rng.uniform() < p)
                edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    return Graph(n, std::move(edges));
}

/// Random recursive tree: node v attaches to a uniformly chosen earlier node.
inline Graph generate_random_tree(std::size_t n, RngStream& rng) {
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v)
        edges.push_back({static_cast<NodeId>(rng.below(v)), static_cast<NodeId>(v)});
    return Graph(n, std::move(edges));
}

namespace families {

inline Graph path(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(v - 1), static_cast<NodeId>(v)});
    return Graph(n, std::move(edges));
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < n; ++v)
        edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>((v + 1) % n)});
    return Graph(n, std::move(edges));
}

inline Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    return Graph(n, std::move(edges));
}

/// Star with center 0 and `leaves` spokes.
inline Graph star(std::size_t leaves) {
    std::vector<Edge> edges;
    for (std::size_t v = 1; v <= leaves; ++v) edges.push_back({0, static_cast<NodeId>(v)});
    return Graph(leaves + 1, std::move(edges));
}

inline Graph petersen() {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < 5; ++i) {
        edges.push_back({i, static_cast<NodeId>((i + 1) % 5)});          // outer cycle
        edges.push_back({i, static_cast<NodeId>(i + 5)});                // spokes
        edges.push_back({static_cast<NodeId>(i + 5), static_cast<NodeId>((i + 2) % 5 + 5)});  // pentagram
    }
    return Graph(10, std::move(edges));
}

/// Disjoint union of two graphs; the second one is shifted by a.node_count().
inline Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> edges(a.edges().begin(), a.edges().end());
    const auto shift = static_cast<NodeId>(a.node_count());
    for (const Edge& e : b.edges()) edges.push_back({e.u + shift, e.v + shift});
    return Graph(a.node_count() + b.node_count(), std::move(edges));
}

}  // namespace families

}  // namespace kelayer

#endif  // KELAYER_GENERATORS_HPP
