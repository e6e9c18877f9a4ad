#ifndef KELAYER_GRAPH_HPP
#define KELAYER_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kelayer {

using NodeId = std::uint32_t;

/// Unordered node pair, stored with `u < v` once it is part of a Graph.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Malformed graph input: out-of-range endpoint, self-loop, foreign node set.
class GraphError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Membership over the nodes of one graph. The universe size is fixed at
/// construction; set operations require equal universes.
class NodeSet {
  public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe) : member_(universe, 0) {}

    NodeSet(std::size_t universe, std::initializer_list<NodeId> nodes) : NodeSet(universe) {
        for (NodeId v : nodes) insert(v);
    }

    NodeSet(std::size_t universe, std::span<const NodeId> nodes) : NodeSet(universe) {
        for (NodeId v : nodes) insert(v);
    }

    static NodeSet all(std::size_t universe) {
        NodeSet s(universe);
        std::fill(s.member_.begin(), s.member_.end(), char{1});
        s.count_ = universe;
        return s;
    }

    std::size_t universe() const noexcept { return member_.size(); }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }

    bool contains(NodeId v) const noexcept { return v < member_.size() && member_[v] != 0; }

    void insert(NodeId v) {
        check(v);
        if (!member_[v]) {
            member_[v] = 1;
            ++count_;
        }
    }

    void erase(NodeId v) {
        check(v);
        if (member_[v]) {
            member_[v] = 0;
            --count_;
        }
    }

    std::vector<NodeId> members() const {
        std::vector<NodeId> out;
        out.reserve(count_);
        for (std::size_t v = 0; v < member_.size(); ++v)
            if (member_[v]) out.push_back(static_cast<NodeId>(v));
        return out;
    }

    /// Raw 0/1 membership mask, one entry per node of the universe.
    std::span<const char> mask() const noexcept { return member_; }

    bool disjoint_with(const NodeSet& other) const {
        same_universe(other);
        for (std::size_t v = 0; v < member_.size(); ++v)
            if (member_[v] && other.member_[v]) return false;
        return true;
    }

    NodeSet united_with(const NodeSet& other) const {
        same_universe(other);
        NodeSet out(universe());
        for (std::size_t v = 0; v < member_.size(); ++v)
            if (member_[v] || other.member_[v]) out.insert(static_cast<NodeId>(v));
        return out;
    }

    NodeSet complement() const {
        NodeSet out(universe());
        for (std::size_t v = 0; v < member_.size(); ++v)
            if (!member_[v]) out.insert(static_cast<NodeId>(v));
        return out;
    }

    friend bool operator==(const NodeSet& a, const NodeSet& b) { return a.member_ == b.member_; }

  private:
    void check(NodeId v) const {
        if (v >= member_.size()) [[unlikely]]
            outside(v, member_.size());
    }

    [[noreturn, gnu::cold, gnu::noinline]] static void outside(NodeId v, std::size_t universe) {
        throw GraphError("node " + std::to_string(v) + " outside node set universe of " + std::to_string(universe));
    }
    void same_universe(const NodeSet& other) const {
        if (other.universe() != universe()) throw GraphError("node sets over different universes");
    }

    std::vector<char> member_;
    std::size_t count_ = 0;
};

/// Simple undirected graph over dense node indices `0..node_count-1`.
/// Immutable once built; adjacency is stored in compressed rows with each
/// neighbor list sorted ascending.
class Graph {
  public:
    Graph() : offsets_(1, 0) {}

    /// Normalizes `edges` (orients u < v, sorts, drops duplicates).
    /// Throws GraphError on a self-loop or an out-of-range endpoint.
    Graph(std::size_t node_count, std::vector<Edge> edges) : node_count_(node_count) {
        for (Edge& e : edges) {
            if (e.u >= node_count || e.v >= node_count)
                throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                 ") out of range for " + std::to_string(node_count) + " nodes");
            if (e.u == e.v) throw GraphError("self-loop at node " + std::to_string(e.u));
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);

        offsets_.assign(node_count + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
        adjacency_.resize(2 * edges_.size());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        // Edges are sorted by (u, v): smaller neighbors first, then larger
        // ones, leaves every row ascending.
        for (const Edge& e : edges_) adjacency_[fill[e.v]++] = e.u;
        for (const Edge& e : edges_) adjacency_[fill[e.u]++] = e.v;
    }

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(NodeId u, NodeId v) const {
        if (u >= node_count_ || v >= node_count_) return false;
        auto row = neighbors(u);
        return std::binary_search(row.begin(), row.end(), v);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

  private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
};

inline Graph build_graph(std::size_t node_count, std::vector<Edge> edges) {
    return Graph(node_count, std::move(edges));
}

inline Graph build_graph(std::size_t node_count,
                         std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs) edges.push_back({u, v});
    return Graph(node_count, std::move(edges));
}

/// A graph induced on a node subset, with the back-mapping to the parent's
/// indices. `to_parent` is ascending, so re-indexing preserves node order.
struct Subgraph {
    Graph graph;
    std::vector<NodeId> to_parent;

    NodeSet lift(const NodeSet& local, std::size_t parent_universe) const {
        NodeSet out(parent_universe);
        for (NodeId v : local.members()) out.insert(to_parent[v]);
        return out;
    }
};

inline Subgraph induced_subgraph(const Graph& g, const NodeSet& nodes) {
    if (nodes.universe() != g.node_count())
        throw GraphError("node set universe " + std::to_string(nodes.universe()) +
                         " does not match graph with " + std::to_string(g.node_count()) +
                         " nodes");
    Subgraph sub;
    constexpr NodeId kAbsent = static_cast<NodeId>(-1);
    std::vector<NodeId> local(g.node_count(), kAbsent);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (nodes.contains(static_cast<NodeId>(v))) {
            local[v] = static_cast<NodeId>(sub.to_parent.size());
            sub.to_parent.push_back(static_cast<NodeId>(v));
        }
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (local[e.u] != kAbsent && local[e.v] != kAbsent) edges.push_back({local[e.u], local[e.v]});
    sub.graph = Graph(sub.to_parent.size(), std::move(edges));
    return sub;
}

enum class LeafOrder { Ascending, Descending };

struct LeafRemoval {
    Subgraph core;
    std::size_t removed_leaves = 0;
};

/// Iterated leaf removal: a degree-1 node is deleted together with its
/// unique neighbor until no degree-1 node is left. The core is what still has
/// an edge at that point; nodes left isolated are dropped with the leaves.
/// `order` picks which pending leaf goes first; the core does not depend on it.
inline LeafRemoval remove_leaves(const Graph& g, LeafOrder order = LeafOrder::Ascending) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> degree(n);
    std::vector<char> alive(n, 1);
    // Min-heap for ascending order, max-heap for descending.
    auto before = [order](NodeId a, NodeId b) { return order == LeafOrder::Ascending ? a > b : a < b; };
    std::priority_queue<NodeId, std::vector<NodeId>, decltype(before)> pending(before);
    for (std::size_t v = 0; v < n; ++v) {
        degree[v] = g.degree(static_cast<NodeId>(v));
        if (degree[v] == 1) pending.push(static_cast<NodeId>(v));
    }

    std::size_t leaves = 0;
    while (!pending.empty()) {
        NodeId leaf = pending.top();
        pending.pop();
        if (!alive[leaf] || degree[leaf] != 1) continue;
        NodeId hub = 0;
        for (NodeId w : g.neighbors(leaf))
            if (alive[w]) hub = w;
        ++leaves;
        alive[leaf] = 0;
        alive[hub] = 0;
        for (NodeId w : g.neighbors(hub)) {
            if (alive[w] && --degree[w] == 1) pending.push(w);
        }
    }

    NodeSet rest(n);
    for (std::size_t v = 0; v < n; ++v)
        if (alive[v] && degree[v] > 0) rest.insert(static_cast<NodeId>(v));
    return {induced_subgraph(g, rest), leaves};
}

inline bool is_vertex_cover(const Graph& g, const NodeSet& cover) {
    if (cover.universe() != g.node_count()) return false;
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [&](const Edge& e) { return cover.contains(e.u) || cover.contains(e.v); });
}

}  // namespace kelayer

#endif  // KELAYER_GRAPH_HPP
