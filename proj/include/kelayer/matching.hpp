#ifndef KELAYER_MATCHING_HPP
#define KELAYER_MATCHING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kelayer/graph.hpp"

namespace kelayer {

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// A set of vertex-disjoint edges, stored as a symmetric mate table.
class Matching {
  public:
    Matching() = default;
    explicit Matching(std::size_t node_count) : mate_(node_count, kNoNode) {}

    std::size_t node_count() const noexcept { return mate_.size(); }
    std::size_t size() const noexcept { return pairs_; }

    std::optional<NodeId> mate(NodeId v) const {
        if (mate_[v] == kNoNode) return std::nullopt;
        return mate_[v];
    }
    bool is_matched(NodeId v) const { return mate_[v] != kNoNode; }

    /// Raw mate table (kNoNode for unmatched nodes).
    std::span<const NodeId> mates() const noexcept { return mate_; }

    void match(NodeId u, NodeId v) {
        if (mate_[u] != kNoNode) unmatch(u);
        if (mate_[v] != kNoNode) unmatch(v);
        mate_[u] = v;
        mate_[v] = u;
        ++pairs_;
    }

    void unmatch(NodeId u) {
        const NodeId v = mate_[u];
        if (v == kNoNode) return;
        mate_[u] = kNoNode;
        mate_[v] = kNoNode;
        --pairs_;
    }

    /// Matched pairs as (lower, higher), ascending by lower endpoint.
    std::vector<Edge> pairs() const {
        std::vector<Edge> out;
        out.reserve(pairs_);
        for (std::size_t u = 0; u < mate_.size(); ++u)
            if (mate_[u] != kNoNode && u < mate_[u]) out.push_back({static_cast<NodeId>(u), mate_[u]});
        return out;
    }

    friend bool operator==(const Matching& a, const Matching& b) { return a.mate_ == b.mate_; }

  private:
    std::vector<NodeId> mate_;
    std::size_t pairs_ = 0;
};

/// Edmonds' blossom algorithm with a reusable workspace.
///
/// Greedy initialization (each node, ascending, takes its lowest-index free
/// neighbor), then one augmenting-path search per free node in ascending
/// order. A root whose search fails can never be augmented later, so one
/// pass suffices. Optional `active` restricts the solve to an induced
/// subgraph without building it.
class MatchingSolver {
  public:
    Matching solve(const Graph& g) { return solve(g, {}); }

    Matching solve(const Graph& g, std::span<const char> active) {
        run(g, active);
        Matching m(g.node_count());
        for (std::size_t v = 0; v < g.node_count(); ++v)
            if (mate_[v] != kNoNode && v < mate_[v]) m.match(static_cast<NodeId>(v), mate_[v]);
        return m;
    }

    /// Matching number only; avoids materializing the Matching.
    std::size_t matching_number(const Graph& g, std::span<const char> active) {
        return run(g, active);
    }

    /// Incremental updates after a full solve on (g, active). The caller
    /// clears `active[v]` before `node_removed(v)` and sets it before
    /// `node_added(v)`; one augmenting search from the affected node keeps
    /// the matching maximum. Returns the new matching number.
    std::size_t node_removed(const Graph& g, std::span<const char> active, NodeId v) {
        const NodeId w = mate_[v];
        if (w == kNoNode) return size_;
        mate_[v] = kNoNode;
        mate_[w] = kNoNode;
        --size_;
        if (augment_from(g, active, w)) ++size_;
        return size_;
    }

    std::size_t node_added(const Graph& g, std::span<const char> active, NodeId v) {
        if (mate_[v] != kNoNode) return size_;
        if (augment_from(g, active, v)) ++size_;
        return size_;
    }

  private:
    bool on(std::span<const char> active, NodeId v) const { return active.empty() || active[v]; }

    std::size_t run(const Graph& g, std::span<const char> active) {
        const std::size_t n = g.node_count();
        mate_.assign(n, kNoNode);
        if (stamp_.size() < n) {
            stamp_.assign(n, 0);
            set_.resize(n);
            base_.resize(n);
            parent_.resize(n);
            outer_.resize(n);
            lca_mark_.assign(n, 0);
        }

        std::size_t size = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!on(active, static_cast<NodeId>(v)) || mate_[v] != kNoNode) continue;
            for (NodeId w : g.neighbors(static_cast<NodeId>(v))) {
                if (mate_[w] == kNoNode && on(active, w)) {
                    mate_[v] = w;
                    mate_[w] = static_cast<NodeId>(v);
                    ++size;
                    break;
                }
            }
        }

        for (std::size_t r = 0; r < n; ++r) {
            const auto root = static_cast<NodeId>(r);
            if (mate_[root] != kNoNode || !on(active, root)) continue;
            if (augment_from(g, active, root)) ++size;
        }
        size_ = size;
        return size;
    }

    bool augment_from(const Graph& g, std::span<const char> active, NodeId root) {
        bool has_neighbor = false;
        for (NodeId w : g.neighbors(root))
            if (on(active, w)) {
                has_neighbor = true;
                break;
            }
        if (!has_neighbor) return false;
        NodeId end = find_augmenting_path(g, active, root);
        if (end == kNoNode) return false;
        // Flip the alternating path from `end` back to the root.
        while (end != kNoNode) {
            NodeId pv = parent(end);
            NodeId next = mate_[pv];
            mate_[end] = pv;
            mate_[pv] = end;
            end = next;
        }
        return true;
    }

    // Lazily reset per-search state: a node whose stamp differs from the
    // current search is in its pristine state (own base, no parent).
    // Contracted blossoms are union-find sets; `base_` is read at the root.
    void touch(NodeId v) {
        if (stamp_[v] != search_) {
            stamp_[v] = search_;
            set_[v] = v;
            base_[v] = v;
            parent_[v] = kNoNode;
            outer_[v] = 0;
        }
    }
    NodeId find(NodeId v) {
        NodeId r = v;
        while (set_[r] != r) r = set_[r];
        while (set_[v] != r) {
            const NodeId up = set_[v];
            set_[v] = r;
            v = up;
        }
        return r;
    }
    NodeId base(NodeId v) { return stamp_[v] == search_ ? base_[find(v)] : v; }
    NodeId parent(NodeId v) { return stamp_[v] == search_ ? parent_[v] : kNoNode; }

    static void next_round(std::uint32_t& round, std::vector<std::uint32_t>& marks) {
        if (++round == 0) {
            std::fill(marks.begin(), marks.end(), 0);
            round = 1;
        }
    }

    NodeId lowest_common_ancestor(NodeId a, NodeId b) {
        next_round(lca_round_, lca_mark_);
        for (;;) {
            a = base(a);
            lca_mark_[a] = lca_round_;
            if (mate_[a] == kNoNode) break;
            a = parent(mate_[a]);
        }
        for (;;) {
            b = base(b);
            if (lca_mark_[b] == lca_round_) return b;
            b = parent(mate_[b]);
        }
    }

    // Walks from `v` up to blossom base `b`, re-pointing parents and
    // collecting the bases and inner nodes swallowed by the blossom.
    void mark_path(NodeId v, NodeId b, NodeId child) {
        while (base(v) != b) {
            const NodeId m = mate_[v];
            swallowed_.push_back(base(v));
            swallowed_.push_back(base(m));
            inner_.push_back(m);
            touch(v);
            parent_[v] = child;
            child = m;
            v = parent(m);
        }
    }

    NodeId find_augmenting_path(const Graph& g, std::span<const char> active, NodeId root) {
        next_round(search_, stamp_);
        queue_.clear();
        touch(root);
        outer_[root] = 1;
        queue_.push_back(root);
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const NodeId v = queue_[head];
            for (NodeId to : g.neighbors(v)) {
                if (!on(active, to)) continue;
                if (base(v) == base(to) || mate_[v] == to) continue;
                if (to == root || (mate_[to] != kNoNode && parent(mate_[to]) != kNoNode)) {
                    // Even-even edge: contract the blossom.
                    const NodeId cur = lowest_common_ancestor(v, to);
                    swallowed_.clear();
                    inner_.clear();
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    const NodeId root_set = find(cur);
                    for (NodeId x : swallowed_) {
                        const NodeId rx = find(x);
                        if (rx != root_set) set_[rx] = root_set;
                    }
                    base_[root_set] = cur;
                    for (NodeId x : inner_) {
                        if (!outer_[x]) {
                            outer_[x] = 1;
                            queue_.push_back(x);
                        }
                    }
                } else if (parent(to) == kNoNode) {
                    touch(to);
                    parent_[to] = v;
                    if (mate_[to] == kNoNode) return to;
                    const NodeId next = mate_[to];
                    touch(next);
                    outer_[next] = 1;
                    queue_.push_back(next);
                }
            }
        }
        return kNoNode;
    }

    std::vector<NodeId> mate_;
    std::vector<std::uint32_t> stamp_;
    std::vector<NodeId> set_;
    std::vector<NodeId> base_;
    std::vector<NodeId> parent_;
    std::vector<char> outer_;
    std::vector<std::uint32_t> lca_mark_;
    std::vector<NodeId> swallowed_;
    std::vector<NodeId> inner_;
    std::vector<NodeId> queue_;
    std::uint32_t search_ = 0;
    std::uint32_t lca_round_ = 0;
    std::size_t size_ = 0;
};

inline Matching maximum_matching(const Graph& g) {
    MatchingSolver solver;
    return solver.solve(g);
}

inline Matching maximum_matching(const Graph& g, const NodeSet& within) {
    MatchingSolver solver;
    return solver.solve(g, within.mask());
}

/// Checks a mate table against `g`: symmetric, in range, pairs are edges.
inline bool is_valid_matching(const Graph& g, const Matching& m) {
    if (m.node_count() != g.node_count()) return false;
    auto mates = m.mates();
    std::size_t pairs = 0;
    for (std::size_t u = 0; u < mates.size(); ++u) {
        const NodeId v = mates[u];
        if (v == kNoNode) continue;
        if (v >= mates.size() || mates[v] != u || v == u) return false;
        if (!g.has_edge(static_cast<NodeId>(u), v)) return false;
        if (u < v) ++pairs;
    }
    return pairs == m.size();
}

/// Checks a raw pair list: every pair an edge of `g`, no node used twice.
inline bool is_valid_matching(const Graph& g, std::span<const Edge> pairs) {
    std::vector<char> used(g.node_count(), 0);
    for (const Edge& e : pairs) {
        if (!g.has_edge(e.u, e.v)) return false;
        if (used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = 1;
    }
    return true;
}

inline NodeSet unmatched_nodes(const Graph& g, const Matching& m) {
    NodeSet out(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (!m.is_matched(static_cast<NodeId>(v))) out.insert(static_cast<NodeId>(v));
    return out;
}

}  // namespace kelayer

#endif  // KELAYER_MATCHING_HPP
