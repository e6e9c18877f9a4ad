#ifndef KELAYER_KE_VERIFY_HPP
#define KELAYER_KE_VERIFY_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kelayer/graph.hpp"
#include "kelayer/matching.hpp"

namespace kelayer {

/// Role of a node across all minimum vertex covers.
///   PositiveBackbone: uncovered in every minimum cover.
///   NegativeBackbone: covered in every minimum cover.
///   Unfrozen:         covered in some and uncovered in others.
enum class NodeState : std::uint8_t { Unfrozen, PositiveBackbone, NegativeBackbone };

inline char state_letter(NodeState s) {
    switch (s) {
        case NodeState::PositiveBackbone: return 'P';
        case NodeState::NegativeBackbone: return 'N';
        case NodeState::Unfrozen: break;
    }
    return 'U';
}

class EnumerationCapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Host graph annotated with per-node states and double edges (matched
/// pairs whose two ends hold exactly one covered node). An empty graph
/// (`empty() == true`) is the verdict "not KE"; the host and double edges
/// are still available for reporting.
class ReducedSolutionGraph {
  public:
    ReducedSolutionGraph(std::shared_ptr<const Graph> host, Matching double_edges)
        : host_(std::move(host)), double_edges_(std::move(double_edges)),
          states_(host_->node_count(), NodeState::Unfrozen) {
        if (!is_valid_matching(*host_, double_edges_))
            throw GraphError("double edges must form a matching of the host graph");
    }

    ReducedSolutionGraph(const Graph& host, Matching double_edges)
        : ReducedSolutionGraph(std::make_shared<const Graph>(host), std::move(double_edges)) {}

    const Graph& host() const noexcept { return *host_; }
    const Matching& double_edges() const noexcept { return double_edges_; }

    bool empty() const noexcept { return empty_; }
    void mark_empty() noexcept { empty_ = true; }

    NodeState state(NodeId v) const { return states_[v]; }
    void set_state(NodeId v, NodeState s) { states_[v] = s; }

    std::optional<NodeId> partner(NodeId v) const { return double_edges_.mate(v); }

    std::size_t count(NodeState s) const {
        return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), s));
    }

    NodeSet nodes_in(NodeState s) const {
        NodeSet out(states_.size());
        for (std::size_t v = 0; v < states_.size(); ++v)
            if (states_[v] == s) out.insert(static_cast<NodeId>(v));
        return out;
    }

    /// One letter per node: P (positive), N (negative), U (unfrozen).
    std::string state_letters() const {
        std::string out;
        out.reserve(states_.size());
        for (NodeState s : states_) out.push_back(state_letter(s));
        return out;
    }

    std::vector<NodeState>& raw_states() noexcept { return states_; }
    const std::vector<NodeState>& raw_states() const noexcept { return states_; }

  private:
    std::shared_ptr<const Graph> host_;
    Matching double_edges_;
    std::vector<NodeState> states_;
    bool empty_ = false;
};

namespace detail {

/// Propagation engine over a bare state vector. Every state write is
/// appended to `log` (when given) so trials can be undone in time
/// proportional to what they touched.
class Propagator {
  public:
    Propagator(const Graph& g, const Matching& pairs, std::vector<NodeState>& states,
               std::vector<NodeId>* log)
        : g_(g), pairs_(pairs), states_(states), log_(log) {}

    void set(NodeId v, NodeState s) {
        states_[v] = s;
        if (log_) log_->push_back(v);
    }

    /// Freezing influence from a positive node `k`: every unfrozen neighbor
    /// becomes negative; afterwards each negative neighbor whose double-edge
    /// partner is still unfrozen makes that partner positive, and influence
    /// continues from it (depth first, neighbors ascending). Backbones are
    /// never flipped; a clash is left in place for the consistency check.
    void freeze_from(NodeId k) {
        auto& stack = stack_;
        stack.clear();
        auto open = [&](NodeId x) {
            for (NodeId j : g_.neighbors(x))
                if (states_[j] == NodeState::Unfrozen) set(j, NodeState::NegativeBackbone);
            stack.push_back({x, 0});
        };
        open(k);
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto row = g_.neighbors(f.node);
            if (f.next == row.size()) {
                stack.pop_back();
                continue;
            }
            const NodeId i = row[f.next++];
            if (states_[i] != NodeState::NegativeBackbone) continue;
            const NodeId j = pairs_.mates()[i];
            if (j == kNoNode || states_[j] != NodeState::Unfrozen) continue;
            set(j, NodeState::PositiveBackbone);
            open(j);  // invalidates `f`
        }
    }

    /// Trial "i uncovered": positive, then freezing influence.
    void assume_positive(NodeId i) {
        set(i, NodeState::PositiveBackbone);
        freeze_from(i);
    }

    /// Trial "i covered": negative; an unfrozen double-edge partner becomes
    /// positive and spreads its influence.
    void assume_negative(NodeId i) {
        set(i, NodeState::NegativeBackbone);
        const NodeId j = pairs_.mates()[i];
        if (j != kNoNode && states_[j] == NodeState::Unfrozen) {
            set(j, NodeState::PositiveBackbone);
            freeze_from(j);
        }
    }

    bool consistent_at(NodeId v) const {
        if (states_[v] == NodeState::PositiveBackbone) {
            for (NodeId w : g_.neighbors(v))
                if (states_[w] == NodeState::PositiveBackbone) return false;
        } else if (states_[v] == NodeState::NegativeBackbone) {
            const NodeId j = pairs_.mates()[v];
            if (j != kNoNode && states_[j] == NodeState::NegativeBackbone) return false;
        }
        return true;
    }

    /// Consistency restricted to the logged nodes: any clause violated after
    /// a trial on a consistent state touches a node the trial wrote.
    bool consistent_since(std::size_t mark) const {
        for (std::size_t i = mark; i < log_->size(); ++i)
            if (!consistent_at((*log_)[i])) return false;
        return true;
    }

    void undo_to(std::size_t mark) {
        // Trials only ever write over Unfrozen nodes.
        while (log_->size() > mark) {
            states_[log_->back()] = NodeState::Unfrozen;
            log_->pop_back();
        }
    }

  private:
    struct Frame {
        NodeId node;
        std::size_t next;
    };

    const Graph& g_;
    const Matching& pairs_;
    std::vector<NodeState>& states_;
    std::vector<NodeId>* log_;
    std::vector<Frame> stack_;
};

}  // namespace detail

/// Applies freezing influence from node `k`, which must be PositiveBackbone.
inline ReducedSolutionGraph freezing_influence(ReducedSolutionGraph s, NodeId k) {
    if (s.state(k) != NodeState::PositiveBackbone)
        throw std::invalid_argument("freezing_influence: node " + std::to_string(k) +
                                    " is not a positive backbone");
    detail::Propagator(s.host(), s.double_edges(), s.raw_states(), nullptr).freeze_from(k);
    return s;
}

/// True iff no edge joins two positive backbones and no double edge joins
/// two negative backbones.
inline bool consistency_check(const ReducedSolutionGraph& s) {
    const Graph& g = s.host();
    for (const Edge& e : g.edges())
        if (s.state(e.u) == NodeState::PositiveBackbone && s.state(e.v) == NodeState::PositiveBackbone)
            return false;
    for (const Edge& p : s.double_edges().pairs())
        if (s.state(p.u) == NodeState::NegativeBackbone && s.state(p.v) == NodeState::NegativeBackbone)
            return false;
    return true;
}

enum class TrialOrder { Ascending, Descending };

/// Probes every still-unfrozen node both ways. Both trials inconsistent:
/// the result is marked empty (not KE). Exactly one consistent: that
/// assignment and its influence are committed. Both consistent: the node is
/// left free. Nodes frozen by a commit are skipped when their turn comes.
inline ReducedSolutionGraph confliction_check(ReducedSolutionGraph s,
                                              TrialOrder order = TrialOrder::Ascending) {
    if (s.empty()) return s;
    if (!consistency_check(s)) {
        s.mark_empty();
        return s;
    }
    const std::size_t n = s.host().node_count();
    std::vector<NodeId> log;
    detail::Propagator prop(s.host(), s.double_edges(), s.raw_states(), &log);

    for (std::size_t step = 0; step < n; ++step) {
        const auto i = static_cast<NodeId>(order == TrialOrder::Ascending ? step : n - 1 - step);
        if (s.state(i) != NodeState::Unfrozen) continue;

        log.clear();
        prop.assume_positive(i);
        const bool positive_ok = prop.consistent_since(0);
        prop.undo_to(0);

        prop.assume_negative(i);
        const bool negative_ok = prop.consistent_since(0);

        if (!positive_ok && !negative_ok) {
            prop.undo_to(0);
            s.mark_empty();
            return s;
        }
        if (negative_ok && !positive_ok) continue;  // keep the negative trial
        prop.undo_to(0);
        if (positive_ok && !negative_ok) prop.assume_positive(i);
    }
    return s;
}

struct KeVerdict {
    bool is_ke = false;
    std::size_t matching_number = 0;
    ReducedSolutionGraph solution;
};

/// The maximum matching becomes the double edges. Every unmatched node is
/// a positive backbone, and freezing influence runs from each (ascending). If that is inconsistent the graph is not KE; otherwise the
/// confliction check decides. A KE verdict carries the full reduced
/// solution graph.
inline KeVerdict verify_ke(const Graph& g, TrialOrder order = TrialOrder::Ascending) {
    auto host = std::make_shared<const Graph>(g);
    Matching m = maximum_matching(*host);
    const std::size_t matching_number = m.size();
    ReducedSolutionGraph s(host, std::move(m));

    const std::size_t n = g.node_count();
    for (std::size_t v = 0; v < n; ++v)
        if (!s.partner(static_cast<NodeId>(v))) s.set_state(static_cast<NodeId>(v), NodeState::PositiveBackbone);
    {
        detail::Propagator prop(s.host(), s.double_edges(), s.raw_states(), nullptr);
        for (std::size_t v = 0; v < n; ++v)
            if (!s.partner(static_cast<NodeId>(v))) prop.freeze_from(static_cast<NodeId>(v));
    }
    if (!consistency_check(s)) {
        s.mark_empty();
    } else {
        s = confliction_check(std::move(s), order);
    }
    const bool ke = !s.empty();
    return {ke, matching_number, std::move(s)};
}

inline bool is_ke(const Graph& g) { return verify_ke(g).is_ke; }

/// All minimum vertex covers encoded by a non-empty reduced solution graph:
/// negative backbones always in, positive backbones always out, free nodes
/// resolved by recursive trial and propagation. Throws
/// EnumerationCapExceeded once more than `cap` covers would be produced.
inline std::vector<NodeSet> enumerate_min_covers(const ReducedSolutionGraph& s, std::size_t cap) {
    if (s.empty()) throw std::invalid_argument("enumerate_min_covers: graph is not KE");
    std::vector<NodeSet> out;
    std::vector<NodeState> states = s.raw_states();
    std::vector<NodeId> log;
    detail::Propagator prop(s.host(), s.double_edges(), states, &log);
    const std::size_t n = states.size();

    auto emit = [&] {
        if (out.size() == cap)
            throw EnumerationCapExceeded("more than " + std::to_string(cap) + " minimum covers");
        NodeSet cover(n);
        for (std::size_t v = 0; v < n; ++v)
            if (states[v] == NodeState::NegativeBackbone) cover.insert(static_cast<NodeId>(v));
        out.push_back(std::move(cover));
    };

    auto recurse = [&](auto&& self, std::size_t from) -> void {
        std::size_t i = from;
        while (i < n && states[i] != NodeState::Unfrozen) ++i;
        if (i == n) {
            emit();
            return;
        }
        const auto node = static_cast<NodeId>(i);
        for (int branch = 0; branch < 2; ++branch) {
            const std::size_t mark = log.size();
            if (branch == 0)
                prop.assume_negative(node);
            else
                prop.assume_positive(node);
            if (prop.consistent_since(mark)) self(self, i + 1);
            prop.undo_to(mark);
        }
    };
    recurse(recurse, 0);
    return out;
}

/// One minimum cover from a non-empty reduced solution graph: each free
/// node, ascending, is taken into the cover and its influence applied.
inline NodeSet one_min_cover(const ReducedSolutionGraph& s) {
    if (s.empty()) throw std::invalid_argument("one_min_cover: graph is not KE");
    std::vector<NodeState> states = s.raw_states();
    detail::Propagator prop(s.host(), s.double_edges(), states, nullptr);
    for (std::size_t v = 0; v < states.size(); ++v)
        if (states[v] == NodeState::Unfrozen) prop.assume_negative(static_cast<NodeId>(v));
    NodeSet cover(states.size());
    for (std::size_t v = 0; v < states.size(); ++v)
        if (states[v] == NodeState::NegativeBackbone) cover.insert(static_cast<NodeId>(v));
    return cover;
}

}  // namespace kelayer

#endif  // KELAYER_KE_VERIFY_HPP
