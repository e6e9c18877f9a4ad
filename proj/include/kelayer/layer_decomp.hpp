#ifndef KELAYER_LAYER_DECOMP_HPP
#define KELAYER_LAYER_DECOMP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kelayer/graph.hpp"
#include "kelayer/ke_verify.hpp"
#include "kelayer/matching.hpp"
#include "kelayer/rng.hpp"

namespace kelayer {

/// How the cost of the B class is estimated.
enum class EnergyMeasure : std::uint8_t {
    EdgeCount,       ///< edges inside B
    MatchingNumber,  ///< maximum matching number of the subgraph induced by B
};

/// Switching strategy used to lower the B-class energy.
enum class Strategy : std::uint8_t {
    Greedy = 1,       ///< strategy 1: one pass over pairs, keep strict improvements
    RandomPairs = 2,  ///< strategy 2: #M random double swaps, keep strict improvements
    Threshold = 3,    ///< strategy 3: like 2, non-improving swaps survive with prob. 1 - threshold
};

inline std::string_view to_string(EnergyMeasure m) {
    return m == EnergyMeasure::EdgeCount ? "edges" : "matching";
}

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Greedy: return "1";
        case Strategy::RandomPairs: return "2";
        case Strategy::Threshold: return "3";
    }
    return "?";
}

enum class Side : std::uint8_t { A, B };

/// Split of a graph's nodes into classes A and B under a matching: each
/// matched pair straddles the classes and unmatched nodes sit in B.
///
/// Holds a pointer to the host graph, which must outlive the arrangement.
class Arrangement {
  public:
    Arrangement(const Graph& host, Matching matching, std::vector<Side> sides)
        : host_(&host), matching_(std::move(matching)), sides_(std::move(sides)) {
        if (matching_.node_count() != host.node_count() || sides_.size() != host.node_count())
            throw std::invalid_argument("arrangement: size mismatch with host graph");
        if (!is_valid_matching(host, matching_))
            throw std::invalid_argument("arrangement: matching is not valid for the host graph");
        if (!satisfies_invariants()) throw std::invalid_argument("arrangement: invalid class split");
    }

    const Graph& host() const noexcept { return *host_; }
    const Matching& matching() const noexcept { return matching_; }
    Side side(NodeId v) const { return sides_[v]; }
    std::span<const Side> sides() const noexcept { return sides_; }

    NodeSet class_a() const { return collect(Side::A); }
    NodeSet class_b() const { return collect(Side::B); }

    /// Exchanges the classes of `v` and its mate. `v` must be matched.
    void swap_pair(NodeId v) {
        const auto w = matching_.mate(v);
        if (!w) throw std::invalid_argument("swap_pair: node " + std::to_string(v) + " is unmatched");
        std::swap(sides_[v], sides_[*w]);
    }

    bool satisfies_invariants() const {
        for (std::size_t v = 0; v < sides_.size(); ++v) {
            const auto w = matching_.mate(static_cast<NodeId>(v));
            if (!w) {
                if (sides_[v] != Side::B) return false;
            } else if (sides_[v] == sides_[*w]) {
                return false;
            }
        }
        return true;
    }

  private:
    NodeSet collect(Side s) const {
        NodeSet out(sides_.size());
        for (std::size_t v = 0; v < sides_.size(); ++v)
            if (sides_[v] == s) out.insert(static_cast<NodeId>(v));
        return out;
    }

    const Graph* host_;
    Matching matching_;
    std::vector<Side> sides_;
};

/// Energy of a (sub)graph under `measure`.
inline std::size_t energy(const Graph& g_sub, EnergyMeasure measure) {
    if (measure == EnergyMeasure::EdgeCount) return g_sub.edge_count();
    return maximum_matching(g_sub).size();
}

/// Lower-indexed endpoint of each matched pair to A, everything else to B.
inline Arrangement initial_arrangement(const Graph& g, Matching m) {
    std::vector<Side> sides(g.node_count(), Side::B);
    for (const Edge& p : m.pairs()) sides[p.u] = Side::A;
    return Arrangement(g, std::move(m), std::move(sides));
}

namespace detail {

/// Energy of the B class, maintained alongside swaps. Edge counts are
/// updated in O(degree); the B-class maximum matching is repaired with one
/// augmenting search per moved node.
class BClassEnergy {
  public:
    BClassEnergy(const Arrangement& arr, EnergyMeasure measure)
        : g_(arr.host()), measure_(measure), in_b_(g_.node_count(), 0) {
        for (std::size_t v = 0; v < in_b_.size(); ++v)
            in_b_[v] = arr.side(static_cast<NodeId>(v)) == Side::B ? 1 : 0;
        if (measure_ == EnergyMeasure::EdgeCount) {
            b_neighbors_.assign(in_b_.size(), 0);
            for (const Edge& e : g_.edges()) {
                if (in_b_[e.v]) ++b_neighbors_[e.u];
                if (in_b_[e.u]) ++b_neighbors_[e.v];
                if (in_b_[e.u] && in_b_[e.v]) ++edges_;
            }
        } else {
            matched_ = solver_.matching_number(g_, in_b_);
        }
    }

    std::size_t value() const { return measure_ == EnergyMeasure::EdgeCount ? edges_ : matched_; }

    /// `to_b` moves from A into B and `to_a` from B into A.
    void exchange(NodeId to_b, NodeId to_a) {
        if (measure_ == EnergyMeasure::EdgeCount) {
            leave_b(to_a);
            enter_b(to_b);
        } else {
            in_b_[to_a] = 0;
            solver_.node_removed(g_, in_b_, to_a);
            in_b_[to_b] = 1;
            matched_ = solver_.node_added(g_, in_b_, to_b);
        }
    }

  private:
    void leave_b(NodeId v) {
        in_b_[v] = 0;
        edges_ -= b_neighbors_[v];
        for (NodeId w : g_.neighbors(v)) --b_neighbors_[w];
    }
    void enter_b(NodeId v) {
        for (NodeId w : g_.neighbors(v)) ++b_neighbors_[w];
        edges_ += b_neighbors_[v];
        in_b_[v] = 1;
    }

    const Graph& g_;
    EnergyMeasure measure_;
    std::vector<char> in_b_;
    std::vector<std::size_t> b_neighbors_;
    std::size_t edges_ = 0;
    std::size_t matched_ = 0;
    MatchingSolver solver_;
};

/// Arrangement plus its energy tracker, kept in lockstep.
class SwitchState {
  public:
    SwitchState(Arrangement arr, EnergyMeasure measure)
        : arr_(std::move(arr)), energy_(arr_, measure), pairs_(arr_.matching().pairs()) {}

    std::size_t energy() const { return energy_.value(); }
    std::span<const Edge> pairs() const { return pairs_; }

    /// Swaps the sides of matched pair `p`.
    void flip(const Edge& p) {
        const bool u_in_a = arr_.side(p.u) == Side::A;
        energy_.exchange(u_in_a ? p.u : p.v, u_in_a ? p.v : p.u);
        arr_.swap_pair(p.u);
    }

    NodeId a_endpoint(const Edge& p) const { return arr_.side(p.u) == Side::A ? p.u : p.v; }

    Arrangement take() && { return std::move(arr_); }

  private:
    Arrangement arr_;
    BClassEnergy energy_;
    std::vector<Edge> pairs_;
};

}  // namespace detail

struct SwitchResult {
    Arrangement arrangement;
    std::size_t energy = 0;
};

/// Energy of the B class of `arr` computed from scratch.
inline std::size_t arrangement_energy(const Arrangement& arr, EnergyMeasure measure) {
    return energy(induced_subgraph(arr.host(), arr.class_b()).graph, measure);
}

/// Strategy 1. Visits matched pairs in ascending order of their A endpoint
/// (taken at entry), swaps each, and keeps the swap only on a strict energy
/// decrease.
inline SwitchResult switch_greedy(Arrangement arr, EnergyMeasure measure) {
    detail::SwitchState st(std::move(arr), measure);
    std::vector<std::pair<NodeId, Edge>> order;
    for (const Edge& p : st.pairs()) order.emplace_back(st.a_endpoint(p), p);
    std::sort(order.begin(), order.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    std::size_t e = st.energy();
    for (const auto& [a, p] : order) {
        st.flip(p);
        const std::size_t e2 = st.energy();
        if (e2 >= e)
            st.flip(p);
        else
            e = e2;
    }
    return {std::move(st).take(), e};
}

namespace detail {

inline std::pair<Edge, Edge> draw_two_pairs(std::span<const Edge> pairs, RngStream& rng) {
    const std::uint64_t k = pairs.size();
    const std::uint64_t first = rng.below(k);
    std::uint64_t second = rng.below(k - 1);
    if (second >= first) ++second;
    return {pairs[first], pairs[second]};
}

// Shared body of strategies 2 and 3: `keep_worse` decides, for a
// non-improving double swap, whether it survives.
template <class KeepWorse>
SwitchResult random_double_swaps(Arrangement arr, EnergyMeasure measure, RngStream& rng,
                                 KeepWorse keep_worse) {
    detail::SwitchState st(std::move(arr), measure);
    const std::size_t rounds = st.pairs().size();
    if (rounds < 2) {
        const std::size_t e = st.energy();
        return {std::move(st).take(), e};
    }
    for (std::size_t t = 0; t < rounds; ++t) {
        const std::size_t e = st.energy();
        const auto [p1, p2] = draw_two_pairs(st.pairs(), rng);
        st.flip(p1);
        st.flip(p2);
        const std::size_t e2 = st.energy();
        const bool keep = keep_worse();
        if (e2 >= e && !keep) {
            st.flip(p2);
            st.flip(p1);
        }
    }
    const std::size_t e = st.energy();
    return {std::move(st).take(), e};
}

}  // namespace detail

/// Strategy 2. #M rounds; each swaps two distinct random pairs and reverts
/// both unless the energy strictly decreased.
inline SwitchResult switch_random_pairs(Arrangement arr, EnergyMeasure measure, RngStream& rng) {
    return detail::random_double_swaps(std::move(arr), measure, rng, [] { return false; });
}

/// Strategy 3. As strategy 2, but a uniform R in [0,1) is drawn every
/// round and a non-improving swap is reverted only when R <= threshold.
inline SwitchResult switch_threshold(Arrangement arr, EnergyMeasure measure, double threshold,
                                     RngStream& rng) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument("switch_threshold: threshold must lie in [0, 1]");
    return detail::random_double_swaps(std::move(arr), measure, rng,
                                       [&] { return !(rng.uniform() <= threshold); });
}

struct StrategyConfig {
    Strategy strategy = Strategy::Greedy;
    EnergyMeasure energy = EnergyMeasure::EdgeCount;
    double threshold = 0.9;  // strategy 3 only
    std::uint64_t seed = 0;
};

class LayerCapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Result of peeling: classes A_1..A_{L-1} and the final KE class, all in
/// the input graph's indices.
struct LayerDecomposition {
    std::vector<NodeSet> layer_classes;
    NodeSet final_class;
    std::size_t final_matching_size = 0;
    std::size_t layer_count = 1;
    std::size_t mvc_estimate = 0;
    /// Terminal B-class energy reached for each peeled layer.
    std::vector<std::size_t> layer_energies;
};

/// ⌈log₂ n⌉ + 2, the most layers `decompose` will peel.
inline std::size_t layer_cap(std::size_t n) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    return bits + 2;
}

inline SwitchResult run_switch(Arrangement arr, const StrategyConfig& cfg, RngStream& rng) {
    switch (cfg.strategy) {
        case Strategy::Greedy: return switch_greedy(std::move(arr), cfg.energy);
        case Strategy::RandomPairs: return switch_random_pairs(std::move(arr), cfg.energy, rng);
        case Strategy::Threshold: return switch_threshold(std::move(arr), cfg.energy, cfg.threshold, rng);
    }
    throw std::invalid_argument("unknown strategy");
}

/// Peels KE layers: while the current subgraph is not KE, arrange its
/// maximum matching, repeat the switching strategy while it strictly lowers
/// the energy, fix A as a layer and continue on the subgraph induced by B.
/// The cover estimate is the final matching number plus all peeled |A_l|.
inline LayerDecomposition decompose(const Graph& g, const StrategyConfig& cfg) {
    const std::size_t n = g.node_count();
    const std::size_t cap = layer_cap(n);
    RngStream rng(cfg.seed);
    LayerDecomposition d;

    Subgraph current{g, {}};
    current.to_parent.resize(n);
    for (std::size_t v = 0; v < n; ++v) current.to_parent[v] = static_cast<NodeId>(v);

    for (;;) {
        KeVerdict verdict = verify_ke(current.graph);
        if (verdict.is_ke) {
            d.final_matching_size = verdict.matching_number;
            break;
        }
        if (d.layer_classes.size() == cap)
            throw LayerCapExceeded("decompose: more than " + std::to_string(cap) + " layers for " +
                                   std::to_string(n) + " nodes");

        const Graph& layer = current.graph;
        const std::size_t ln = layer.node_count();
        Arrangement arr = initial_arrangement(layer, verdict.solution.double_edges());

        std::size_t sentinel = ln * ln;
        SwitchResult r = run_switch(std::move(arr), cfg, rng);
        Arrangement best = r.arrangement;
        std::size_t best_energy = r.energy;
        while (sentinel > r.energy) {
            sentinel = r.energy;
            r = run_switch(std::move(r.arrangement), cfg, rng);
            if (r.energy < best_energy) {
                best = r.arrangement;
                best_energy = r.energy;
            }
        }

        NodeSet a_local = best.class_a();
        NodeSet b_local = best.class_b();
        d.layer_classes.push_back(current.lift(a_local, n));
        d.layer_energies.push_back(best_energy);

        Subgraph next = induced_subgraph(layer, b_local);
        for (NodeId& v : next.to_parent) v = current.to_parent[v];
        current = std::move(next);
    }

    d.final_class = current.lift(NodeSet::all(current.graph.node_count()), n);
    d.layer_count = d.layer_classes.size() + 1;
    d.mvc_estimate = d.final_matching_size;
    for (const NodeSet& a : d.layer_classes) d.mvc_estimate += a.size();
    return d;
}

/// Union of the peeled classes and a minimum cover of the final KE class.
/// Throws std::logic_error if the result is not a cover of size
/// `d.mvc_estimate`.
inline NodeSet cover_from_decomposition(const Graph& g, const LayerDecomposition& d) {
    NodeSet cover(g.node_count());
    for (const NodeSet& a : d.layer_classes)
        for (NodeId v : a.members()) cover.insert(v);

    Subgraph last = induced_subgraph(g, d.final_class);
    KeVerdict verdict = verify_ke(last.graph);
    if (!verdict.is_ke) throw std::logic_error("cover_from_decomposition: final class is not KE");
    for (NodeId v : one_min_cover(verdict.solution).members()) cover.insert(last.to_parent[v]);

    if (!is_vertex_cover(g, cover))
        throw std::logic_error("cover_from_decomposition: result leaves an edge uncovered");
    if (cover.size() != d.mvc_estimate)
        throw std::logic_error("cover_from_decomposition: cover size " + std::to_string(cover.size()) +
                               " differs from estimate " + std::to_string(d.mvc_estimate));
    return cover;
}

}  // namespace kelayer

#endif  // KELAYER_LAYER_DECOMP_HPP
