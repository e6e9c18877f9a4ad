#ifndef KELAYER_EXACT_ORACLE_HPP
#define KELAYER_EXACT_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kelayer/graph.hpp"
#include "kelayer/ke_verify.hpp"
#include "kelayer/layer_decomp.hpp"
#include "kelayer/matching.hpp"

namespace kelayer {

class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    std::size_t mvc_number = 0;
    NodeSet one_cover;
    std::optional<std::vector<NodeSet>> all_covers;
};

struct ExactOptions {
    std::size_t budget = 130;  ///< largest node count accepted
    bool reductions = true;    ///< degree-0/1, domination, cycle and component rules
};

namespace detail {

/// Branch and bound for minimum vertex cover on bitset adjacency.
///
/// `search(alive, limit)` returns an optimal cover of the subgraph induced
/// by `alive` provided one of size < limit exists. Pruning uses the
/// matching number of the remaining subgraph as a lower bound; branching is
/// on a maximum-degree vertex (it is in the cover, or all its neighbors
/// are).
class VertexCoverSearch {
  public:
    using Bits = std::vector<std::uint64_t>;

    VertexCoverSearch(const Graph& g, bool reductions)
        : g_(g), n_(g.node_count()), words_((n_ + 63) / 64), reductions_(reductions),
          adj_(n_ * words_, 0), mask_(n_, 0) {
        for (const Edge& e : g.edges()) {
            set_bit(row(e.u), e.v);
            set_bit(row(e.v), e.u);
        }
    }

    std::vector<NodeId> solve() {
        Bits alive(words_, 0);
        for (std::size_t v = 0; v < n_; ++v) set_bit(alive.data(), v);
        std::vector<NodeId> greedy = greedy_cover(alive);
        auto better = search(alive, greedy.size());
        return better ? *better : greedy;
    }

  private:
    static void set_bit(std::uint64_t* b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
    static void clear_bit(std::uint64_t* b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    static bool test_bit(const std::uint64_t* b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }

    std::uint64_t* row(std::size_t v) { return adj_.data() + v * words_; }
    const std::uint64_t* row(std::size_t v) const { return adj_.data() + v * words_; }

    std::size_t degree(const Bits& alive, std::size_t v) const {
        const std::uint64_t* r = row(v);
        std::size_t d = 0;
        for (std::size_t w = 0; w < words_; ++w) d += static_cast<std::size_t>(std::popcount(r[w] & alive[w]));
        return d;
    }

    template <class F>
    void for_each(const Bits& bits, F&& f) const {
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t x = bits[w];
            while (x) {
                const auto b = static_cast<std::size_t>(std::countr_zero(x));
                f(w * 64 + b);
                x &= x - 1;
            }
        }
    }

    template <class F>
    void for_each_neighbor(const Bits& alive, std::size_t v, F&& f) const {
        const std::uint64_t* r = row(v);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t x = r[w] & alive[w];
            while (x) {
                const auto b = static_cast<std::size_t>(std::countr_zero(x));
                f(w * 64 + b);
                x &= x - 1;
            }
        }
    }

    std::vector<NodeId> greedy_cover(Bits alive) const {
        std::vector<NodeId> cover;
        for (;;) {
            std::size_t best = n_, best_d = 0;
            for_each(alive, [&](std::size_t v) {
                const std::size_t d = degree(alive, v);
                if (d > best_d) {
                    best_d = d;
                    best = v;
                }
            });
            if (best_d == 0) return cover;
            cover.push_back(static_cast<NodeId>(best));
            clear_bit(alive.data(), best);
        }
    }

    std::size_t matching_bound(const Bits& alive) {
        std::fill(mask_.begin(), mask_.end(), 0);
        for_each(alive, [&](std::size_t v) { mask_[v] = 1; });
        return solver_.matching_number(g_, mask_);
    }

    // N[u] ⊆ N[v] for adjacent u, v (closed neighborhoods within alive).
    bool dominated_by(const Bits& alive, std::size_t u, std::size_t v) const {
        const std::uint64_t* ru = row(u);
        const std::uint64_t* rv = row(v);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t nu = ru[w] & alive[w];
            std::uint64_t nv = rv[w] & alive[w];
            if (w == u / 64) nu |= std::uint64_t{1} << (u % 64);
            if (w == v / 64) nv |= std::uint64_t{1} << (v % 64);
            if (nu & ~nv) return false;
        }
        return true;
    }

    void reduce(Bits& alive, std::vector<NodeId>& forced) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < n_; ++v) {
                if (!test_bit(alive.data(), v)) continue;
                const std::size_t d = degree(alive, v);
                if (d == 0) {
                    clear_bit(alive.data(), v);
                    changed = true;
                } else if (d == 1) {
                    std::size_t u = 0;
                    for_each_neighbor(alive, v, [&](std::size_t x) { u = x; });
                    forced.push_back(static_cast<NodeId>(u));
                    clear_bit(alive.data(), u);
                    clear_bit(alive.data(), v);
                    changed = true;
                }
            }
            if (changed) continue;
            // Domination: if N[u] ⊆ N[v] some minimum cover contains v.
            for (std::size_t v = 0; v < n_ && !changed; ++v) {
                if (!test_bit(alive.data(), v)) continue;
                bool take = false;
                for_each_neighbor(alive, v, [&](std::size_t u) {
                    if (!take && dominated_by(alive, u, v)) take = true;
                });
                if (take) {
                    forced.push_back(static_cast<NodeId>(v));
                    clear_bit(alive.data(), v);
                    changed = true;
                }
            }
        }
    }

    std::vector<Bits> components(const Bits& alive) const {
        std::vector<Bits> out;
        Bits seen(words_, 0);
        std::vector<std::size_t> stack;
        for_each(alive, [&](std::size_t s) {
            if (test_bit(seen.data(), s)) return;
            Bits comp(words_, 0);
            stack.assign(1, s);
            set_bit(seen.data(), s);
            while (!stack.empty()) {
                const std::size_t x = stack.back();
                stack.pop_back();
                set_bit(comp.data(), x);
                for_each_neighbor(alive, x, [&](std::size_t y) {
                    if (!test_bit(seen.data(), y)) {
                        set_bit(seen.data(), y);
                        stack.push_back(y);
                    }
                });
            }
            out.push_back(std::move(comp));
        });
        return out;
    }

    // Connected graph with every degree equal to 2: a single cycle.
    std::vector<NodeId> cycle_cover(const Bits& alive) const {
        std::vector<std::size_t> order;
        std::size_t start = n_;
        for_each(alive, [&](std::size_t v) {
            if (start == n_) start = v;
        });
        std::size_t prev = n_, cur = start;
        do {
            order.push_back(cur);
            std::size_t next = n_;
            for_each_neighbor(alive, cur, [&](std::size_t y) {
                if (y != prev && next == n_) next = y;
            });
            prev = cur;
            cur = next;
        } while (cur != start);
        std::vector<NodeId> cover;
        for (std::size_t i = 1; i < order.size(); i += 2) cover.push_back(static_cast<NodeId>(order[i]));
        if (order.size() % 2 == 1) cover.push_back(static_cast<NodeId>(order[0]));
        return cover;
    }

    std::optional<std::vector<NodeId>> search(Bits alive, std::size_t limit) {
        std::vector<NodeId> chosen;
        if (reductions_) reduce(alive, chosen);
        if (chosen.size() >= limit) return std::nullopt;

        std::size_t max_d = 0, pivot = n_;
        for_each(alive, [&](std::size_t v) {
            const std::size_t d = degree(alive, v);
            if (d > max_d) {
                max_d = d;
                pivot = v;
            }
        });
        if (max_d == 0) return chosen;

        const std::size_t room = limit - chosen.size();
        if (matching_bound(alive) >= room) return std::nullopt;

        if (reductions_) {
            auto comps = components(alive);
            if (comps.size() > 1) {
                std::sort(comps.begin(), comps.end(), [](const Bits& a, const Bits& b) {
                    std::size_t ca = 0, cb = 0;
                    for (auto w : a) ca += static_cast<std::size_t>(std::popcount(w));
                    for (auto w : b) cb += static_cast<std::size_t>(std::popcount(w));
                    return ca < cb;
                });
                std::vector<std::size_t> lower(comps.size());
                std::size_t rest = 0;
                for (std::size_t i = 0; i < comps.size(); ++i) {
                    lower[i] = matching_bound(comps[i]);
                    rest += lower[i];
                }
                std::size_t used = 0;
                for (std::size_t i = 0; i < comps.size(); ++i) {
                    rest -= lower[i];
                    if (used + rest >= room) return std::nullopt;
                    auto part = search(comps[i], room - used - rest);
                    if (!part) return std::nullopt;
                    used += part->size();
                    chosen.insert(chosen.end(), part->begin(), part->end());
                }
                return chosen;
            }
            if (max_d == 2) {
                auto c = cycle_cover(alive);
                if (c.size() >= room) return std::nullopt;
                chosen.insert(chosen.end(), c.begin(), c.end());
                return chosen;
            }
        }

        std::optional<std::vector<NodeId>> best;
        std::size_t bound = room;

        // Pivot in the cover.
        {
            Bits next = alive;
            clear_bit(next.data(), pivot);
            if (bound > 1) {
                if (auto sub = search(std::move(next), bound - 1)) {
                    sub->push_back(static_cast<NodeId>(pivot));
                    bound = sub->size();
                    best = std::move(sub);
                }
            }
        }
        // Pivot out: all its neighbors in.
        if (max_d < bound) {
            Bits next = alive;
            std::vector<NodeId> nbrs;
            for_each_neighbor(alive, pivot, [&](std::size_t y) { nbrs.push_back(static_cast<NodeId>(y)); });
            clear_bit(next.data(), pivot);
            for (NodeId y : nbrs) clear_bit(next.data(), y);
            if (auto sub = search(std::move(next), bound - max_d)) {
                sub->insert(sub->end(), nbrs.begin(), nbrs.end());
                best = std::move(sub);
            }
        }
        if (!best) return std::nullopt;
        chosen.insert(chosen.end(), best->begin(), best->end());
        return chosen;
    }

    const Graph& g_;
    std::size_t n_;
    std::size_t words_;
    bool reductions_;
    Bits adj_;
    std::vector<char> mask_;
    MatchingSolver solver_;
};

}  // namespace detail

/// Exact minimum vertex cover. Throws BudgetExceeded above `opts.budget`
/// nodes.
inline OracleResult exact_mvc(const Graph& g, const ExactOptions& opts = {}) {
    if (g.node_count() > opts.budget)
        throw BudgetExceeded("exact_mvc: " + std::to_string(g.node_count()) + " nodes exceeds budget " +
                             std::to_string(opts.budget));
    detail::VertexCoverSearch search(g, opts.reductions);
    auto cover = search.solve();
    OracleResult r;
    r.mvc_number = cover.size();
    r.one_cover = NodeSet(g.node_count(), cover);
    if (!is_vertex_cover(g, r.one_cover)) throw std::logic_error("exact_mvc: produced a non-cover");
    return r;
}

/// Every minimum vertex cover, via include/exclude branching on the first
/// uncovered edge with the cover size pinned to the optimum. Throws
/// EnumerationCapExceeded past `cap` covers.
inline OracleResult enumerate_all_mvc(const Graph& g, std::size_t cap, const ExactOptions& opts = {}) {
    OracleResult r = exact_mvc(g, opts);
    const std::size_t k = r.mvc_number;
    const std::size_t n = g.node_count();
    std::vector<NodeSet> found;
    std::vector<int> in_cover(n, 0);  // >0 chosen, <0 excluded
    std::size_t chosen = 0;
    MatchingSolver solver;
    std::vector<char> rest(n, 0);

    auto uncovered_bound = [&] {
        // Matching number of the subgraph of still-uncovered edges.
        for (std::size_t v = 0; v < n; ++v) rest[v] = in_cover[v] > 0 ? 0 : 1;
        return solver.matching_number(g, rest);
    };

    auto recurse = [&](auto&& self) -> void {
        if (chosen > k) return;
        const Edge* open = nullptr;
        for (const Edge& e : g.edges())
            if (in_cover[e.u] <= 0 && in_cover[e.v] <= 0) {
                open = &e;
                break;
            }
        if (!open) {
            if (chosen == k) {
                if (found.size() == cap)
                    throw EnumerationCapExceeded("more than " + std::to_string(cap) + " minimum covers");
                NodeSet s(n);
                for (std::size_t v = 0; v < n; ++v)
                    if (in_cover[v] > 0) s.insert(static_cast<NodeId>(v));
                found.push_back(std::move(s));
            }
            return;
        }
        if (chosen + uncovered_bound() > k) return;
        const NodeId u = open->u;
        if (in_cover[u] == 0) {
            in_cover[u] = 1;
            ++chosen;
            self(self);
            --chosen;
            in_cover[u] = 0;
            // u excluded: all of its neighbors must be covered.
            in_cover[u] = -1;
        }
        std::vector<NodeId> added;
        bool feasible = true;
        for (NodeId w : g.neighbors(u)) {
            if (in_cover[w] > 0) continue;
            if (in_cover[w] < 0) {
                feasible = false;
                break;
            }
            in_cover[w] = 1;
            ++chosen;
            added.push_back(w);
        }
        if (feasible) self(self);
        for (NodeId w : added) in_cover[w] = 0;
        chosen -= added.size();
        if (in_cover[u] < 0) in_cover[u] = 0;
    };
    recurse(recurse);

    std::sort(found.begin(), found.end(),
              [](const NodeSet& a, const NodeSet& b) { return a.members() < b.members(); });
    found.erase(std::unique(found.begin(), found.end()), found.end());
    r.all_covers = std::move(found);
    return r;
}

struct ArrangementSearchResult {
    std::size_t min_energy = 0;
    std::vector<Side> best_sides;
    std::size_t zero_energy_count = 0;  ///< arrangements with an edge-free / matching-free B
};

/// Exhaustive minimum of the B-class energy over all 2^|M| arrangements of
/// `m` (unmatched nodes fixed in B), enumerated in Gray-code order.
inline ArrangementSearchResult exhaustive_arrangement_search(const Graph& g, const Matching& m,
                                                             EnergyMeasure measure,
                                                             std::size_t max_pairs = 20) {
    if (m.size() > max_pairs)
        throw BudgetExceeded("exhaustive_arrangement_search: " + std::to_string(m.size()) +
                             " matched pairs exceeds limit " + std::to_string(max_pairs));
    detail::SwitchState st(initial_arrangement(g, m), measure);
    const std::vector<Edge> pairs(st.pairs().begin(), st.pairs().end());
    std::vector<Side> sides(g.node_count(), Side::B);
    for (const Edge& p : pairs) sides[p.u] = Side::A;

    ArrangementSearchResult r;
    r.min_energy = st.energy();
    r.best_sides = sides;
    r.zero_energy_count = r.min_energy == 0 ? 1 : 0;
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t i = 1; i < total; ++i) {
        const Edge& p = pairs[static_cast<std::size_t>(std::countr_zero(i))];
        st.flip(p);
        std::swap(sides[p.u], sides[p.v]);
        const std::size_t e = st.energy();
        if (e == 0) ++r.zero_energy_count;
        if (e < r.min_energy) {
            r.min_energy = e;
            r.best_sides = sides;
        }
    }
    return r;
}

inline ArrangementSearchResult exhaustive_arrangement_search(const Graph& g, EnergyMeasure measure,
                                                             std::size_t max_pairs = 20) {
    return exhaustive_arrangement_search(g, maximum_matching(g), measure, max_pairs);
}

}  // namespace kelayer

#endif  // KELAYER_EXACT_ORACLE_HPP
