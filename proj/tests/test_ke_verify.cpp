#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kelayer/generators.hpp"
#include "kelayer/ke_verify.hpp"
#include "oracles.hpp"

using namespace kelayer;

namespace {

Matching matching_of(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
    Matching m(n);
    for (auto [u, v] : pairs) m.match(u, v);
    return m;
}

std::vector<oracle::Mask> masks(const std::vector<NodeSet>& sets) {
    std::vector<oracle::Mask> out;
    for (const NodeSet& s : sets) {
        oracle::Mask m = 0;
        for (NodeId v : s.members()) m |= oracle::Mask{1} << v;
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Two triangles joined by one edge: perfectly matchable, cover number 4.
Graph joined_triangles() { return build_graph(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}}); }

}  // namespace

TEST(FreezingInfluence, StarFromUnmatchedLeaf) {
    const Graph g = families::star(3);  // center 0
    ReducedSolutionGraph s(g, matching_of(4, {{0, 1}}));
    s.set_state(2, NodeState::PositiveBackbone);
    s = freezing_influence(std::move(s), 2);
    EXPECT_EQ(s.state(0), NodeState::NegativeBackbone);
    EXPECT_EQ(s.state(1), NodeState::PositiveBackbone);
    EXPECT_EQ(s.state(2), NodeState::PositiveBackbone);
    EXPECT_EQ(s.state(3), NodeState::Unfrozen);
    EXPECT_TRUE(consistency_check(s));
}

TEST(FreezingInfluence, IsolatedNodeChangesNothingElse) {
    const Graph g = build_graph(3, {{0, 1}});
    ReducedSolutionGraph s(g, matching_of(3, {{0, 1}}));
    s.set_state(2, NodeState::PositiveBackbone);
    s = freezing_influence(std::move(s), 2);
    EXPECT_EQ(s.state_letters(), "UUP");
}

TEST(FreezingInfluence, FiveCycleTrace) {
    // Cycle 0-1-2-3-4-0, pairs (0,1),(2,3), start at the unmatched node 4.
    const Graph g = families::cycle(5);
    ReducedSolutionGraph s(g, matching_of(5, {{0, 1}, {2, 3}}));
    s.set_state(4, NodeState::PositiveBackbone);
    s = freezing_influence(std::move(s), 4);
    EXPECT_EQ(s.state_letters(), "NPNNP");
    EXPECT_FALSE(consistency_check(s));  // pair (2,3) is negative on both ends
}

TEST(FreezingInfluence, RequiresPositiveStart) {
    ReducedSolutionGraph s(families::cycle(4), matching_of(4, {{0, 1}, {2, 3}}));
    EXPECT_THROW(freezing_influence(s, 0), std::invalid_argument);
}

TEST(ReducedSolutionGraphValue, RejectsNonMatching) {
    Matching bad(4);
    bad.match(0, 2);
    EXPECT_THROW(ReducedSolutionGraph(families::cycle(4), bad), GraphError);
}

TEST(ConsistencyCheck, Examples) {
    ReducedSolutionGraph c4(families::cycle(4), matching_of(4, {{0, 1}, {2, 3}}));
    EXPECT_TRUE(consistency_check(c4));

    ReducedSolutionGraph edge(build_graph(2, {{0, 1}}), Matching(2));
    edge.set_state(0, NodeState::PositiveBackbone);
    edge.set_state(1, NodeState::PositiveBackbone);
    EXPECT_FALSE(consistency_check(edge));

    ReducedSolutionGraph pair(build_graph(2, {{0, 1}}), matching_of(2, {{0, 1}}));
    pair.set_state(0, NodeState::NegativeBackbone);
    pair.set_state(1, NodeState::NegativeBackbone);
    EXPECT_FALSE(consistency_check(pair));
}

TEST(ConflictionCheck, FourCycleStaysFree) {
    ReducedSolutionGraph s(families::cycle(4), matching_of(4, {{0, 1}, {2, 3}}));
    s = confliction_check(std::move(s));
    EXPECT_FALSE(s.empty());
    EXPECT_EQ(s.state_letters(), "UUUU");
}

TEST(ConflictionCheck, SingleEdgeStaysFree) {
    ReducedSolutionGraph s(build_graph(2, {{0, 1}}), matching_of(2, {{0, 1}}));
    s = confliction_check(std::move(s));
    EXPECT_FALSE(s.empty());
    EXPECT_EQ(s.state_letters(), "UU");
}

TEST(ConflictionCheck, TwoOddCyclesThroughAPairAreRejected) {
    const Graph g = joined_triangles();
    const Matching m = maximum_matching(g);
    ASSERT_EQ(m.size(), 3u);  // nothing unmatched, so only the trials can reject
    ReducedSolutionGraph s(g, m);
    ASSERT_TRUE(consistency_check(s));
    EXPECT_TRUE(confliction_check(std::move(s)).empty());
    EXPECT_EQ(oracle::mvc_number(g), 4u);
}

TEST(VerifyKe, Examples) {
    EXPECT_TRUE(is_ke(families::cycle(4)));
    EXPECT_FALSE(is_ke(families::cycle(3)));
    EXPECT_FALSE(is_ke(families::cycle(5)));
    EXPECT_FALSE(is_ke(families::petersen()));
    EXPECT_FALSE(is_ke(joined_triangles()));
    EXPECT_TRUE(is_ke(Graph(3, {})));
    EXPECT_TRUE(is_ke(Graph()));
    EXPECT_TRUE(is_ke(families::star(3)));
    const KeVerdict v = verify_ke(families::cycle(4));
    EXPECT_EQ(v.matching_number, 2u);
    EXPECT_FALSE(v.solution.empty());
}

TEST(VerifyKe, StarBackbones) {
    const KeVerdict v = verify_ke(families::star(3));
    ASSERT_TRUE(v.is_ke);
    EXPECT_EQ(v.solution.state_letters(), "NPPP");
}

TEST(EnumerateMinCovers, Examples) {
    const KeVerdict c4 = verify_ke(families::cycle(4));
    const auto c4_covers = enumerate_min_covers(c4.solution, 100);
    EXPECT_EQ(masks(c4_covers), (std::vector<oracle::Mask>{0b0101, 0b1010}));

    const KeVerdict star = verify_ke(families::star(3));
    const auto star_covers = enumerate_min_covers(star.solution, 100);
    ASSERT_EQ(star_covers.size(), 1u);
    EXPECT_EQ(star_covers[0], NodeSet(4, {0}));

    const KeVerdict k2 = verify_ke(build_graph(2, {{0, 1}}));
    EXPECT_EQ(enumerate_min_covers(k2.solution, 100).size(), 2u);
}

TEST(EnumerateMinCovers, CapAndEmpty) {
    const KeVerdict c4 = verify_ke(families::cycle(4));
    EXPECT_THROW(enumerate_min_covers(c4.solution, 1), EnumerationCapExceeded);
    const KeVerdict c3 = verify_ke(families::cycle(3));
    EXPECT_THROW(enumerate_min_covers(c3.solution, 10), std::invalid_argument);
    EXPECT_THROW(one_min_cover(c3.solution), std::invalid_argument);
}

TEST(VerifyKeProperty, AllGraphsUpToFiveNodes) {
    for (std::size_t n = 0; n <= 5; ++n)
        oracle::for_each_graph(n, [](const Graph& g) { ASSERT_EQ(is_ke(g), oracle::is_ke(g)); });
}

TEST(VerifyKeProperty, RandomGraphsUpToTwelveNodes) {
    oracle::Gen gen(20240601);
    for (int t = 0; t < 500; ++t) {
        const Graph g = gen.small_graph(12);
        ASSERT_EQ(is_ke(g), oracle::is_ke(g));
    }
}

TEST(VerifyKeProperty, BipartiteGraphsAreKe) {
    oracle::Gen gen(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = gen.range(1, 200);
        EXPECT_TRUE(is_ke(gen.bipartite(n, gen.unit() * 6.0 / static_cast<double>(n))));
    }
}

TEST(VerifyKeProperty, EmptyLeafRemovalCoreIsKe) {
    oracle::Gen gen(4);
    for (int t = 0; t < 100; ++t) {
        const Graph g = gen.empty_core(gen.range(0, 10), gen.range(1, 60), gen.unit() * 0.1);
        ASSERT_EQ(remove_leaves(g).core.graph.edge_count(), 0u);
        EXPECT_TRUE(is_ke(g));
    }
}

TEST(VerifyKeProperty, BackbonesMatchAllMinimumCovers) {
    oracle::Gen gen(5);
    int checked = 0;
    while (checked < 200) {
        const Graph g = gen.small_graph(12);
        const KeVerdict v = verify_ke(g);
        if (!v.is_ke) continue;
        ++checked;
        ASSERT_EQ(v.solution.state_letters(), oracle::backbone_letters(g));
        const auto truth = oracle::all_min_covers(g);
        ASSERT_EQ(masks(enumerate_min_covers(v.solution, 5000)), truth.all);
        const NodeSet one = one_min_cover(v.solution);
        ASSERT_TRUE(is_vertex_cover(g, one));
        ASSERT_EQ(one.size(), truth.size);
    }
}

TEST(VerifyKeProperty, TrialOrderDoesNotMatter) {
    oracle::Gen gen(6);
    for (int t = 0; t < 300; ++t) {
        const Graph g = gen.small_graph(12);
        const KeVerdict up = verify_ke(g, TrialOrder::Ascending);
        const KeVerdict down = verify_ke(g, TrialOrder::Descending);
        ASSERT_EQ(up.is_ke, down.is_ke);
        if (up.is_ke) {
            ASSERT_EQ(up.solution.state_letters(), down.solution.state_letters());
        }
    }
}

TEST(VerifyKeProperty, FreezingInfluenceMonotoneAndIdempotent) {
    oracle::Gen gen(7);
    for (int t = 0; t < 200; ++t) {
        const Graph g = gen.small_graph(12);
        const Matching m = maximum_matching(g);
        const NodeSet free_nodes = unmatched_nodes(g, m);
        if (free_nodes.empty()) continue;
        ReducedSolutionGraph s(g, m);
        const NodeId k = free_nodes.members().front();
        s.set_state(k, NodeState::PositiveBackbone);
        const std::string before = s.state_letters();
        const ReducedSolutionGraph once = freezing_influence(s, k);
        const std::string after = once.state_letters();
        for (std::size_t v = 0; v < before.size(); ++v) {
            if (before[v] != 'U') {
                ASSERT_EQ(before[v], after[v]);
            }
        }
        ASSERT_EQ(freezing_influence(once, k).state_letters(), after);
    }
}

TEST(VerifyKeProperty, LargeSparseGraphsAgreeWithCoverSize) {
    // Bigger instances: a KE verdict must come with a cover of matching size.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream r(seed);
        const Graph g = generate_er(2000, 1.0 + 0.1 * static_cast<double>(seed), r);
        const KeVerdict v = verify_ke(g);
        if (!v.is_ke) continue;
        const NodeSet c = one_min_cover(v.solution);
        EXPECT_TRUE(is_vertex_cover(g, c));
        EXPECT_EQ(c.size(), v.matching_number);
    }
}

TEST(VerifyKeRuntime, SubQuadraticOnSparseGraphs) {
    auto time_at = [](std::size_t n) {
        double best = 1e9;
        for (std::uint64_t rep = 0; rep < 3; ++rep) {
            RngStream r(derive_seed(n, {rep}));
            const Graph g = generate_er(n, 1.5, r);
            const auto t0 = std::chrono::steady_clock::now();
            (void)verify_ke(g);
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return best;
    };
    const double small = time_at(8000);
    const double large = time_at(128000);
    const double exponent = std::log(large / small) / std::log(16.0);
    EXPECT_LT(exponent, 1.6) << "small " << small << "s, large " << large << "s";
}
