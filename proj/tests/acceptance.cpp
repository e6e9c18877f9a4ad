// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "kelayer/kelayer.hpp"
#include "oracles.hpp"

using namespace kelayer;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

const std::pair<Strategy, EnergyMeasure> kAll[] = {
    {Strategy::Greedy, EnergyMeasure::EdgeCount},       {Strategy::Greedy, EnergyMeasure::MatchingNumber},
    {Strategy::RandomPairs, EnergyMeasure::EdgeCount},  {Strategy::RandomPairs, EnergyMeasure::MatchingNumber},
    {Strategy::Threshold, EnergyMeasure::EdgeCount},    {Strategy::Threshold, EnergyMeasure::MatchingNumber},
};

Outcome oracle_equivalence() {
    std::size_t graphs = 0, mismatches = 0;
    for (std::size_t n = 0; n <= 5; ++n)
        oracle::for_each_graph(n, [&](const Graph& g) {
            ++graphs;
            mismatches += is_ke(g) != oracle::is_ke(g);
        });
    oracle::Gen gen(1001);
    for (int t = 0; t < 500; ++t) {
        const Graph g = gen.small_graph(12);
        ++graphs;
        mismatches += is_ke(g) != oracle::is_ke(g);
    }
    return {mismatches == 0, std::to_string(graphs) + " graphs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome backbone_exactness() {
    oracle::Gen gen(1002);
    std::size_t checked = 0, wrong = 0;
    while (checked < 200) {
        const Graph g = gen.small_graph(12);
        if (!oracle::is_ke(g)) continue;
        ++checked;
        const KeVerdict v = verify_ke(g);
        if (!v.is_ke || v.solution.state_letters() != oracle::backbone_letters(g)) ++wrong;
    }
    return {wrong == 0, std::to_string(checked) + " KE graphs, " + std::to_string(wrong) + " state mismatches"};
}

Outcome bipartite_and_leafless() {
    oracle::Gen gen(1003);
    std::size_t failures = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = gen.range(1, 200);
        failures += !is_ke(gen.bipartite(n, gen.unit() * 8.0 / static_cast<double>(n)));
    }
    std::size_t bad_cores = 0;
    for (int t = 0; t < 200; ++t) {
        const Graph g = gen.empty_core(gen.range(0, 10), gen.range(1, 95), gen.unit() * 0.05);
        bad_cores += remove_leaves(g).core.graph.edge_count() != 0;
        failures += !is_ke(g);
    }
    return {failures == 0 && bad_cores == 0,
            "400 graphs, " + std::to_string(failures) + " rejected as non-KE"};
}

Outcome cover_estimate_validity() {
    oracle::Gen gen(1004);
    std::size_t decompositions = 0, violations = 0;
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = gen.range(10, 60);
        const double degree = 1.0 + 7.0 * gen.unit();
        RngStream rng(derive_seed(1004, {static_cast<std::uint64_t>(t)}));
        const Graph g = generate_er(n, degree, rng);
        const std::size_t exact = exact_mvc(g).mvc_number;
        for (const auto& [s, m] : kAll) {
            ++decompositions;
            const LayerDecomposition d = decompose(g, {s, m, 0.9, static_cast<std::uint64_t>(t)});
            try {
                const NodeSet c = cover_from_decomposition(g, d);
                if (!is_vertex_cover(g, c) || c.size() != d.mvc_estimate || d.mvc_estimate < exact) ++violations;
            } catch (const std::logic_error&) {
                ++violations;
            }
        }
    }
    return {violations == 0,
            std::to_string(decompositions) + " decompositions, " + std::to_string(violations) + " violations"};
}

Outcome gap_reproduction() {
    GapConfig a;
    a.n_values = {80};
    a.degrees = {3.0};
    a.jobs = jobs();
    GapConfig b = a;
    b.n_values = {120};
    b.degrees = {7.0};
    const double ga = gap_table(a).cells.at(0).mean_gap_percent;
    const double gb = gap_table(b).cells.at(0).mean_gap_percent;
    const bool ok_a = ga >= 0.88 - 0.7 && ga <= 0.88 + 0.7;
    const bool ok_b = gb >= 1.58 - 0.9 && gb <= 1.58 + 0.9;
    return {ok_a && ok_b, "N=80 c=3: " + fmt("%.3f", ga) + "% (target 0.88 +- 0.7), N=120 c=7: " +
                              fmt("%.3f", gb) + "% (target 1.58 +- 0.9)"};
}

Outcome transition_peaks() {
    SweepConfig low;
    low.n = 1000;
    low.samples = 20;
    low.degrees = parse_grid("2.2:3.2:0.1");
    low.jobs = jobs();
    SweepConfig high = low;
    high.degrees = parse_grid("8:13:0.5");
    const TransitionEstimate t1 = estimate_transition(run_sweep(low));
    const TransitionEstimate t2 = estimate_transition(run_sweep(high));
    double mean_at_13 = 0;
    for (std::size_t i = 0; i < t2.degree_grid.size(); ++i)
        if (t2.degree_grid[i] >= 13.0 - 1e-9) mean_at_13 = t2.mean_layer[i];
    const bool ok1 = t1.peak_degree >= 2.4 - 1e-9 && t1.peak_degree <= 3.0 + 1e-9;
    const bool ok2 = t2.peak_degree >= 9.5 - 1e-9 && t2.peak_degree <= 11.5 + 1e-9;
    const bool ok3 = mean_at_13 >= 2.9;
    return {ok1 && ok2 && ok3, "first peak " + fmt("%.1f", t1.peak_degree) + " (want 2.4..3.0), second peak " +
                                   fmt("%.1f", t2.peak_degree) + " (want 9.5..11.5), mean layers at 13 " +
                                   fmt("%.2f", mean_at_13) + " (want >= 2.9)"};
}

// Repeats a strategy from the initial arrangement while it strictly lowers
// the energy; returns the lowest energy seen.
std::size_t terminal_energy(const Graph& g, const Matching& m, Strategy s, EnergyMeasure measure,
                            std::uint64_t seed) {
    RngStream rng(seed);
    const StrategyConfig cfg{s, measure, 0.9, seed};
    SwitchResult r = run_switch(initial_arrangement(g, m), cfg, rng);
    std::size_t best = r.energy, last = g.node_count() * g.node_count();
    while (last > r.energy) {
        last = r.energy;
        r = run_switch(std::move(r.arrangement), cfg, rng);
        best = std::min(best, r.energy);
    }
    return best;
}

Outcome strategy_gap() {
    oracle::Gen gen(1007);
    std::size_t graphs = 0, below_optimum = 0;
    double gap_sum[2] = {0, 0};
    const EnergyMeasure measures[] = {EnergyMeasure::EdgeCount, EnergyMeasure::MatchingNumber};
    while (graphs < 100) {
        const std::size_t n = gen.range(8, 28);
        RngStream rng(derive_seed(1007, {graphs, n}));
        const Graph g = generate_er(n, 2.0 + 4.0 * gen.unit(), rng);
        const Matching m = maximum_matching(g);
        if (m.size() > 14 || m.size() < 2) continue;
        for (int k = 0; k < 2; ++k) {
            const std::size_t opt = exhaustive_arrangement_search(g, m, measures[k]).min_energy;
            const std::size_t e1 = terminal_energy(g, m, Strategy::Greedy, measures[k], graphs);
            const std::size_t e2 = terminal_energy(g, m, Strategy::RandomPairs, measures[k], graphs);
            below_optimum += (e1 < opt) + (e2 < opt);
            gap_sum[k] += static_cast<double>(e2 - std::min(e2, opt));
        }
        ++graphs;
    }
    const double mean_edges = gap_sum[0] / 100.0, mean_matching = gap_sum[1] / 100.0;
    return {below_optimum == 0 && mean_edges <= 1.0 && mean_matching <= 1.0,
            "100 graphs, " + std::to_string(below_optimum) + " energies below optimum, random-pairs mean excess " +
                fmt("%.3f", mean_edges) + " (edges), " + fmt("%.3f", mean_matching) + " (matching)"};
}

Outcome sweep_determinism() {
    auto run = [](std::vector<std::string> args) {
        args.insert(args.begin(), "kelayer");
        std::ostringstream out, err;
        const int code = cli::cli_main(args, out, err);
        return code == 0 ? out.str() : std::string();
    };
    auto lines = [](const std::string& s) { return std::to_string(std::count(s.begin(), s.end(), '\n')); };

    // The default sweep (n = 1000, 20 samples, full default grid).
    const std::vector<std::string> full{"sweep", "--format", "csv", "--seed", "2024"};
    std::vector<std::string> full_threaded = full;
    full_threaded.insert(full_threaded.end(), {"--jobs", std::to_string(std::max(2u, jobs()))});
    const std::string a = run(full), b = run(full), c = run(full_threaded);

    // Every strategy and energy, fewer samples.
    const std::vector<std::string> mixed{"sweep", "--degrees", "1:20:1", "--samples", "2", "--strategy", "1",
                                         "--strategy", "2", "--strategy", "3", "--energy", "edges", "--energy",
                                         "matching", "--format", "csv", "--seed", "7"};
    const std::string d = run(mixed), e = run(mixed);

    const bool ok = !a.empty() && a == b && a == c && !d.empty() && d == e;
    return {ok, "default sweep " + lines(a) + " lines, repeat " + (a == b ? "identical" : "differs") +
                    ", threaded " + (a == c ? "identical" : "differs") + "; all-configuration sweep " + lines(d) +
                    " lines, repeat " + (d == e ? "identical" : "differs")};
}

Outcome strategy_ordering() {
    CompareConfig cfg;
    cfg.n = 1000;
    cfg.samples = 20;
    cfg.degrees = parse_grid("1:9:0.5");
    cfg.jobs = jobs();
    const CompareResult r = run_compare(cfg);
    std::size_t target = 0;
    for (std::size_t c = 0; c < r.configs.size(); ++c)
        if (r.configs[c] == std::pair{Strategy::RandomPairs, EnergyMeasure::MatchingNumber}) target = c;
    std::size_t lowest = 0;
    std::string misses;
    for (const CompareRow& row : r.rows) {
        const double best = *std::min_element(row.mean_ratio.begin(), row.mean_ratio.end());
        if (row.mean_ratio[target] <= best + 1e-12) {
            ++lowest;
        } else {
            misses += " " + format_real(row.avg_degree) + "(" + fmt("%.4f", row.mean_ratio[target]) + " vs " +
                      fmt("%.4f", best) + ")";
        }
    }
    const double share = static_cast<double>(lowest) / static_cast<double>(r.rows.size());
    return {share >= 0.8, "lowest or tied at " + std::to_string(lowest) + "/" + std::to_string(r.rows.size()) +
                              " degrees (want >= 80%)" + (misses.empty() ? "" : "; behind at" + misses)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"KE verification matches brute force", oracle_equivalence},
        {"backbone states match all minimum covers", backbone_exactness},
        {"bipartite and leaf-removable graphs are KE", bipartite_and_leafless},
        {"layer cover is valid and never below the optimum", cover_estimate_validity},
        {"gap to exact cover on small ER graphs", gap_reproduction},
        {"layer-count transition locations", transition_peaks},
        {"switching strategies against exhaustive search", strategy_gap},
        {"sweep CSV is byte-identical across runs", sweep_determinism},
        {"random pairs with matching energy gives the lowest cover", strategy_ordering},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu: %s  %s: %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
