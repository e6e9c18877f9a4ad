#ifndef KELAYER_TOOLS_CLI_HPP
#define KELAYER_TOOLS_CLI_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kelayer/kelayer.hpp"

namespace kelayer::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

/// Bad argument values found after parsing (grids, size lists).
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string join(const NodeSet& s) {
    std::string out;
    for (NodeId v : s.members()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(v);
    }
    return out;
}

inline std::string join_pairs(const std::vector<Edge>& pairs) {
    std::string out;
    for (const Edge& e : pairs) {
        if (!out.empty()) out += ' ';
        out += std::to_string(e.u) + '-' + std::to_string(e.v);
    }
    return out;
}

inline std::string fixed(double x, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
}

struct Options {
    // shared
    std::string graph_file;
    std::string out;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::string strategy = "1";
    std::string energy = "edges";
    double threshold = 0.9;
    std::size_t samples = 20;
    unsigned jobs = 1;
    // generate
    std::size_t n = 1000;
    double degree = 3.0;
    // oracle
    std::size_t budget = 130;
    bool all = false;
    std::size_t cap = 10000;
    // experiments
    std::string degrees;
    std::vector<std::string> strategies;
    std::vector<std::string> energies;
    std::string n_values = "80,100,120";
    bool timing = false;
};

class OutputTarget {
  public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

inline int cmd_generate(const Options& o, std::ostream& out) {
    RngStream rng(o.seed);
    const Graph g = generate_er(o.n, o.degree, rng);
    OutputTarget target(o.out, out);
    write_graph(target.get(), g);
    if (!o.out.empty())
        out << "wrote " << g.node_count() << " nodes, " << g.edge_count() << " edges to " << o.out << '\n';
    return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    const Graph g = read_graph_file(o.graph_file);
    const KeVerdict v = verify_ke(g);
    out << "KE: " << (v.is_ke ? "yes" : "no") << '\n';
    out << "nodes: " << g.node_count() << '\n';
    out << "edges: " << g.edge_count() << '\n';
    out << "matching: " << v.matching_number << '\n';
    out << "double_edges: " << join_pairs(v.solution.double_edges().pairs()) << '\n';
    if (v.is_ke) {
        const ReducedSolutionGraph& s = v.solution;
        out << "cover: " << v.matching_number << '\n';
        out << "positive: " << s.count(NodeState::PositiveBackbone) << '\n';
        out << "negative: " << s.count(NodeState::NegativeBackbone) << '\n';
        out << "unfrozen: " << s.count(NodeState::Unfrozen) << '\n';
        out << "states: " << s.state_letters() << '\n';
        out << "min_cover: " << join(one_min_cover(s)) << '\n';
    }
    return kOk;
}

inline StrategyConfig strategy_config(const Options& o) {
    return {parse_strategy(o.strategy), parse_energy(o.energy), o.threshold, o.seed};
}

inline int cmd_decompose(const Options& o, std::ostream& out) {
    const Graph g = read_graph_file(o.graph_file);
    const LayerDecomposition d = decompose(g, strategy_config(o));
    const NodeSet cover = cover_from_decomposition(g, d);
    out << "layers: " << d.layer_count << '\n';
    for (std::size_t l = 0; l < d.layer_classes.size(); ++l)
        out << "layer " << (l + 1) << ": " << join(d.layer_classes[l]) << '\n';
    out << "final: " << join(d.final_class) << '\n';
    out << "final_matching: " << d.final_matching_size << '\n';
    out << "mvc_estimate: " << d.mvc_estimate << '\n';
    out << "cover: " << join(cover) << '\n';
    return kOk;
}

inline int cmd_oracle(const Options& o, std::ostream& out) {
    const Graph g = read_graph_file(o.graph_file);
    const ExactOptions opts{o.budget, true};
    const OracleResult r = o.all ? enumerate_all_mvc(g, o.cap, opts) : exact_mvc(g, opts);
    out << "mvc: " << r.mvc_number << '\n';
    out << "cover: " << join(r.one_cover) << '\n';
    if (r.all_covers) {
        out << "minimum_covers: " << r.all_covers->size() << '\n';
        for (const NodeSet& c : *r.all_covers) out << "  " << join(c) << '\n';
    }
    return kOk;
}

inline void print_transition(std::ostream& out, const std::vector<SweepRecord>& records, Strategy s,
                             EnergyMeasure m) {
    const auto subset = select(records, s, m);
    out << "strategy " << to_string(s) << ", energy " << to_string(m) << '\n';
    out << "  degree  mean_layer  std_layer\n";
    TransitionEstimate t;
    try {
        t = estimate_transition(subset);
    } catch (const std::invalid_argument&) {
        out << "  (need at least 2 samples per degree for statistics)\n";
        return;
    }
    for (std::size_t i = 0; i < t.degree_grid.size(); ++i)
        out << "  " << std::setw(6) << format_real(t.degree_grid[i]) << "  " << std::setw(10)
            << fixed(t.mean_layer[i], 3) << "  " << std::setw(9) << fixed(t.std_layer[i], 3) << '\n';
    out << "  peak_degree: " << format_real(t.peak_degree) << '\n';
}

inline std::vector<double> grid_or_default(const std::string& text, const char* fallback) {
    try {
        auto grid = parse_grid(text.empty() ? fallback : text);
        if (grid.empty()) throw std::invalid_argument("empty degree grid");
        return grid;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
    SweepConfig cfg;
    cfg.n = o.n;
    cfg.degrees = grid_or_default(o.degrees, kDefaultSweepGrid);
    cfg.samples = o.samples;
    cfg.strategies.clear();
    for (const auto& s : o.strategies.empty() ? std::vector<std::string>{"1"} : o.strategies)
        cfg.strategies.push_back(parse_strategy(s));
    cfg.measures.clear();
    for (const auto& e : o.energies.empty() ? std::vector<std::string>{"edges"} : o.energies)
        cfg.measures.push_back(parse_energy(e));
    cfg.base_seed = o.seed;
    cfg.threshold = o.threshold;
    cfg.record_time = o.timing;
    cfg.jobs = o.jobs;
    const auto records = run_sweep(cfg);

    if (!o.out.empty()) {
        OutputTarget file(o.out, out);
        write_sweep_csv(file.get(), records);
    }
    if (o.format == "csv") {
        if (o.out.empty()) write_sweep_csv(out, records);
        return kOk;
    }
    for (Strategy s : cfg.strategies)
        for (EnergyMeasure m : cfg.measures) print_transition(out, records, s, m);
    return kOk;
}

inline int cmd_compare(const Options& o, std::ostream& out) {
    CompareConfig cfg;
    cfg.n = o.n;
    cfg.degrees = grid_or_default(o.degrees, "1:20:0.5");
    cfg.samples = o.samples;
    cfg.base_seed = o.seed;
    cfg.threshold = o.threshold;
    cfg.jobs = o.jobs;
    const CompareResult r = run_compare(cfg);

    if (!o.out.empty()) {
        OutputTarget file(o.out, out);
        write_sweep_csv(file.get(), r.records);
    }
    if (o.format == "csv") {
        out << "avg_degree";
        for (const auto& [s, m] : r.configs) out << ",ratio_" << to_string(s) << '_' << to_string(m);
        out << ",matching_bound\n";
        for (const CompareRow& row : r.rows) {
            out << format_real(row.avg_degree);
            for (double x : row.mean_ratio) out << ',' << fixed(x, 6);
            out << ',' << fixed(row.matching_ratio, 6) << '\n';
        }
        return kOk;
    }
    out << "mean mvc_estimate / n\n";
    out << "  degree";
    for (const auto& [s, m] : r.configs) {
        const std::string label = std::string(to_string(s)) + "/" + std::string(to_string(m));
        out << "  " << std::setw(10) << label;
    }
    out << "  " << std::setw(10) << "matching" << '\n';
    for (const CompareRow& row : r.rows) {
        out << "  " << std::setw(6) << format_real(row.avg_degree);
        for (double x : row.mean_ratio) out << "  " << std::setw(10) << fixed(x, 4);
        out << "  " << std::setw(10) << fixed(row.matching_ratio, 4) << '\n';
    }
    return kOk;
}

inline std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || v == 0) throw UsageError("invalid node count '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw UsageError("empty node-count list");
    return out;
}

inline int cmd_gaps(const Options& o, std::ostream& out) {
    GapConfig cfg;
    cfg.n_values = parse_sizes(o.n_values);
    cfg.degrees = grid_or_default(o.degrees, "3:7:1");
    cfg.samples = o.samples;
    cfg.strategy = parse_strategy(o.strategy);
    cfg.energy = parse_energy(o.energy);
    cfg.threshold = o.threshold;
    cfg.base_seed = o.seed;
    cfg.oracle_budget = o.budget;
    cfg.jobs = o.jobs;
    const GapTable t = gap_table(cfg);

    auto write_csv = [&](std::ostream& s) {
        s << "n,avg_degree,samples,mean_gap_percent\n";
        for (const GapCell& c : t.cells)
            s << c.n << ',' << format_real(c.avg_degree) << ',' << c.samples << ',' << fixed(c.mean_gap_percent, 4)
              << '\n';
    };
    if (!o.out.empty()) {
        OutputTarget file(o.out, out);
        write_csv(file.get());
    }
    if (o.format == "csv") {
        if (o.out.empty()) write_csv(out);
        return kOk;
    }
    out << "mean (estimate - exact) / n, percent\n";
    out << "     n";
    for (double d : cfg.degrees) out << "  " << std::setw(7) << ("c=" + format_real(d));
    out << '\n';
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
        out << std::setw(6) << cfg.n_values[i];
        for (std::size_t j = 0; j < cfg.degrees.size(); ++j)
            out << "  " << std::setw(6) << fixed(t.cells[i * cfg.degrees.size() + j].mean_gap_percent, 2) << '%';
        out << '\n';
    }
    return kOk;
}

}  // namespace detail

/// Runs the command line `args` (program name first). Returns 0 on
/// success, 1 on usage errors and 2 on runtime failures.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::Options;
    Options o;
    CLI::App app{"KE-graph verification, KE-layer decomposition and vertex-cover estimation", "kelayer"};
    app.require_subcommand(1);

    const std::vector<std::string> strategy_ids{"1", "2", "3"};
    const std::vector<std::string> energy_ids{"edges", "matching"};

    auto add_strategy_flags = [&](CLI::App* c) {
        c->add_option("--strategy", o.strategy, "switching strategy: 1 greedy, 2 random pairs, 3 threshold")
            ->check(CLI::IsMember(strategy_ids))
            ->capture_default_str();
        c->add_option("--energy", o.energy, "B-class energy: edges or matching")
            ->check(CLI::IsMember(energy_ids))
            ->capture_default_str();
        c->add_option("--threshold", o.threshold, "revert probability for strategy 3")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
    };
    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "base random seed")->capture_default_str(); };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"text", "csv"}))
            ->capture_default_str();
    };

    auto* gen = app.add_subcommand("generate", "sample an Erdos-Renyi graph G(n, c/(n-1))");
    gen->add_option("--n", o.n, "number of nodes")->required()->check(CLI::PositiveNumber);
    gen->add_option("--degree", o.degree, "average degree c")->required()->check(CLI::NonNegativeNumber);
    add_seed(gen);
    gen->add_option("--out", o.out, "output file (default: stdout)");

    auto* ver = app.add_subcommand("verify", "decide whether a graph is KE and report node states");
    ver->add_option("graph", o.graph_file, "edge-list file")->required();

    auto* dec = app.add_subcommand("decompose", "peel KE layers and estimate the vertex-cover number");
    dec->add_option("graph", o.graph_file, "edge-list file")->required();
    add_strategy_flags(dec);
    add_seed(dec);

    auto* ora = app.add_subcommand("oracle", "exact minimum vertex cover");
    ora->add_option("graph", o.graph_file, "edge-list file")->required();
    ora->add_option("--budget", o.budget, "largest accepted node count")->capture_default_str();
    ora->add_flag("--all", o.all, "enumerate every minimum cover");
    ora->add_option("--cap", o.cap, "most covers to enumerate")->capture_default_str();

    auto* swp = app.add_subcommand("sweep", "layer count versus average degree");
    swp->add_option("--n", o.n, "nodes per graph")->capture_default_str()->check(CLI::PositiveNumber);
    swp->add_option("--degrees", o.degrees, "degree grid, e.g. 1:20:0.5,2.2:3.2:0.1")
        ->default_str(kDefaultSweepGrid);
    swp->add_option("--samples", o.samples, "graphs per degree")->capture_default_str()->check(CLI::PositiveNumber);
    swp->add_option("--strategy", o.strategies, "strategies to run (repeatable)")
        ->check(CLI::IsMember(strategy_ids))
        ->default_str("1");
    swp->add_option("--energy", o.energies, "energies to run (repeatable)")
        ->check(CLI::IsMember(energy_ids))
        ->default_str("edges");
    swp->add_option("--threshold", o.threshold, "revert probability for strategy 3")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    add_seed(swp);
    swp->add_option("--jobs", o.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    swp->add_flag("--timing", o.timing, "record wall times in the CSV (otherwise 0)");
    swp->add_option("--out", o.out, "write per-graph CSV here");
    add_format(swp);

    auto* cmp = app.add_subcommand("compare", "mean cover ratio of all six strategy/energy pairs");
    cmp->add_option("--n", o.n, "nodes per graph")->capture_default_str()->check(CLI::PositiveNumber);
    cmp->add_option("--degrees", o.degrees, "degree grid")->default_str("1:20:0.5");
    cmp->add_option("--samples", o.samples, "graphs per degree")->capture_default_str()->check(CLI::PositiveNumber);
    cmp->add_option("--threshold", o.threshold, "revert probability for strategy 3")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    add_seed(cmp);
    cmp->add_option("--jobs", o.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmp->add_option("--out", o.out, "write per-graph CSV here");
    add_format(cmp);

    auto* gap = app.add_subcommand("gaps", "estimate minus exact cover, as a percentage of n");
    gap->add_option("--n-values", o.n_values, "comma-separated node counts")->capture_default_str();
    gap->add_option("--degrees", o.degrees, "degree grid")->default_str("3:7:1");
    gap->add_option("--samples", o.samples, "graphs per cell")->default_str("30")->check(CLI::PositiveNumber);
    add_strategy_flags(gap);
    add_seed(gap);
    gap->add_option("--budget", o.budget, "largest node count handed to the exact solver")->capture_default_str();
    gap->add_option("--jobs", o.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    gap->add_option("--out", o.out, "write CSV here");
    add_format(gap);

    // The gaps defaults differ from the shared ones.
    gap->preparse_callback([&](std::size_t) {
        o.samples = 30;
        o.strategy = "2";
        o.energy = "matching";
    });

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        err << "run with --help for usage\n";
        return kUsage;
    }

    try {
        if (gen->parsed()) return detail::cmd_generate(o, out);
        if (ver->parsed()) return detail::cmd_verify(o, out);
        if (dec->parsed()) return detail::cmd_decompose(o, out);
        if (ora->parsed()) return detail::cmd_oracle(o, out);
        if (swp->parsed()) return detail::cmd_sweep(o, out);
        if (cmp->parsed()) return detail::cmd_compare(o, out);
        if (gap->parsed()) return detail::cmd_gaps(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}

}  // namespace kelayer::cli

#endif  // KELAYER_TOOLS_CLI_HPP
