#ifndef KELAYER_EXPERIMENT_HPP
#define KELAYER_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kelayer/exact_oracle.hpp"
#include "kelayer/generators.hpp"
#include "kelayer/graph.hpp"
#include "kelayer/layer_decomp.hpp"
#include "kelayer/matching.hpp"
#include "kelayer/rng.hpp"

namespace kelayer {

/// One decomposition of one sampled graph under one (strategy, energy).
struct SweepRecord {
    std::size_t n = 0;
    double avg_degree = 0.0;
    std::uint64_t seed = 0;  ///< seed of the sampled graph
    Strategy strategy = Strategy::Greedy;
    EnergyMeasure energy = EnergyMeasure::EdgeCount;
    std::size_t layers = 0;
    std::size_t mvc_estimate = 0;
    double wall_time_s = 0.0;
};

struct SweepConfig {
    std::size_t n = 1000;
    std::vector<double> degrees;
    std::size_t samples = 20;
    std::vector<Strategy> strategies{Strategy::Greedy};
    std::vector<EnergyMeasure> measures{EnergyMeasure::EdgeCount};
    std::uint64_t base_seed = 1;
    double threshold = 0.9;
    bool record_time = false;  ///< otherwise wall_time_s stays 0 and output is reproducible
    unsigned jobs = 1;
};

/// Per-graph facts gathered alongside a sweep.
struct SampleInfo {
    double avg_degree = 0.0;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
    std::size_t edges = 0;
    std::size_t matching_number = 0;
};

inline std::uint64_t sample_seed(std::uint64_t base, double degree, std::size_t sample) {
    return derive_seed(base, {real_key(degree), static_cast<std::uint64_t>(sample)});
}

inline std::uint64_t strategy_seed(std::uint64_t graph_seed, Strategy s, EnergyMeasure m) {
    return derive_seed(graph_seed, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(m)});
}

namespace detail {

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all threads finish.
template <class Task>
void parallel_for(std::size_t count, unsigned jobs, Task&& task) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned used = std::min<unsigned>(jobs, static_cast<unsigned>(count));
    for (unsigned t = 0; t < used; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// For every (degree, sample) draws one ER graph and decomposes it with
/// every (strategy, measure). Output order is (degree, sample, strategy,
/// measure) regardless of `jobs`.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, std::vector<SampleInfo>* info = nullptr) {
    if (cfg.n == 0) throw std::invalid_argument("run_sweep: n must be at least 1");
    if (cfg.degrees.empty()) throw std::invalid_argument("run_sweep: empty degree grid");
    if (cfg.strategies.empty() || cfg.measures.empty())
        throw std::invalid_argument("run_sweep: no strategy/energy configuration");

    const std::size_t per_graph = cfg.strategies.size() * cfg.measures.size();
    const std::size_t tasks = cfg.degrees.size() * cfg.samples;
    std::vector<SweepRecord> records(tasks * per_graph);
    std::vector<SampleInfo> samples(tasks);

    detail::parallel_for(tasks, cfg.jobs, [&](std::size_t t) {
        const double degree = cfg.degrees[t / cfg.samples];
        const std::size_t sample = t % cfg.samples;
        const std::uint64_t seed = sample_seed(cfg.base_seed, degree, sample);
        RngStream rng(seed);
        const Graph g = generate_er(cfg.n, degree, rng);
        samples[t] = {degree, sample, seed, g.edge_count(), 0};
        if (info) samples[t].matching_number = maximum_matching(g).size();

        std::size_t slot = t * per_graph;
        for (Strategy s : cfg.strategies) {
            for (EnergyMeasure m : cfg.measures) {
                StrategyConfig sc{s, m, cfg.threshold, strategy_seed(seed, s, m)};
                const auto start = std::chrono::steady_clock::now();
                const LayerDecomposition d = decompose(g, sc);
                const auto stop = std::chrono::steady_clock::now();
                SweepRecord& r = records[slot++];
                r = {cfg.n, degree, seed, s, m, d.layer_count, d.mvc_estimate, 0.0};
                if (cfg.record_time) r.wall_time_s = std::chrono::duration<double>(stop - start).count();
            }
        }
    });
    if (info) *info = std::move(samples);
    return records;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kSweepCsvHeader = "n,avg_degree,seed,strategy,energy,layers,mvc_estimate,wall_time_s";

inline std::string format_real(double x, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRecord& r : records) {
        char time_buf[32];
        std::snprintf(time_buf, sizeof time_buf, "%.6f", r.wall_time_s);
        out << r.n << ',' << format_real(r.avg_degree) << ',' << r.seed << ',' << to_string(r.strategy) << ','
            << to_string(r.energy) << ',' << r.layers << ',' << r.mvc_estimate << ',' << time_buf << '\n';
    }
}

inline Strategy parse_strategy(const std::string& s) {
    if (s == "1") return Strategy::Greedy;
    if (s == "2") return Strategy::RandomPairs;
    if (s == "3") return Strategy::Threshold;
    throw std::invalid_argument("unknown strategy '" + s + "' (expected 1, 2 or 3)");
}

inline EnergyMeasure parse_energy(const std::string& s) {
    if (s == "edges") return EnergyMeasure::EdgeCount;
    if (s == "matching") return EnergyMeasure::MatchingNumber;
    throw std::invalid_argument("unknown energy '" + s + "' (expected edges or matching)");
}

inline std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader)
        throw std::runtime_error("sweep csv: missing or unexpected header");
    std::vector<SweepRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 8) throw std::runtime_error("sweep csv: line " + std::to_string(line_no) + " has " +
                                                    std::to_string(f.size()) + " fields");
        SweepRecord r;
        r.n = std::stoull(f[0]);
        r.avg_degree = std::stod(f[1]);
        r.seed = std::stoull(f[2]);
        r.strategy = parse_strategy(f[3]);
        r.energy = parse_energy(f[4]);
        r.layers = std::stoull(f[5]);
        r.mvc_estimate = std::stoull(f[6]);
        r.wall_time_s = std::stod(f[7]);
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Statistics

struct TransitionEstimate {
    std::vector<double> degree_grid;
    std::vector<double> mean_layer;
    std::vector<double> std_layer;  ///< sample standard deviation (n - 1)
    double peak_degree = 0.0;
};

/// Per-degree mean and standard deviation of the layer count; the peak is
/// the degree with the largest deviation (lowest degree on ties). Pass the
/// records of one (strategy, energy) configuration.
inline TransitionEstimate estimate_transition(const std::vector<SweepRecord>& records) {
    std::map<std::uint64_t, std::pair<double, std::vector<double>>> by_degree;
    for (const SweepRecord& r : records) {
        auto& slot = by_degree[real_key(r.avg_degree)];
        slot.first = r.avg_degree;
        slot.second.push_back(static_cast<double>(r.layers));
    }
    if (by_degree.empty()) throw std::invalid_argument("estimate_transition: no records");
    TransitionEstimate t;
    double best = -1.0;
    for (const auto& [key, entry] : by_degree) {
        const auto& xs = entry.second;
        if (xs.size() < 2)
            throw std::invalid_argument("estimate_transition: fewer than 2 samples at degree " +
                                        format_real(entry.first));
        double mean = 0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        t.degree_grid.push_back(entry.first);
        t.mean_layer.push_back(mean);
        t.std_layer.push_back(sd);
        if (sd > best + 1e-12) {
            best = sd;
            t.peak_degree = entry.first;
        }
    }
    return t;
}

/// Records of one configuration.
inline std::vector<SweepRecord> select(const std::vector<SweepRecord>& records, Strategy s, EnergyMeasure m) {
    std::vector<SweepRecord> out;
    for (const SweepRecord& r : records)
        if (r.strategy == s && r.energy == m) out.push_back(r);
    return out;
}

// ---------------------------------------------------------------------------
// Strategy comparison

struct CompareConfig {
    std::size_t n = 1000;
    std::vector<double> degrees;
    std::size_t samples = 20;
    std::uint64_t base_seed = 1;
    double threshold = 0.9;
    unsigned jobs = 1;
};

struct CompareRow {
    double avg_degree = 0.0;
    std::vector<double> mean_ratio;  ///< per configuration, mvc_estimate / n
    double matching_ratio = 0.0;     ///< mean matching number / n (lower bound)
};

struct CompareResult {
    std::vector<std::pair<Strategy, EnergyMeasure>> configs;
    std::vector<CompareRow> rows;
    std::vector<SweepRecord> records;
};

inline std::vector<std::pair<Strategy, EnergyMeasure>> all_configurations() {
    std::vector<std::pair<Strategy, EnergyMeasure>> out;
    for (Strategy s : {Strategy::Greedy, Strategy::RandomPairs, Strategy::Threshold})
        for (EnergyMeasure m : {EnergyMeasure::EdgeCount, EnergyMeasure::MatchingNumber}) out.emplace_back(s, m);
    return out;
}

/// Mean cover ratio per degree for each configuration in `configs`,
/// computed from sweep records.
inline std::vector<CompareRow> summarize_ratios(const std::vector<SweepRecord>& records,
                                                const std::vector<std::pair<Strategy, EnergyMeasure>>& configs) {
    std::map<std::uint64_t, CompareRow> rows;
    std::map<std::uint64_t, std::vector<std::size_t>> counts;
    for (const SweepRecord& r : records) {
        const auto key = real_key(r.avg_degree);
        auto& row = rows[key];
        auto& cnt = counts[key];
        if (row.mean_ratio.empty()) {
            row.avg_degree = r.avg_degree;
            row.mean_ratio.assign(configs.size(), 0.0);
            cnt.assign(configs.size(), 0);
        }
        for (std::size_t c = 0; c < configs.size(); ++c) {
            if (configs[c].first == r.strategy && configs[c].second == r.energy) {
                row.mean_ratio[c] += static_cast<double>(r.mvc_estimate) / static_cast<double>(r.n);
                ++cnt[c];
            }
        }
    }
    std::vector<CompareRow> out;
    for (auto& [key, row] : rows) {
        for (std::size_t c = 0; c < configs.size(); ++c)
            if (counts[key][c]) row.mean_ratio[c] /= static_cast<double>(counts[key][c]);
        out.push_back(row);
    }
    return out;
}

inline CompareResult run_compare(const CompareConfig& cfg) {
    CompareResult result;
    result.configs = all_configurations();
    SweepConfig sc;
    sc.n = cfg.n;
    sc.degrees = cfg.degrees;
    sc.samples = cfg.samples;
    sc.strategies = {Strategy::Greedy, Strategy::RandomPairs, Strategy::Threshold};
    sc.measures = {EnergyMeasure::EdgeCount, EnergyMeasure::MatchingNumber};
    sc.base_seed = cfg.base_seed;
    sc.threshold = cfg.threshold;
    sc.jobs = cfg.jobs;
    std::vector<SampleInfo> info;
    result.records = run_sweep(sc, &info);
    result.rows = summarize_ratios(result.records, result.configs);

    std::map<std::uint64_t, std::pair<double, std::size_t>> bound;
    for (const SampleInfo& s : info) {
        auto& b = bound[real_key(s.avg_degree)];
        b.first += static_cast<double>(s.matching_number) / static_cast<double>(cfg.n);
        ++b.second;
    }
    for (CompareRow& row : result.rows) {
        const auto& b = bound[real_key(row.avg_degree)];
        row.matching_ratio = b.second ? b.first / static_cast<double>(b.second) : 0.0;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Gap against the exact optimum

struct GapSample {
    std::size_t n = 0;
    double avg_degree = 0.0;
    std::uint64_t seed = 0;
    std::size_t mvc_estimate = 0;
    std::size_t exact_mvc = 0;
};

struct GapCell {
    std::size_t n = 0;
    double avg_degree = 0.0;
    double mean_gap_percent = 0.0;  ///< mean of (estimate - exact) / n, in percent
    std::size_t samples = 0;
};

struct GapTable {
    std::vector<GapCell> cells;
    std::vector<GapSample> details;
};

struct GapConfig {
    std::vector<std::size_t> n_values;
    std::vector<double> degrees;
    std::size_t samples = 30;
    Strategy strategy = Strategy::RandomPairs;
    EnergyMeasure energy = EnergyMeasure::MatchingNumber;
    double threshold = 0.9;
    std::uint64_t base_seed = 1;
    std::size_t oracle_budget = 130;
    unsigned jobs = 1;
};

inline GapTable gap_table(const GapConfig& cfg) {
    if (cfg.n_values.empty() || cfg.degrees.empty() || cfg.samples == 0)
        throw std::invalid_argument("gap_table: empty grid");
    for (std::size_t n : cfg.n_values)
        if (n > cfg.oracle_budget)
            throw BudgetExceeded("gap_table: n = " + std::to_string(n) + " exceeds oracle budget " +
                                 std::to_string(cfg.oracle_budget));

    const std::size_t cells = cfg.n_values.size() * cfg.degrees.size();
    GapTable table;
    table.details.resize(cells * cfg.samples);
    detail::parallel_for(table.details.size(), cfg.jobs, [&](std::size_t t) {
        const std::size_t cell = t / cfg.samples;
        const std::size_t sample = t % cfg.samples;
        const std::size_t n = cfg.n_values[cell / cfg.degrees.size()];
        const double degree = cfg.degrees[cell % cfg.degrees.size()];
        const std::uint64_t seed = derive_seed(cfg.base_seed, {n, real_key(degree), sample});
        RngStream rng(seed);
        const Graph g = generate_er(n, degree, rng);
        const LayerDecomposition d =
            decompose(g, {cfg.strategy, cfg.energy, cfg.threshold, strategy_seed(seed, cfg.strategy, cfg.energy)});
        const OracleResult exact = exact_mvc(g, {cfg.oracle_budget, true});
        table.details[t] = {n, degree, seed, d.mvc_estimate, exact.mvc_number};
    });
    for (std::size_t cell = 0; cell < cells; ++cell) {
        GapCell c;
        c.n = cfg.n_values[cell / cfg.degrees.size()];
        c.avg_degree = cfg.degrees[cell % cfg.degrees.size()];
        c.samples = cfg.samples;
        double sum = 0;
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const GapSample& g = table.details[cell * cfg.samples + s];
            sum += (static_cast<double>(g.mvc_estimate) - static_cast<double>(g.exact_mvc)) / static_cast<double>(g.n);
        }
        c.mean_gap_percent = 100.0 * sum / static_cast<double>(cfg.samples);
        table.cells.push_back(c);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Degree grids

/// Parses "1,2.5,3:4:0.5" style grids: comma-separated numbers or
/// start:stop:step ranges (inclusive). The result is sorted and duplicate
/// free; values are rounded to 1e-9 so range arithmetic does not leave
/// representation noise.
inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto clean = [](double x) { return std::round(x * 1e9) / 1e9; };
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream is(item);
        std::string p;
        while (std::getline(is, p, ':')) parts.push_back(p);
        try {
            if (parts.size() == 1) {
                out.push_back(clean(std::stod(parts[0])));
            } else if (parts.size() == 3) {
                const double a = std::stod(parts[0]), b = std::stod(parts[1]), step = std::stod(parts[2]);
                if (!(step > 0) || b < a) throw std::invalid_argument("bad range");
                const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
                for (std::size_t i = 0; i < count; ++i) out.push_back(clean(a + static_cast<double>(i) * step));
            } else {
                throw std::invalid_argument("bad item");
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid grid item '" + item + "'");
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return real_key(a) == real_key(b); }),
              out.end());
    return out;
}

inline constexpr const char* kDefaultSweepGrid = "1:20:0.5,2.2:3.2:0.1,9.5:11.5:0.1";

}  // namespace kelayer

#endif  // KELAYER_EXPERIMENT_HPP
