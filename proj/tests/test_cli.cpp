#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "kelayer/graph_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "kelayer");
    std::ostringstream out, err;
    CliRun r;
    r.code = kelayer::cli::cli_main(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const std::string& name) { return std::string(KELAYER_TEST_DATA) + "/" + name; }

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l))
        if (l == line) return true;
    return false;
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("kelayer_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" + name);
}

}  // namespace

TEST(CliVerify, FourCycle) {
    const CliRun r = run({"verify", data("c4.txt")});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(has_line(r.out, "KE: yes")) << r.out;
    EXPECT_TRUE(has_line(r.out, "matching: 2")) << r.out;
    EXPECT_TRUE(has_line(r.out, "cover: 2")) << r.out;
    EXPECT_TRUE(has_line(r.out, "states: UUUU")) << r.out;
}

TEST(CliVerify, Petersen) {
    const CliRun r = run({"verify", data("petersen.txt")});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(has_line(r.out, "KE: no")) << r.out;
    EXPECT_TRUE(has_line(r.out, "matching: 5")) << r.out;
}

TEST(CliDecompose, TriangleWithRandomPairsAndMatchingEnergy) {
    const CliRun r = run({"decompose", data("c3.txt"), "--strategy", "2", "--energy", "matching"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(has_line(r.out, "layers: 2")) << r.out;
    EXPECT_TRUE(has_line(r.out, "mvc_estimate: 2")) << r.out;
}

TEST(CliDecompose, CompleteGraphOnEight) {
    const CliRun r = run({"decompose", data("k8.txt")});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(has_line(r.out, "layers: 3")) << r.out;
    EXPECT_TRUE(has_line(r.out, "mvc_estimate: 7")) << r.out;
}

TEST(CliOracle, PetersenAndEnumeration) {
    const CliRun p = run({"oracle", data("petersen.txt")});
    EXPECT_EQ(p.code, 0);
    EXPECT_TRUE(has_line(p.out, "mvc: 6")) << p.out;
    const CliRun s = run({"oracle", data("c4.txt"), "--all"});
    EXPECT_EQ(s.code, 0);
    EXPECT_TRUE(has_line(s.out, "minimum_covers: 2")) << s.out;
    EXPECT_TRUE(has_line(s.out, "  0 2")) << s.out;
    EXPECT_TRUE(has_line(s.out, "  1 3")) << s.out;
}

TEST(CliErrors, UsageAndRuntimeCodes) {
    EXPECT_EQ(run({"verify", data("c4.txt"), "--bogus"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"decompose", data("c3.txt"), "--strategy", "4"}).code, 1);
    EXPECT_EQ(run({"decompose", data("c3.txt"), "--energy", "weights"}).code, 1);
    EXPECT_EQ(run({"decompose", data("c3.txt"), "--threshold", "2"}).code, 1);
    EXPECT_EQ(run({"sweep", "--degrees", "x"}).code, 1);
    EXPECT_EQ(run({"gaps", "--n-values", "80,abc"}).code, 1);
    const CliRun missing = run({"verify", data("no_such_file.txt")});
    EXPECT_EQ(missing.code, 2);
    EXPECT_FALSE(missing.err.empty());
    EXPECT_EQ(run({"oracle", data("petersen.txt"), "--budget", "5"}).code, 2);
    EXPECT_EQ(run({"oracle", data("c4.txt"), "--all", "--cap", "1"}).code, 2);
}

TEST(CliErrors, MalformedGraphFile) {
    const fs::path p = temp_file("bad.txt");
    {
        std::ofstream f(p);
        f << "3 2\n0 1\n1 7\n";
    }
    const CliRun r = run({"verify", p.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    fs::remove(p);
}

TEST(CliHelp, ExitsZero) {
    const CliRun r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(CliGenerate, WritesReadableGraph) {
    const fs::path p = temp_file("gen.txt");
    const CliRun r = run({"generate", "--n", "50", "--degree", "3", "--seed", "7", "--out", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const kelayer::Graph g = kelayer::read_graph_file(p.string());
    EXPECT_EQ(g.node_count(), 50u);
    const CliRun again = run({"generate", "--n", "50", "--degree", "3", "--seed", "7"});
    std::ifstream f(p);
    std::stringstream file_text;
    file_text << f.rdbuf();
    EXPECT_EQ(again.out, file_text.str());
    fs::remove(p);
}

TEST(CliSweep, CsvIsReproducible) {
    const std::vector<std::string> args{"sweep", "--n", "100", "--degrees", "2,3", "--samples", "3",
                                        "--strategy", "1", "--strategy", "2", "--energy", "matching",
                                        "--format", "csv"};
    const CliRun a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), kelayer::kSweepCsvHeader);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 1 + 2 * 3 * 2);
    EXPECT_EQ(run(args).out, a.out);
    std::vector<std::string> threaded = args;
    threaded.insert(threaded.end(), {"--jobs", "2"});
    EXPECT_EQ(run(threaded).out, a.out);
}

TEST(CliSweep, TextReportsPeak) {
    const CliRun r = run({"sweep", "--n", "100", "--degrees", "1:3:1", "--samples", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("peak_degree:"), std::string::npos) << r.out;
}

TEST(CliCompare, CsvColumns) {
    const CliRun r = run({"compare", "--n", "100", "--degrees", "2,4", "--samples", "2", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
              "avg_degree,ratio_1_edges,ratio_1_matching,ratio_2_edges,ratio_2_matching,ratio_3_edges,"
              "ratio_3_matching,matching_bound");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST(CliGaps, SmallTable) {
    const CliRun r = run({"gaps", "--n-values", "30", "--degrees", "2,3", "--samples", "4", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n,avg_degree,samples,mean_gap_percent");
    EXPECT_NE(r.out.find("\n30,2,4,"), std::string::npos) << r.out;
    const CliRun budget = run({"gaps", "--n-values", "200", "--degrees", "3", "--samples", "1"});
    EXPECT_EQ(budget.code, 2);
}
