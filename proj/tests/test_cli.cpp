#include "kronlab/cli.hpp"
#include "kronlab/edge_io.hpp"
#include "kronlab/error.hpp"
#include "kronlab/seed.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace kronlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("kronlab_cli_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("generate rpskg at the published configuration") {
    TempDir dir;
    spit(dir / "g500.seed", "9 3\n3 1\n");
    const auto r = run({"generate", "--model", "rpskg", "--edges", "1048576", "--l", "15", "--k", "1", "--seed-file",
                        dir / "g500.seed", "--rng-seed", "7", "--out", dir / "g.tsv"});
    REQUIRE(r.code == 0);
    const auto loaded = read_edge_file(dir / "g.tsv");
    CHECK(loaded.graph.edges.size() == 1048576);
    CHECK(loaded.graph.node_count == 3u * 32768u);
    CHECK(loaded.header.at("seed3_source") == "closed-form");

    const auto a = run({"analyze", "--graph", dir / "g.tsv", "--out", dir / "hist.csv", "--ccdf"});
    REQUIRE(a.code == 0);
    std::istringstream hist(slurp(dir / "hist.csv"));
    std::string line;
    std::uint64_t total = 0;
    bool header_seen = false;
    while (std::getline(hist, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            CHECK(line == "degree,count");
            header_seen = true;
            continue;
        }
        total += std::stoull(line.substr(line.find(',') + 1));
    }
    CHECK(total == 3u * 32768u);
    CHECK(fs::exists(dir / "hist_ccdf.csv"));
}

TEST_CASE("generate output is independent of the thread count") {
    TempDir dir;
    for (const std::string model : {"skg", "rpskg", "nskg", "bernoulli"}) {
        std::vector<std::string> base{"generate", "--model", model, "--edges", "30000", "--l", "10", "--rng-seed", "5"};
        if (model == "rpskg") {
            base.insert(base.end(), {"--k", "2"});
        }
        if (model == "nskg") {
            base.insert(base.end(), {"--noise-b", "0.05"});
        }
        if (model == "bernoulli") {
            base.insert(base.end(), {"--n", "3000", "--p", "0.003"});
        }
        auto one = base;
        one.insert(one.end(), {"--threads", "1", "--out", dir / "one.tsv"});
        auto eight = base;
        eight.insert(eight.end(), {"--threads", "8", "--out", dir / "eight.tsv"});
        REQUIRE(run(one).code == 0);
        REQUIRE(run(eight).code == 0);
        CHECK(slurp(dir / "one.tsv") == slurp(dir / "eight.tsv"));
    }
}

TEST_CASE("chung-lu reads degree files") {
    TempDir dir;
    spit(dir / "dout", "3 0 2\n");
    spit(dir / "din", "1 1 3\n");
    REQUIRE(run({"generate", "--model", "chunglu", "--edges", "5", "--dout", dir / "dout", "--din", dir / "din",
                 "--rng-seed", "1", "--out", dir / "c.tsv"})
                .code == 0);
    const auto loaded = read_edge_file(dir / "c.tsv");
    CHECK(loaded.graph.node_count == 3);
    CHECK(loaded.graph.edges.size() == 5);
    const auto bad = run({"generate", "--model", "chunglu", "--edges", "6", "--dout", dir / "dout", "--din",
                          dir / "din", "--rng-seed", "1", "--out", dir / "c.tsv"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("DegreeSumMismatch") != std::string::npos);
}

TEST_CASE("nskg edge file replays from its header") {
    TempDir dir;
    REQUIRE(run({"generate", "--model", "nskg", "--edges", "20000", "--l", "9", "--noise-b", "0.1", "--rng-seed",
                 "3", "--out", dir / "n.tsv"})
                .code == 0);
    const auto loaded = read_edge_file(dir / "n.tsv");
    const GenConfig cfg = config_from_header(loaded.header);
    REQUIRE(cfg.noise.has_value());
    const GenResult again = generate(cfg);
    std::ostringstream os;
    write_edges(os, again.graph, header_fields(cfg, again));
    CHECK(os.str() == slurp(dir / "n.tsv"));
}

TEST_CASE("sample-seed closed form and numeric") {
    TempDir dir;
    spit(dir / "g500.seed", "0.5625 0.1875\n0.1875 0.0625\n");
    REQUIRE(run({"sample-seed", "--from", dir / "g500.seed", "--to", "3x3", "--method", "closed-form", "--out",
                 dir / "m.seed"})
                .code == 0);
    REQUIRE(run({"sample-seed", "--from", dir / "g500.seed", "--to", "3x3", "--method", "numeric", "--depth", "40",
                 "--out", dir / "n.seed"})
                .code == 0);
    const auto closed = read_seed_file(dir / "m.seed");
    const auto numeric = read_seed_file(dir / "n.seed");
    const double published[9] = {0.4793, 0.1598, 0.0533, 0.1598, 0.0533, 0.0178, 0.0533, 0.0178, 0.0059};
    for (int i = 0; i < 9; ++i) {
        CHECK(std::abs(closed.entries()[i] - published[i]) <= 5e-5);
        CHECK(std::abs(closed.entries()[i] - numeric.entries()[i]) <= 1e-8);
    }
    CHECK(slurp(dir / "m.seed").find("# method=closed-form") != std::string::npos);

    const auto other = run({"sample-seed", "--from", dir / "g500.seed", "--to", "4x4", "--method", "closed-form",
                            "--out", dir / "x.seed"});
    CHECK(other.code == 1);
    CHECK(run({"sample-seed", "--from", dir / "g500.seed", "--to", "4x4", "--method", "numeric", "--out",
               dir / "x.seed"})
              .code == 0);
    CHECK(run({"sample-seed", "--from", dir / "g500.seed", "--to", "3by3", "--method", "numeric", "--out",
               dir / "x.seed"})
              .code == 2);
}

TEST_CASE("analyze on an empty graph with oscillation fails with InsufficientData") {
    TempDir dir;
    spit(dir / "empty.tsv", "");
    const auto r = run({"analyze", "--graph", dir / "empty.tsv", "--out", dir / "hist.csv", "--oscillation"});
    CHECK(r.code == 1);
    CHECK(r.err.find("InsufficientData") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    CHECK(!fs::exists(dir / "hist.csv"));
}

TEST_CASE("analyze oscillation prints the score") {
    TempDir dir;
    REQUIRE(run({"generate", "--model", "skg", "--edges", "65536", "--l", "12", "--rng-seed", "2", "--out",
                 dir / "g.tsv"})
                .code == 0);
    const auto r = run({"analyze", "--graph", dir / "g.tsv", "--direction", "undirected", "--dedup", "--oscillation",
                        "--out", dir / "h.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("score=", 0) == 0);
    const auto series = slurp(dir / "h_oscillation.csv");
    CHECK(series.find("bin_lo,bin_hi,degrees,vertices,log10_avg_frequency\n") != std::string::npos);
    CHECK(series.find("# direction=undirected") != std::string::npos);
}

TEST_CASE("slices subcommand") {
    TempDir dir;
    spit(dir / "g500.seed", "9 3\n3 1\n");
    REQUIRE(run({"generate", "--model", "skg", "--edges", "16384", "--l", "10", "--rng-seed", "2", "--out",
                 dir / "g.tsv"})
                .code == 0);
    REQUIRE(run({"slices", "--graph", dir / "g.tsv", "--seed-file", dir / "g500.seed", "--l", "10", "--out",
                 dir / "s.csv"})
                .code == 0);
    const auto text = slurp(dir / "s.csv");
    CHECK(text.find("slice,theoretical_p,empirical_p,tv_binomial\n") != std::string::npos);
    CHECK(text.find("\nr=0,") != std::string::npos);
    CHECK(text.find("\nr=5,") != std::string::npos);
}

TEST_CASE("thresholds subcommand") {
    TempDir dir;
    REQUIRE(run({"thresholds", "--mode", "isolated", "--side", "above", "--n", "1000", "--alpha", "3", "--trials",
                 "10", "--rng-seed", "4", "--out", dir / "t.csv"})
                .code == 0);
    const auto text = slurp(dir / "t.csv");
    CHECK(text.find("mode,side,n,alpha,p,trials,fraction,theoretical_bound\nisolated,above,1000,3,") !=
          std::string::npos);
    REQUIRE(run({"thresholds", "--mode", "isolated", "--side", "above", "--n", "1000", "--alpha", "3", "--trials",
                 "10", "--rng-seed", "4", "--out", dir / "t2.csv"})
                .code == 0);
    CHECK(slurp(dir / "t2.csv") == text);
}

TEST_CASE("probe reads flag-list configs") {
    TempDir dir;
    spit(dir / "a.cfg", "--model skg\n--edges 8192\n--l 10\n");
    spit(dir / "b.cfg", "# Erdos-Renyi with matching density\n--model bernoulli\n--n 1024\n--p 0.0156\n");
    const auto r = run({"probe", "--config-a", dir / "a.cfg", "--config-b", dir / "b.cfg", "--trials", "2",
                        "--rng-seed", "1"});
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("tv=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 3)) > 0.3);
    CHECK(r.out.find("# a.model=skg") != std::string::npos);

    spit(dir / "bad.cfg", "--model skg\n--edges 10\n--l 3\n--out x\n");
    CHECK(run({"probe", "--config-a", dir / "bad.cfg", "--config-b", dir / "b.cfg", "--trials", "1", "--rng-seed",
               "1"})
              .code == 2);
}

TEST_CASE("usage and validation errors") {
    TempDir dir;
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"generate", "--model", "skg", "--edges", "10", "--l", "3", "--out", dir / "x"}).code == 2);
    CHECK(run({"generate", "--model", "rmat", "--edges", "10", "--l", "3", "--rng-seed", "1", "--out", dir / "x"})
              .code == 2);
    CHECK(run({"generate", "--model", "skg", "--l", "3", "--rng-seed", "1", "--out", dir / "x"}).code == 2);
    CHECK(run({"generate", "--model", "nskg", "--edges", "10", "--l", "3", "--rng-seed", "1", "--out", dir / "x"})
              .code == 2);
    CHECK(run({"generate", "--model", "skg", "--edges", "10", "--l", "3", "--rng-seed", "1", "--threads", "0",
               "--out", dir / "x"})
              .code == 2);

    spit(dir / "neg.seed", "0.5 -0.1\n0.3 0.3\n");
    const auto neg = run({"generate", "--model", "skg", "--edges", "10", "--l", "3", "--seed-file", dir / "neg.seed",
                          "--rng-seed", "1", "--out", dir / "x"});
    CHECK(neg.code == 1);
    CHECK(neg.err.find("NegativeEntry") != std::string::npos);

    const auto missing = run({"analyze", "--graph", dir / "nope.tsv", "--out", dir / "h.csv"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("Io") != std::string::npos);

    const auto noise = run({"generate", "--model", "nskg", "--edges", "10", "--l", "3", "--noise-b", "0.5",
                            "--rng-seed", "1", "--out", dir / "x"});
    CHECK(noise.code == 1);
    CHECK(noise.err.find("NoiseBoundViolated") != std::string::npos);

    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("edge file parsing") {
    const auto g = parse_edges("# node_count=4\n0\t1\n3\t2\n\n");
    CHECK(g.graph.node_count == 4);
    CHECK(g.graph.edges.size() == 2);
    CHECK(parse_edges("5 7\n").graph.node_count == 8);
    try {
        (void)parse_edges("# node_count=3\n0\t3\n");
        FAIL("expected IdOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IdOutOfRange);
    }
    CHECK_THROWS_AS((void)parse_edges("0\tx\n"), Error);
    CHECK_THROWS_AS((void)parse_edges("0 1 2\n"), Error);
}
