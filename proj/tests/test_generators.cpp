#include "kronlab/error.hpp"
#include "kronlab/generators.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace kronlab;
using kronlab::testing::kronecker_power;
using kronlab::testing::random_seed;

namespace {

// Largest |observed - expected| / sd over all cells of an n x n joint law.
double max_cell_z(const EdgeList& g, const std::vector<double>& law) {
    const std::size_t n = g.node_count;
    std::vector<double> counts(n * n, 0.0);
    for (const Edge& e : g.edges) {
        counts[e.source * n + e.target] += 1.0;
    }
    const double m = static_cast<double>(g.edges.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double p = law[i];
        if (p == 0.0) {
            if (counts[i] != 0.0) {
                return INFINITY;
            }
            continue;
        }
        worst = std::max(worst, std::abs(counts[i] - m * p) / std::sqrt(m * p * (1.0 - p)));
    }
    return worst;
}

GenConfig base_config(Model model) {
    GenConfig cfg;
    cfg.model = model;
    cfg.edges_m = 20000;
    cfg.ell = 8;
    cfg.rng_seed = 77;
    return cfg;
}

}  // namespace

TEST_CASE("SKG joint edge law matches the Kronecker power") {
    std::mt19937_64 gen(1);
    for (int ell = 1; ell <= 3; ++ell) {
        const auto t = ell == 1 ? graph500_seed() : random_seed(gen, 0.05);
        const auto g = generate_skg(t, ell, 200000, 1000 + ell);
        CHECK(g.node_count == (1u << ell));
        CHECK(max_cell_z(g, kronecker_power(t.matrix(), ell)) < 4.5);
    }
}

TEST_CASE("RPSKG with one binary and one ternary level matches the averaged mixed-radix law") {
    const auto t = graph500_seed();
    const auto m3 = sample_3x3_from_2x2(t);
    const auto g = generate_rpskg(t, std::nullopt, 1, 1, 300000, 5);
    REQUIRE(g.node_count == 6);
    std::vector<double> law(36, 0.0);
    for (int tu = 0; tu < 3; ++tu) {
        for (int tv = 0; tv < 3; ++tv) {
            for (int bu = 0; bu < 2; ++bu) {
                for (int bv = 0; bv < 2; ++bv) {
                    const double p = 0.5 * m3(tu, tv) * t(bu, bv);
                    law[(2 * tu + bu) * 6 + (2 * tv + bv)] += p;  // ternary level first
                    law[(3 * bu + tu) * 6 + (3 * bv + tv)] += p;  // binary level first
                }
            }
        }
    }
    CHECK(max_cell_z(g, law) < 4.5);
}

TEST_CASE("RPSKG with only ternary levels follows the 3x3 Kronecker power") {
    std::mt19937_64 gen(2);
    const auto t = random_seed(gen, 0.05);
    const auto m3 = sample_3x3_from_2x2(t);
    const auto g = generate_rpskg(t, m3, 0, 2, 300000, 6);
    REQUIRE(g.node_count == 9);
    CHECK(max_cell_z(g, kronecker_power(m3.matrix(), 2)) < 4.5);
}

TEST_CASE("NSKG replay follows the product of its level matrices") {
    const auto t = graph500_seed();
    const NoiseRecord noise{{0.08, -0.05}};
    const auto g = generate_nskg_with_noise(t, noise, 200000, 8);
    const auto l0 = nskg_level_matrix(t, noise.mu[0]);
    const auto l1 = nskg_level_matrix(t, noise.mu[1]);
    std::vector<double> law(16);
    for (int u = 0; u < 4; ++u) {
        for (int v = 0; v < 4; ++v) {
            law[u * 4 + v] = l0(u >> 1, v >> 1) * l1(u & 1, v & 1);
        }
    }
    CHECK(max_cell_z(g, law) < 4.5);
}

TEST_CASE("NSKG level matrices stay stochastic up to the noise bound") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_seed(gen);
        const double b = nskg_max_noise(t);
        for (double mu : {-b, -b / 2, 0.0, b / 3, b}) {
            const auto level = nskg_level_matrix(t, mu);
            CHECK(std::abs(level.sum() - 1.0) <= 1e-14);
            for (double e : level.entries()) {
                CHECK(e >= -1e-15);
                CHECK(e <= 1.0);
            }
        }
    }
    const auto t = graph500_seed();
    CHECK_THROWS_AS(generate_nskg(t, 4, 10, nskg_max_noise(t) * 1.01, 1), Error);
}

TEST_CASE("NSKG noise values lie within the bound") {
    const auto [g, noise] = generate_nskg(graph500_seed(), 12, 100, 0.1, 4);
    REQUIRE(noise.mu.size() == 12);
    std::set<double> distinct(noise.mu.begin(), noise.mu.end());
    CHECK(distinct.size() == 12);
    for (double mu : noise.mu) {
        CHECK(std::abs(mu) <= 0.1);
    }
}

TEST_CASE("Chung-Lu endpoints are drawn proportional to degrees") {
    const std::vector<std::uint64_t> d_out{5, 0, 3, 2};
    const std::vector<std::uint64_t> d_in{1, 4, 4, 1};
    const std::uint64_t m = 10;
    EdgeList g;
    g.node_count = 4;
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
        const auto one = generate_chunglu(d_out, d_in, m, seed);
        g.edges.insert(g.edges.end(), one.edges.begin(), one.edges.end());
    }
    std::vector<double> law(16);
    for (int u = 0; u < 4; ++u) {
        for (int v = 0; v < 4; ++v) {
            law[u * 4 + v] = double(d_out[u]) * double(d_in[v]) / double(m * m);
        }
    }
    CHECK(max_cell_z(g, law) < 4.5);
    CHECK_THROWS_AS(generate_chunglu(d_out, d_in, 11, 1), Error);
}

TEST_CASE("Bernoulli graph is simple with the right edge density") {
    const std::uint64_t n = 3000;
    const double p = 0.01;
    const auto g = generate_bernoulli(n, p, 10);
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const Edge& e : g.edges) {
        REQUIRE(e.source < e.target);
        REQUIRE(e.target < n);
        seen.insert({e.source, e.target});
    }
    CHECK(seen.size() == g.edges.size());
    const double pairs = double(n) * double(n - 1) / 2.0;
    CHECK(std::abs(double(g.edges.size()) - pairs * p) < 5.0 * std::sqrt(pairs * p * (1 - p)));
    CHECK(generate_bernoulli(4, 1.0, 1).edges.size() == 6);
    CHECK(generate_bernoulli(4, 0.0, 1).edges.empty());
}

TEST_CASE("Bernoulli pair frequencies over many seeds") {
    const std::uint64_t n = 5;
    const double p = 0.3;
    std::vector<int> hits(n * n, 0);
    constexpr int kTrials = 20000;
    for (int s = 0; s < kTrials; ++s) {
        for (const Edge& e : generate_bernoulli(n, p, s).edges) {
            ++hits[e.source * n + e.target];
        }
    }
    const double sd = std::sqrt(kTrials * p * (1 - p));
    for (std::uint64_t u = 0; u < n; ++u) {
        for (std::uint64_t v = u + 1; v < n; ++v) {
            CHECK(std::abs(hits[u * n + v] - kTrials * p) < 4.5 * sd);
        }
    }
}

TEST_CASE("every generator is independent of the worker count") {
    std::vector<GenConfig> configs;
    configs.push_back(base_config(Model::Skg));
    auto rp = base_config(Model::Rpskg);
    rp.ell = 5;
    rp.k = 3;
    configs.push_back(rp);
    auto ns = base_config(Model::Nskg);
    ns.noise_b = 0.1;
    configs.push_back(ns);
    auto be = base_config(Model::Bernoulli);
    be.bernoulli_n = 2000;
    be.p = 0.005;
    configs.push_back(be);
    auto cl = base_config(Model::ChungLu);
    std::vector<std::uint64_t> d(100, 200);
    cl.degree_seqs = std::make_pair(d, d);
    configs.push_back(cl);
    for (const auto& cfg : configs) {
        CAPTURE(to_string(cfg.model));
        const auto one = generate(cfg, 1);
        CHECK(generate(cfg, 8).graph == one.graph);
        CHECK(generate(cfg, 3).graph == one.graph);
        CHECK(one.graph.node_count == node_count(cfg));
    }
}

TEST_CASE("degenerate reductions are bit-exact") {
    const auto t = graph500_seed();
    const auto skg = generate_skg(t, 14, 100000, 31);
    CHECK(generate_rpskg(t, std::nullopt, 14, 0, 100000, 31) == skg);
    CHECK(generate_nskg(t, 14, 100000, 0.0, 31).first == skg);
}

TEST_CASE("NSKG regenerates from its noise record") {
    const auto t = graph500_seed();
    const auto [g, noise] = generate_nskg(t, 10, 50000, 0.05, 12);
    CHECK(generate_nskg_with_noise(t, noise, 50000, 12) == g);
}

TEST_CASE("configuration validation") {
    auto cfg = base_config(Model::Skg);
    cfg.ell = 0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg.ell = 63;
    try {
        validate(cfg);
        FAIL("expected TooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
    auto rp = base_config(Model::Rpskg);
    rp.ell = 0;
    rp.k = 0;
    CHECK_THROWS_AS(validate(rp), Error);
    rp.k = 2;
    rp.seed3 = graph500_seed();
    try {
        validate(rp);
        FAIL("expected InvalidShape");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidShape);
    }
    auto ns = base_config(Model::Nskg);
    CHECK_THROWS_AS(validate(ns), Error);
    auto cl = base_config(Model::ChungLu);
    cl.degree_seqs = std::make_pair(std::vector<std::uint64_t>{1, 2}, std::vector<std::uint64_t>{3});
    try {
        validate(cl);
        FAIL("expected DegreeSumMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegreeSumMismatch);
    }
    CHECK(parse_model("rpskg") == Model::Rpskg);
    CHECK_THROWS_AS((void)parse_model("rmat"), Error);
}
