#include "kronlab/parallel.hpp"
#include "kronlab/rng.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

using namespace kronlab;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of their coordinates") {
    CounterStream a(42, 7, StreamDomain::Edge);
    CounterStream b(42, 7, StreamDomain::Edge);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    CounterStream c(42, 8, StreamDomain::Edge);
    CounterStream d(42, 7, StreamDomain::Positions);
    CounterStream e(43, 7, StreamDomain::Edge);
    CounterStream f(42, 7, StreamDomain::Edge);
    const auto first = f.next_u64();
    CHECK(c.next_u64() != first);
    CHECK(d.next_u64() != first);
    CHECK(e.next_u64() != first);
}

TEST_CASE("uniform draws stay in range and look uniform") {
    CounterStream s(1, 0);
    constexpr int kBins = 16;
    constexpr int kDraws = 160000;
    std::vector<int> bins(kBins, 0);
    for (int i = 0; i < kDraws; ++i) {
        const double u = s.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        ++bins[static_cast<int>(u * kBins)];
        const double v = s.next_double_open0();
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
    }
    double chi2 = 0.0;
    const double expect = double(kDraws) / kBins;
    for (int b : bins) {
        chi2 += (b - expect) * (b - expect) / expect;
    }
    // 15 degrees of freedom; 99.99th percentile is about 44.
    CHECK(chi2 < 44.0);
}

TEST_CASE("next_below stays below its bound") {
    CounterStream s(9, 3);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto v = s.next_below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(std::abs(c - 10000) < 500);
    }
    CHECK(s.next_below(1) == 0);
}

TEST_CASE("derived seeds do not collide on small grids") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t parent = 0; parent < 50; ++parent) {
        for (std::uint64_t child = 0; child < 200; ++child) {
            seen.insert(derive_seed(parent, child));
        }
    }
    CHECK(seen.size() == 50u * 200u);
}

TEST_CASE("parallel_for covers every index once") {
    for (unsigned threads : {1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(1001);
        parallel_for(hits.size(), threads, [&](std::uint64_t begin, std::uint64_t end) {
            for (auto i = begin; i < end; ++i) {
                hits[i].fetch_add(1);
            }
        });
        for (auto& h : hits) {
            CHECK(h.load() == 1);
        }
    }
}

TEST_CASE("parallel_for propagates worker exceptions") {
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::uint64_t begin, std::uint64_t) {
                                     if (begin > 0) {
                                         throw std::runtime_error("boom");
                                     }
                                 }),
                    std::runtime_error);
}
