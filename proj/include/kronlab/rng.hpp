#ifndef KRONLAB_RNG_HPP_
#define KRONLAB_RNG_HPP_

#include <array>
#include <cstdint>

namespace kronlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block is a
// pure function of (key, counter), so any stream can be entered directly
// without stepping through its predecessors.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

// Purpose tags keep independent uses of the same (seed, index) pair apart.
enum class StreamDomain : std::uint32_t {
    Edge = 0,
    Positions = 1,
    Noise = 2,
    BernoulliRow = 3,
    Trial = 4,
};

// Deterministic random stream identified by (seed, index, domain). Two streams
// share no blocks unless all three coordinates agree.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t index, StreamDomain domain = StreamDomain::Edge) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_lo_(static_cast<std::uint32_t>(index)),
          index_hi_(static_cast<std::uint32_t>(index >> 32)),
          domain_(static_cast<std::uint32_t>(domain)) {}

    std::uint64_t next_u64() noexcept {
        if (lane_ == 0) {
            buffer_ = Philox4x32::block({index_lo_, index_hi_, domain_, block_++}, key_);
        }
        const std::uint64_t out = (std::uint64_t{buffer_[lane_]} << 32) | buffer_[lane_ + 1];
        lane_ = (lane_ + 2) & 3u;
        return out;
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe to take the logarithm of.
    double next_double_open0() noexcept { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by multiply-shift; bias is below bound / 2^64.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * bound) >> 64);
    }

private:
    Philox4x32::Key key_;
    std::uint32_t index_lo_;
    std::uint32_t index_hi_;
    std::uint32_t domain_;
    std::uint32_t block_ = 0;
    std::uint32_t lane_ = 0;
    Philox4x32::Counter buffer_{};
};

// Stream for edge `edge_index` of a generation run keyed by `rng_seed`.
inline CounterStream per_edge_randomness(std::uint64_t rng_seed, std::uint64_t edge_index) noexcept {
    return CounterStream(rng_seed, edge_index, StreamDomain::Edge);
}

// SplitMix64 finalizer; used to derive child seeds (per trial, per config).
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child) noexcept {
    return mix_seed(mix_seed(parent) ^ (child * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
}

}  // namespace kronlab

#endif  // KRONLAB_RNG_HPP_
