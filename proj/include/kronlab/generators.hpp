#ifndef KRONLAB_GENERATORS_HPP_
#define KRONLAB_GENERATORS_HPP_

#include "kronlab/seed.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace kronlab {

using VertexId = std::uint64_t;

struct Edge {
    VertexId source = 0;
    VertexId target = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Multiset of directed edges over [0, node_count). Duplicates are kept.
struct EdgeList {
    std::uint64_t node_count = 0;
    std::vector<Edge> edges;

    friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

// Per-level noise values of one NSKG graph.
struct NoiseRecord {
    std::vector<double> mu;

    friend bool operator==(const NoiseRecord&, const NoiseRecord&) = default;
};

enum class Model { Skg, Rpskg, Nskg, Bernoulli, ChungLu };

[[nodiscard]] std::string_view to_string(Model model) noexcept;
[[nodiscard]] Model parse_model(std::string_view name);

struct GenConfig {
    Model model = Model::Skg;
    std::uint64_t edges_m = 0;
    int ell = 0;
    int k = 0;
    StochasticSeed seed2 = graph500_seed();
    std::optional<StochasticSeed> seed3;
    std::optional<double> noise_b;
    std::optional<NoiseRecord> noise;  // replays a recorded NSKG graph when set
    std::optional<double> p;
    std::uint64_t bernoulli_n = 0;
    std::optional<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> degree_seqs;
    std::uint64_t rng_seed = 0;
};

struct GenResult {
    EdgeList graph;
    std::optional<NoiseRecord> noise;
};

// Node count implied by a configuration: 2^l (SKG, NSKG), 3^k 2^l (RPSKG),
// n (Bernoulli), |d_out| (Chung-Lu). Throws TooLarge past 2^63.
std::uint64_t node_count(const GenConfig& cfg);

// Checks every model-specific invariant; throws the matching Error.
void validate(const GenConfig& cfg);

// Dispatches on cfg.model. `threads` only changes wall time, never the output.
GenResult generate(const GenConfig& cfg, unsigned threads = 1);

EdgeList generate_skg(const StochasticSeed& t, int ell, std::uint64_t m, std::uint64_t rng_seed,
                      unsigned threads = 1);

// Positions of the k ternary levels are redrawn for every edge.
EdgeList generate_rpskg(const StochasticSeed& t, const std::optional<StochasticSeed>& m3, int ell, int k,
                        std::uint64_t m, std::uint64_t rng_seed, unsigned threads = 1);

// The 2x2 level matrix NSKG uses at noise value mu.
SeedMatrix nskg_level_matrix(const StochasticSeed& t, double mu);

// Largest admissible noise bound, min(t2, (t1 + t4) / 2).
double nskg_max_noise(const StochasticSeed& t);

std::pair<EdgeList, NoiseRecord> generate_nskg(const StochasticSeed& t, int ell, std::uint64_t m, double noise_b,
                                               std::uint64_t rng_seed, unsigned threads = 1);

// Regenerates an NSKG graph from a recorded noise vector (one value per level).
EdgeList generate_nskg_with_noise(const StochasticSeed& t, const NoiseRecord& noise, std::uint64_t m,
                                  std::uint64_t rng_seed, unsigned threads = 1);

// G(n, p) as pairs (u, v) with u < v, by geometric skip sampling per row.
EdgeList generate_bernoulli(std::uint64_t n, double p, std::uint64_t rng_seed, unsigned threads = 1);

EdgeList generate_chunglu(const std::vector<std::uint64_t>& d_out, const std::vector<std::uint64_t>& d_in,
                          std::uint64_t m, std::uint64_t rng_seed, unsigned threads = 1);

}  // namespace kronlab

#endif  // KRONLAB_GENERATORS_HPP_
