#include "kronlab/generators.hpp"

#include "kronlab/error.hpp"
#include "kronlab/parallel.hpp"
#include "kronlab/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kronlab {

namespace {

// Cumulative thresholds over a seed's cells, row-major.
class CellTable {
public:
    CellTable() = default;

    explicit CellTable(const SeedMatrix& m) : cols_(m.cols()) {
        double acc = 0.0;
        const auto entries = m.entries();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            acc += entries[i];
            cum_[i] = acc;
            if (entries[i] > 0.0) {
                last_positive_ = i;
            }
        }
        size_ = entries.size();
    }

    // Cell index for a uniform draw in [0, 1).
    [[nodiscard]] std::size_t pick(double u) const noexcept {
        for (std::size_t i = 0; i < size_; ++i) {
            if (u < cum_[i]) {
                return i;
            }
        }
        return last_positive_;
    }

    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

private:
    std::array<double, 9> cum_{};
    std::size_t size_ = 0;
    std::size_t cols_ = 1;
    std::size_t last_positive_ = 0;
};

void require_square(const StochasticSeed& s, std::size_t dim, const char* what) {
    if (s.rows() != dim || s.cols() != dim) {
        throw Error(ErrorCode::InvalidShape, std::string(what) + " must be " + std::to_string(dim) + "x" +
                                                 std::to_string(dim));
    }
}

std::uint64_t checked_pow(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > (std::uint64_t{1} << 62) / base) {
            throw Error(ErrorCode::TooLarge, "node count overflows 64-bit vertex ids");
        }
        out *= base;
    }
    return out;
}

std::uint64_t mixed_radix_nodes(int ell, int k) {
    const std::uint64_t threes = checked_pow(3, k);
    const std::uint64_t twos = checked_pow(2, ell);
    if (threes > (std::uint64_t{1} << 62) / twos) {
        throw Error(ErrorCode::TooLarge, "node count overflows 64-bit vertex ids");
    }
    return threes * twos;
}

// Walks one edge down a fixed list of per-level tables.
EdgeList generate_levels(const std::vector<CellTable>& levels, std::uint64_t node_count, std::uint64_t m,
                         std::uint64_t rng_seed, unsigned threads) {
    EdgeList out;
    out.node_count = node_count;
    out.edges.resize(m);
    parallel_for(m, threads, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            auto stream = per_edge_randomness(rng_seed, i);
            VertexId u = 0;
            VertexId v = 0;
            for (const auto& level : levels) {
                const std::size_t cell = level.pick(stream.next_double());
                u = u * 2 + cell / 2;
                v = v * 2 + cell % 2;
            }
            out.edges[i] = {u, v};
        }
    });
    return out;
}

}  // namespace

std::string_view to_string(Model model) noexcept {
    switch (model) {
    case Model::Skg: return "skg";
    case Model::Rpskg: return "rpskg";
    case Model::Nskg: return "nskg";
    case Model::Bernoulli: return "bernoulli";
    case Model::ChungLu: return "chunglu";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    for (Model m : {Model::Skg, Model::Rpskg, Model::Nskg, Model::Bernoulli, Model::ChungLu}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

EdgeList generate_skg(const StochasticSeed& t, int ell, std::uint64_t m, std::uint64_t rng_seed, unsigned threads) {
    require_square(t, 2, "SKG seed");
    if (ell < 1) {
        throw Error(ErrorCode::InvalidArgument, "SKG needs l >= 1");
    }
    const std::vector<CellTable> levels(static_cast<std::size_t>(ell), CellTable(t.matrix()));
    return generate_levels(levels, checked_pow(2, ell), m, rng_seed, threads);
}

EdgeList generate_rpskg(const StochasticSeed& t, const std::optional<StochasticSeed>& m3, int ell, int k,
                        std::uint64_t m, std::uint64_t rng_seed, unsigned threads) {
    require_square(t, 2, "RPSKG 2x2 seed");
    if (ell < 0 || k < 0 || ell + k < 1) {
        throw Error(ErrorCode::InvalidArgument, "RPSKG needs l, k >= 0 and l + k >= 1");
    }
    std::optional<StochasticSeed> ternary = m3;
    if (k > 0 && !ternary) {
        try {
            ternary = sample_3x3_from_2x2(t);
        } catch (const Error& e) {
            throw Error(ErrorCode::MissingSeed3, std::string("no 3x3 seed supplied and none derivable: ") + e.what());
        }
    }
    if (ternary) {
        require_square(*ternary, 3, "RPSKG 3x3 seed");
    }

    const std::uint64_t n = mixed_radix_nodes(ell, k);
    const CellTable binary_table(t.matrix());
    const CellTable ternary_table = ternary ? CellTable(ternary->matrix()) : CellTable();
    const int total = ell + k;

    EdgeList out;
    out.node_count = n;
    out.edges.resize(m);
    parallel_for(m, threads, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            // positions[j] == 1 marks a 3x3 level; k of the l + k slots, drawn
            // without replacement by a partial Fisher-Yates shuffle.
            std::array<std::uint8_t, 64> positions{};
            if (k > 0) {
                std::array<std::uint8_t, 64> order{};
                std::iota(order.begin(), order.begin() + total, std::uint8_t{0});
                CounterStream pos_stream(rng_seed, i, StreamDomain::Positions);
                for (int j = 0; j < k; ++j) {
                    const auto pick = j + static_cast<int>(pos_stream.next_below(static_cast<std::uint64_t>(total - j)));
                    std::swap(order[j], order[pick]);
                    positions[order[j]] = 1;
                }
            }
            auto stream = per_edge_randomness(rng_seed, i);
            VertexId u = 0;
            VertexId v = 0;
            for (int j = 0; j < total; ++j) {
                const double draw = stream.next_double();
                if (positions[j] == 1) {
                    const std::size_t cell = ternary_table.pick(draw);
                    u = u * 3 + cell / 3;
                    v = v * 3 + cell % 3;
                } else {
                    const std::size_t cell = binary_table.pick(draw);
                    u = u * 2 + cell / 2;
                    v = v * 2 + cell % 2;
                }
            }
            out.edges[i] = {u, v};
        }
    });
    return out;
}

double nskg_max_noise(const StochasticSeed& t) {
    require_square(t, 2, "NSKG seed");
    return std::min({t(0, 1), t(1, 0), (t(0, 0) + t(1, 1)) / 2.0});
}

SeedMatrix nskg_level_matrix(const StochasticSeed& t, double mu) {
    require_square(t, 2, "NSKG seed");
    const double t1 = t(0, 0);
    const double t2 = t(0, 1);
    const double t3 = t(1, 0);
    const double t4 = t(1, 1);
    const double diag = t1 + t4;
    if (diag <= 0.0) {
        if (mu != 0.0) {
            throw Error(ErrorCode::NoiseBoundViolated, "noise needs t1 + t4 > 0");
        }
        return t.matrix();
    }
    return SeedMatrix(2, 2, {t1 - 2.0 * mu * t1 / diag, t2 + mu, t3 + mu, t4 - 2.0 * mu * t4 / diag});
}

EdgeList generate_nskg_with_noise(const StochasticSeed& t, const NoiseRecord& noise, std::uint64_t m,
                                  std::uint64_t rng_seed, unsigned threads) {
    require_square(t, 2, "NSKG seed");
    if (noise.mu.empty()) {
        throw Error(ErrorCode::InvalidArgument, "NSKG needs l >= 1");
    }
    std::vector<CellTable> levels;
    levels.reserve(noise.mu.size());
    for (std::size_t r = 0; r < noise.mu.size(); ++r) {
        const SeedMatrix level = nskg_level_matrix(t, noise.mu[r]);
        for (double e : level.entries()) {
            if (e < 0.0 || e > 1.0) {
                throw Error(ErrorCode::NoiseBoundViolated,
                            "level " + std::to_string(r) + " matrix leaves [0, 1] at mu = " + std::to_string(noise.mu[r]));
            }
        }
        levels.emplace_back(level);
    }
    return generate_levels(levels, checked_pow(2, static_cast<int>(noise.mu.size())), m, rng_seed, threads);
}

std::pair<EdgeList, NoiseRecord> generate_nskg(const StochasticSeed& t, int ell, std::uint64_t m, double noise_b,
                                               std::uint64_t rng_seed, unsigned threads) {
    if (ell < 1) {
        throw Error(ErrorCode::InvalidArgument, "NSKG needs l >= 1");
    }
    if (!(noise_b >= 0.0) || noise_b > nskg_max_noise(t)) {
        throw Error(ErrorCode::NoiseBoundViolated, "noise bound b = " + std::to_string(noise_b) +
                                                       " outside [0, min(t2, (t1 + t4)/2)]");
    }
    NoiseRecord noise;
    noise.mu.resize(static_cast<std::size_t>(ell));
    CounterStream stream(rng_seed, 0, StreamDomain::Noise);
    for (double& mu : noise.mu) {
        const double u = stream.next_double();
        mu = noise_b == 0.0 ? 0.0 : std::clamp(-noise_b + 2.0 * noise_b * u, -noise_b, noise_b);
    }
    EdgeList graph = generate_nskg_with_noise(t, noise, m, rng_seed, threads);
    return {std::move(graph), std::move(noise)};
}

EdgeList generate_bernoulli(std::uint64_t n, double p, std::uint64_t rng_seed, unsigned threads) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "Bernoulli graph needs n >= 1");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "link probability must lie in [0, 1]");
    }
    EdgeList out;
    out.node_count = n;
    if (p == 0.0 || n < 2) {
        return out;
    }
    const std::uint64_t rows = n - 1;
    const unsigned workers = effective_workers(rows, threads);
    std::vector<std::vector<Edge>> parts(workers);
    const double log_q = std::log1p(-p);
    parallel_for_workers(rows, workers, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
        auto& part = parts[w];
        for (std::uint64_t u = begin; u < end; ++u) {
            if (p == 1.0) {
                for (std::uint64_t v = u + 1; v < n; ++v) {
                    part.push_back({u, v});
                }
                continue;
            }
            CounterStream stream(rng_seed, u, StreamDomain::BernoulliRow);
            std::uint64_t v = u;
            for (;;) {
                // Number of absent pairs before the next present one.
                const double skip = std::floor(std::log(stream.next_double_open0()) / log_q);
                const auto remaining = static_cast<double>(n - 1 - v);
                if (!(skip < remaining)) {
                    break;
                }
                v += static_cast<std::uint64_t>(skip) + 1;
                part.push_back({u, v});
            }
        }
    });
    std::size_t total = 0;
    for (const auto& part : parts) {
        total += part.size();
    }
    out.edges.reserve(total);
    for (auto& part : parts) {
        out.edges.insert(out.edges.end(), part.begin(), part.end());
    }
    return out;
}

EdgeList generate_chunglu(const std::vector<std::uint64_t>& d_out, const std::vector<std::uint64_t>& d_in,
                          std::uint64_t m, std::uint64_t rng_seed, unsigned threads) {
    if (d_out.empty() || d_out.size() != d_in.size()) {
        throw Error(ErrorCode::DegreeSumMismatch, "degree sequences must be nonempty and of equal length");
    }
    std::vector<std::uint64_t> out_prefix(d_out.size());
    std::vector<std::uint64_t> in_prefix(d_in.size());
    std::partial_sum(d_out.begin(), d_out.end(), out_prefix.begin());
    std::partial_sum(d_in.begin(), d_in.end(), in_prefix.begin());
    if (out_prefix.back() != m || in_prefix.back() != m) {
        throw Error(ErrorCode::DegreeSumMismatch, "sum(d_out) = " + std::to_string(out_prefix.back()) +
                                                      ", sum(d_in) = " + std::to_string(in_prefix.back()) +
                                                      ", m = " + std::to_string(m));
    }
    EdgeList out;
    out.node_count = d_out.size();
    out.edges.resize(m);
    parallel_for(m, threads, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            auto stream = per_edge_randomness(rng_seed, i);
            const std::uint64_t a = stream.next_below(m);
            const std::uint64_t b = stream.next_below(m);
            const auto src = std::upper_bound(out_prefix.begin(), out_prefix.end(), a) - out_prefix.begin();
            const auto dst = std::upper_bound(in_prefix.begin(), in_prefix.end(), b) - in_prefix.begin();
            out.edges[i] = {static_cast<VertexId>(src), static_cast<VertexId>(dst)};
        }
    });
    return out;
}

std::uint64_t node_count(const GenConfig& cfg) {
    switch (cfg.model) {
    case Model::Skg:
    case Model::Nskg: return checked_pow(2, cfg.ell);
    case Model::Rpskg: return mixed_radix_nodes(cfg.ell, cfg.k);
    case Model::Bernoulli: return cfg.bernoulli_n;
    case Model::ChungLu: return cfg.degree_seqs ? cfg.degree_seqs->first.size() : 0;
    }
    return 0;
}

void validate(const GenConfig& cfg) {
    if (cfg.ell < 0 || cfg.k < 0) {
        throw Error(ErrorCode::InvalidArgument, "l and k must be nonnegative");
    }
    switch (cfg.model) {
    case Model::Skg:
        require_square(cfg.seed2, 2, "SKG seed");
        if (cfg.ell < 1) {
            throw Error(ErrorCode::InvalidArgument, "SKG needs l >= 1");
        }
        break;
    case Model::Nskg:
        require_square(cfg.seed2, 2, "NSKG seed");
        if (cfg.noise) {
            if (cfg.noise->mu.empty()) {
                throw Error(ErrorCode::InvalidArgument, "recorded noise has no levels");
            }
        } else {
            if (cfg.ell < 1) {
                throw Error(ErrorCode::InvalidArgument, "NSKG needs l >= 1");
            }
            if (!cfg.noise_b) {
                throw Error(ErrorCode::InvalidArgument, "NSKG needs a noise bound b");
            }
            if (!(*cfg.noise_b >= 0.0) || *cfg.noise_b > nskg_max_noise(cfg.seed2)) {
                throw Error(ErrorCode::NoiseBoundViolated, "noise bound outside [0, min(t2, (t1 + t4)/2)]");
            }
        }
        break;
    case Model::Rpskg:
        require_square(cfg.seed2, 2, "RPSKG 2x2 seed");
        if (cfg.ell + cfg.k < 1) {
            throw Error(ErrorCode::InvalidArgument, "RPSKG needs l + k >= 1");
        }
        if (cfg.seed3) {
            require_square(*cfg.seed3, 3, "RPSKG 3x3 seed");
        }
        break;
    case Model::Bernoulli:
        if (cfg.bernoulli_n < 1) {
            throw Error(ErrorCode::InvalidArgument, "Bernoulli graph needs n >= 1");
        }
        if (!cfg.p || !(*cfg.p >= 0.0 && *cfg.p <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "Bernoulli graph needs p in [0, 1]");
        }
        break;
    case Model::ChungLu:
        if (!cfg.degree_seqs) {
            throw Error(ErrorCode::InvalidArgument, "Chung-Lu needs degree sequences");
        }
        {
            const auto& [d_out, d_in] = *cfg.degree_seqs;
            const auto so = std::accumulate(d_out.begin(), d_out.end(), std::uint64_t{0});
            const auto si = std::accumulate(d_in.begin(), d_in.end(), std::uint64_t{0});
            if (d_out.empty() || d_out.size() != d_in.size() || so != cfg.edges_m || si != cfg.edges_m) {
                throw Error(ErrorCode::DegreeSumMismatch, "degree sequences must have equal length and sum to m");
            }
        }
        break;
    }
    (void)node_count(cfg);
}

GenResult generate(const GenConfig& cfg, unsigned threads) {
    validate(cfg);
    switch (cfg.model) {
    case Model::Skg: return {generate_skg(cfg.seed2, cfg.ell, cfg.edges_m, cfg.rng_seed, threads), std::nullopt};
    case Model::Rpskg:
        return {generate_rpskg(cfg.seed2, cfg.seed3, cfg.ell, cfg.k, cfg.edges_m, cfg.rng_seed, threads), std::nullopt};
    case Model::Nskg:
        if (cfg.noise) {
            return {generate_nskg_with_noise(cfg.seed2, *cfg.noise, cfg.edges_m, cfg.rng_seed, threads), cfg.noise};
        } else {
            auto [graph, noise] = generate_nskg(cfg.seed2, cfg.ell, cfg.edges_m, *cfg.noise_b, cfg.rng_seed, threads);
            return {std::move(graph), std::move(noise)};
        }
    case Model::Bernoulli: return {generate_bernoulli(cfg.bernoulli_n, *cfg.p, cfg.rng_seed, threads), std::nullopt};
    case Model::ChungLu:
        return {generate_chunglu(cfg.degree_seqs->first, cfg.degree_seqs->second, cfg.edges_m, cfg.rng_seed, threads),
                std::nullopt};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model");
}

}  // namespace kronlab
