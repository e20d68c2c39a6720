#ifndef KRONLAB_THRESHOLD_HPP_
#define KRONLAB_THRESHOLD_HPP_

#include "kronlab/generators.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace kronlab {

enum class ThresholdMode { Isolated, Connected };
enum class ThresholdSide { Above, Below };

[[nodiscard]] std::string_view to_string(ThresholdMode m) noexcept;
[[nodiscard]] std::string_view to_string(ThresholdSide s) noexcept;
[[nodiscard]] ThresholdMode parse_threshold_mode(std::string_view name);
[[nodiscard]] ThresholdSide parse_threshold_side(std::string_view name);

struct ThresholdConfig {
    std::uint64_t n = 2;
    double alpha = 3.0;
    std::uint64_t trials = 1;
    ThresholdMode mode = ThresholdMode::Isolated;
    ThresholdSide side = ThresholdSide::Above;
    std::uint64_t rng_seed = 0;
    // Overrides the regime's link probability when set (small-case checks).
    std::optional<double> p_override;
};

struct ThresholdReport {
    double fraction_with_property = 0.0;
    double theoretical_bound = 0.0;
    double p_used = 0.0;
};

// Above: (ln n + alpha)/n, or max(9e/n, (ln n + alpha)/n) for connectivity.
// Below: (ln n - alpha)/n. Clamped to [0, 1].
double threshold_link_probability(const ThresholdConfig& cfg);

// Fraction of trials with at least one isolated vertex. Bound: Markov
// e^p e^-alpha on that event (above), or the Chebyshev bound
// 1/E[X] + p/(1-p) on its complement (below).
ThresholdReport isolated_threshold_experiment(const ThresholdConfig& cfg, unsigned threads = 1);

// Fraction of connected trials. Bound: E[X1] + E[X2] + sum_{3<=k<=n/2}
// q^k / (p k^2) on disconnection (above), or the isolated-vertex Chebyshev
// bound on connection (below).
ThresholdReport connectivity_threshold_experiment(const ThresholdConfig& cfg, unsigned threads = 1);

// Upper bound on P[disconnected] for G(n, p) from the first-moment argument
// over component sizes; needs n p >= 9e for the k >= 3 tail to converge.
double disconnection_bound(std::uint64_t n, double p);

struct BruteForceStats {
    double expected_isolated = 0.0;
    double connected_probability = 0.0;
};

// Exhaustive sum over all 2^C(n,2) labeled graphs; TooLarge for n > 5.
BruteForceStats brute_force_graph_stats(std::uint64_t n, double p);

// P[G(n, p) connected] by the recurrence over the component containing
// vertex 0.
double connectivity_probability(std::uint64_t n, double p);

// Empirical TV between pooled out-degree pmfs of two generators.
double identifiability_separation_probe(const GenConfig& a, const GenConfig& b, std::uint64_t trials,
                                        std::uint64_t rng_seed, unsigned threads = 1);

void write_threshold_csv(std::ostream& os, const ThresholdConfig& cfg, const ThresholdReport& report);

}  // namespace kronlab

#endif  // KRONLAB_THRESHOLD_HPP_
