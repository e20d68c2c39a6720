#ifndef KRONLAB_ANALYSIS_HPP_
#define KRONLAB_ANALYSIS_HPP_

#include "kronlab/generators.hpp"
#include "kronlab/seed.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace kronlab {

enum class Direction { Out, In, Undirected };

[[nodiscard]] std::string_view to_string(Direction d) noexcept;
[[nodiscard]] Direction parse_direction(std::string_view name);

struct DegreeHistogram {
    Direction direction = Direction::Out;
    bool dedup = false;
    std::uint64_t node_count = 0;
    std::map<std::uint64_t, std::uint64_t> counts;  // degree -> number of vertices

    [[nodiscard]] std::uint64_t total() const noexcept;
};

// Per-vertex degrees. A self-loop adds 2 to its vertex's undirected degree.
std::vector<std::uint64_t> vertex_degrees(const EdgeList& graph, Direction direction, bool dedup);

// Exact degree counts over all node_count vertices, degree 0 included.
// Throws IdOutOfRange for ids >= node_count.
DegreeHistogram degree_histogram(const EdgeList& graph, Direction direction = Direction::Out, bool dedup = false);

// Finite pmf on {0, 1, ..., size-1}; entries are nonnegative and sum to 1
// within 1e-9.
class DiscretePmf {
public:
    DiscretePmf() = default;
    static DiscretePmf from_probabilities(std::vector<double> probs);
    static DiscretePmf from_counts(const std::map<std::uint64_t, std::uint64_t>& counts);
    static DiscretePmf point_mass(std::uint64_t at);

    [[nodiscard]] double operator[](std::uint64_t d) const noexcept { return d < probs_.size() ? probs_[d] : 0.0; }
    [[nodiscard]] std::size_t support_size() const noexcept { return probs_.size(); }
    [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probs_; }
    [[nodiscard]] double mean() const noexcept;

private:
    explicit DiscretePmf(std::vector<double> probs) : probs_(std::move(probs)) {}
    std::vector<double> probs_;
};

// Half the L1 distance over the union of supports.
double tv_distance(const DiscretePmf& p, const DiscretePmf& q);

enum class Radix { Binary, Ternary };

// Digit composition of an ell-digit vertex id.
struct SliceId {
    Radix radix = Radix::Binary;
    int ell = 0;
    int zeros = 0;  // alpha for ternary
    int ones = 0;   // beta for ternary; ell - zeros for binary

    // Binary slice index r = zeros - ell/2; empty for odd ell.
    [[nodiscard]] std::optional<int> r() const noexcept;
    [[nodiscard]] int alpha() const noexcept { return zeros; }
    [[nodiscard]] int beta() const noexcept { return ones; }

    friend auto operator<=>(const SliceId&, const SliceId&) = default;
};

SliceId slice_of_vertex(VertexId v, int ell, Radix radix);

// Out-edge probability of one insertion at a vertex of binary slice r
// (even ell): (1 - 4 sigma^2)^(ell/2) tau^r / 2^ell.
double slice_probability_binary(const SkgParams& params, int r);

// Same slice addressed by its zero count, valid for any ell:
// (1/2 + sigma)^z (1/2 - sigma)^(ell - z).
double slice_probability_binary_zeros(const SkgParams& params, int zeros);

// Ternary slice S_{alpha,beta} of the 3x3 seed induced by a symmetric 2x2 seed:
// tau^(2 alpha + beta) Lambda / (Delta 3^ell).
double slice_probability_ternary(const SkgParams& params, int alpha, int beta);

// Product of the induced 3x3 row masses, the direct route to the same value.
double slice_probability_ternary_direct(double sigma, int ell, int alpha, int beta);

enum class PmfMode { ExactBinomial, Poisson };

struct TheoreticalPmf {
    DiscretePmf pmf;
    bool poisson_precondition_met = true;  // p <= 1/sqrt(m); only meaningful for Poisson
};

// Binomial(m, p) or Poisson(m p), truncated once the cumulative mass reaches
// 1 - 1e-12.
TheoreticalPmf theoretical_degree_pmf(double p_slice, std::uint64_t m, PmfMode mode);

// Poisson(mean) truncated the same way.
DiscretePmf poisson_pmf(double mean);

double expected_isolated(std::uint64_t n, double p);

struct IsolatedVariance {
    double exact = 0.0;
    double upper_bound = 0.0;  // E[X] + E[X]^2 p / (1 - p)
};

IsolatedVariance variance_isolated(std::uint64_t n, double p);

struct ComponentSummary {
    std::uint64_t component_count = 0;
    std::uint64_t largest_size = 0;
    std::uint64_t isolated_count = 0;
};

// Union-find over the undirected view of the graph.
ComponentSummary component_summary(const EdgeList& graph);

struct OscillationParams {
    double bin_ratio = 1.3;
    double prominence = 0.15;  // decades
    std::size_t min_vertices = 10;
};

struct OscillationBin {
    double lo = 0.0;  // inclusive degree bound
    double hi = 0.0;  // exclusive degree bound
    std::uint64_t degrees = 0;  // integers covered by the bin
    std::uint64_t vertices = 0;
    double log10_avg_frequency = 0.0;
};

struct OscillationReport {
    double score = 0.0;
    std::size_t extrema = 0;
    std::vector<OscillationBin> bins;
};

// Log-binned degree frequencies; score = prominent interior extrema / bins.
// Throws InsufficientData below min_vertices nonzero-degree vertices.
OscillationReport oscillation_score(const DegreeHistogram& hist, const OscillationParams& params = {});

// Topographic prominence of every strict interior local maximum of `series`
// (and, negated, of every strict interior minimum). Exposed for tests.
std::vector<double> extremum_prominences(const std::vector<double>& series);

struct LognormalFit {
    double mu = 0.0;      // of ln(degree)
    double sigma = 0.0;
    double residual = 0.0;  // RMS over log10 frequencies of nonzero-degree bins
};

// Least-squares lognormal-shape fit to the log-binned series; diagnostic only.
LognormalFit fit_lognormal(const OscillationReport& report);

// Per-slice comparison of a generated graph against the slice laws.
struct SliceRow {
    SliceId slice;
    std::uint64_t vertices = 0;
    double theoretical_p = 0.0;
    double empirical_p = 0.0;
    double tv_binomial = 0.0;
};

// Binary slices when k == 0, ternary slices when ell == 0 (3x3 seed induced
// from the symmetric 2x2 `seed`). Mixed l and k have no fixed slices.
std::vector<SliceRow> slice_report(const EdgeList& graph, const StochasticSeed& seed, int ell, int k);

// Pools per-slice out-degree counts across several graphs of the same shape.
class SliceAccumulator {
public:
    SliceAccumulator(const StochasticSeed& seed, int ell, int k, std::uint64_t edges);
    void add(const EdgeList& graph);
    [[nodiscard]] std::vector<SliceRow> rows() const;

private:
    struct Pool {
        std::uint64_t vertices = 0;
        std::uint64_t out_edges = 0;
        std::map<std::uint64_t, std::uint64_t> degree_counts;
    };
    SkgParams params_;
    int ell_;
    int k_;
    std::uint64_t edges_;
    std::uint64_t graphs_ = 0;
    std::map<SliceId, Pool> pools_;
};

}  // namespace kronlab

#endif  // KRONLAB_ANALYSIS_HPP_
