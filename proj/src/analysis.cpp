#include "kronlab/analysis.hpp"

#include "kronlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kronlab {

namespace {

void check_ids(const EdgeList& graph) {
    for (const Edge& e : graph.edges) {
        if (e.source >= graph.node_count || e.target >= graph.node_count) {
            throw Error(ErrorCode::IdOutOfRange, "edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) +
                                                     ") outside [0, " + std::to_string(graph.node_count) + ")");
        }
    }
}

// Unimodal pmf built outward from its mode by the ratio w(d+1)/w(d), then
// normalized. Tails are cut once weights fall below 1e-20 of the mode.
template <typename Ratio>
DiscretePmf unimodal_pmf(std::uint64_t mode, std::uint64_t max_d, Ratio ratio_up) {
    constexpr double kCut = 1e-20;
    std::vector<double> up{1.0};
    for (std::uint64_t d = mode; d < max_d; ++d) {
        const double next = up.back() * ratio_up(d);
        if (next < kCut) {
            break;
        }
        up.push_back(next);
    }
    std::vector<double> down;
    double w = 1.0;
    for (std::uint64_t d = mode; d > 0; --d) {
        w /= ratio_up(d - 1);
        if (!(w >= kCut)) {
            break;
        }
        down.push_back(w);
    }
    const std::uint64_t lo = mode - down.size();
    std::vector<double> probs(mode + up.size(), 0.0);
    for (std::size_t i = 0; i < down.size(); ++i) {
        probs[mode - 1 - i] = down[i];
    }
    for (std::size_t i = 0; i < up.size(); ++i) {
        probs[mode + i] = up[i];
    }
    double total = 0.0;
    for (std::uint64_t d = lo; d < probs.size(); ++d) {
        total += probs[d];
    }
    for (double& p : probs) {
        p /= total;
    }
    return DiscretePmf::from_probabilities(std::move(probs));
}

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= base;
    }
    return out;
}

}  // namespace

std::string_view to_string(Direction d) noexcept {
    switch (d) {
    case Direction::Out: return "out";
    case Direction::In: return "in";
    case Direction::Undirected: return "undirected";
    }
    return "unknown";
}

Direction parse_direction(std::string_view name) {
    for (Direction d : {Direction::Out, Direction::In, Direction::Undirected}) {
        if (name == to_string(d)) {
            return d;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown direction '" + std::string(name) + "'");
}

std::uint64_t DegreeHistogram::total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& [deg, count] : counts) {
        t += count;
    }
    return t;
}

std::vector<std::uint64_t> vertex_degrees(const EdgeList& graph, Direction direction, bool dedup) {
    check_ids(graph);
    std::vector<Edge> unique_edges;
    const std::vector<Edge>* edges = &graph.edges;
    if (dedup) {
        unique_edges = graph.edges;
        std::sort(unique_edges.begin(), unique_edges.end());
        unique_edges.erase(std::unique(unique_edges.begin(), unique_edges.end()), unique_edges.end());
        edges = &unique_edges;
    }
    std::vector<std::uint64_t> deg(graph.node_count, 0);
    for (const Edge& e : *edges) {
        switch (direction) {
        case Direction::Out: ++deg[e.source]; break;
        case Direction::In: ++deg[e.target]; break;
        case Direction::Undirected:
            ++deg[e.source];
            ++deg[e.target];
            break;
        }
    }
    return deg;
}

DegreeHistogram degree_histogram(const EdgeList& graph, Direction direction, bool dedup) {
    DegreeHistogram hist;
    hist.direction = direction;
    hist.dedup = dedup;
    hist.node_count = graph.node_count;
    for (std::uint64_t d : vertex_degrees(graph, direction, dedup)) {
        ++hist.counts[d];
    }
    return hist;
}

DiscretePmf DiscretePmf::from_probabilities(std::vector<double> probs) {
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "pmf entries must be nonnegative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "pmf sums to " + std::to_string(total));
    }
    while (!probs.empty() && probs.back() == 0.0) {
        probs.pop_back();
    }
    return DiscretePmf(std::move(probs));
}

DiscretePmf DiscretePmf::from_counts(const std::map<std::uint64_t, std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (const auto& [value, count] : counts) {
        total += count;
    }
    if (total == 0) {
        throw Error(ErrorCode::InsufficientData, "no observations to build a pmf from");
    }
    std::vector<double> probs(counts.rbegin()->first + 1, 0.0);
    for (const auto& [value, count] : counts) {
        probs[value] = static_cast<double>(count) / static_cast<double>(total);
    }
    return from_probabilities(std::move(probs));
}

DiscretePmf DiscretePmf::point_mass(std::uint64_t at) {
    std::vector<double> probs(at + 1, 0.0);
    probs[at] = 1.0;
    return DiscretePmf(std::move(probs));
}

double DiscretePmf::mean() const noexcept {
    double m = 0.0;
    for (std::size_t d = 0; d < probs_.size(); ++d) {
        m += static_cast<double>(d) * probs_[d];
    }
    return m;
}

double tv_distance(const DiscretePmf& p, const DiscretePmf& q) {
    const std::size_t n = std::max(p.support_size(), q.support_size());
    double l1 = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        l1 += std::abs(p[d] - q[d]);
    }
    return std::clamp(0.5 * l1, 0.0, 1.0);
}

std::optional<int> SliceId::r() const noexcept {
    if (radix != Radix::Binary || ell % 2 != 0) {
        return std::nullopt;
    }
    return zeros - ell / 2;
}

SliceId slice_of_vertex(VertexId v, int ell, Radix radix) {
    const std::uint64_t base = radix == Radix::Binary ? 2 : 3;
    if (ell < 0 || ell > (radix == Radix::Binary ? 63 : 39) || v >= ipow(base, ell)) {
        throw Error(ErrorCode::IdOutOfRange, "vertex " + std::to_string(v) + " has more than " +
                                                 std::to_string(ell) + " digits");
    }
    SliceId id;
    id.radix = radix;
    id.ell = ell;
    for (int i = 0; i < ell; ++i) {
        const auto digit = v % base;
        v /= base;
        if (digit == 0) {
            ++id.zeros;
        } else if (digit == 1) {
            ++id.ones;
        }
    }
    return id;
}

double slice_probability_binary(const SkgParams& params, int r) {
    if (params.ell % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "slice index r needs an even l; use the zero-count form");
    }
    if (std::abs(r) > params.ell / 2) {
        throw Error(ErrorCode::InvalidArgument, "|r| exceeds l/2");
    }
    const double s2 = params.sigma * params.sigma;
    return std::pow(1.0 - 4.0 * s2, params.ell / 2) * std::pow(params.tau, r) / std::pow(2.0, params.ell);
}

double slice_probability_binary_zeros(const SkgParams& params, int zeros) {
    if (zeros < 0 || zeros > params.ell) {
        throw Error(ErrorCode::InvalidArgument, "zero count outside [0, l]");
    }
    return std::pow(0.5 + params.sigma, zeros) * std::pow(0.5 - params.sigma, params.ell - zeros);
}

double slice_probability_ternary(const SkgParams& params, int alpha, int beta) {
    if (alpha < 0 || beta < 0 || alpha + beta > params.ell) {
        throw Error(ErrorCode::InvalidArgument, "need alpha, beta >= 0 and alpha + beta <= l");
    }
    const double n = std::pow(3.0, params.ell);
    return std::pow(params.tau, 2 * alpha + beta) * params.lambda_big / (params.delta_ternary * n);
}

double slice_probability_ternary_direct(double sigma, int ell, int alpha, int beta) {
    const double norm = 0.75 + sigma * sigma;
    const double first = (0.5 + sigma) * (0.5 + sigma) / norm;
    const double second = (0.5 + sigma) * (0.5 - sigma) / norm;
    const double third = (0.5 - sigma) * (0.5 - sigma) / norm;
    return std::pow(first, alpha) * std::pow(second, beta) * std::pow(third, ell - alpha - beta);
}

DiscretePmf poisson_pmf(double mean) {
    if (!(mean >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Poisson mean must be nonnegative");
    }
    if (mean == 0.0) {
        return DiscretePmf::point_mass(0);
    }
    const auto mode = static_cast<std::uint64_t>(std::floor(mean));
    return unimodal_pmf(mode, std::numeric_limits<std::uint64_t>::max(),
                        [mean](std::uint64_t d) { return mean / static_cast<double>(d + 1); });
}

TheoreticalPmf theoretical_degree_pmf(double p_slice, std::uint64_t m, PmfMode mode) {
    if (!(p_slice >= 0.0 && p_slice <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "slice probability must lie in [0, 1]");
    }
    TheoreticalPmf out;
    out.poisson_precondition_met = p_slice <= 1.0 / std::sqrt(static_cast<double>(std::max<std::uint64_t>(m, 1)));
    if (mode == PmfMode::Poisson) {
        out.pmf = poisson_pmf(static_cast<double>(m) * p_slice);
        return out;
    }
    if (p_slice == 0.0 || m == 0) {
        out.pmf = DiscretePmf::point_mass(0);
        return out;
    }
    if (p_slice == 1.0) {
        out.pmf = DiscretePmf::point_mass(m);
        return out;
    }
    const double odds = p_slice / (1.0 - p_slice);
    const auto md = static_cast<double>(m);
    const auto mode_d = std::min<std::uint64_t>(m, static_cast<std::uint64_t>(std::floor((md + 1.0) * p_slice)));
    out.pmf = unimodal_pmf(mode_d, m, [md, odds](std::uint64_t d) {
        const auto dd = static_cast<double>(d);
        return (md - dd) / (dd + 1.0) * odds;
    });
    return out;
}

double expected_isolated(std::uint64_t n, double p) {
    if (n < 1 || !(p >= 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "need n >= 1 and p in [0, 1)");
    }
    return static_cast<double>(n) * std::pow(1.0 - p, static_cast<double>(n - 1));
}

IsolatedVariance variance_isolated(std::uint64_t n, double p) {
    const double mean = expected_isolated(n, p);
    const auto nd = static_cast<double>(n);
    const double q = std::pow(1.0 - p, nd - 1.0);
    const double pair = n >= 2 ? std::pow(1.0 - p, 2.0 * nd - 3.0) : 0.0;
    IsolatedVariance v;
    v.exact = nd * q * (1.0 - q) + nd * (nd - 1.0) * (pair - q * q);
    v.upper_bound = mean + mean * mean * p / (1.0 - p);
    return v;
}

ComponentSummary component_summary(const EdgeList& graph) {
    check_ids(graph);
    const std::uint64_t n = graph.node_count;
    std::vector<std::uint64_t> parent(n);
    std::vector<std::uint64_t> size(n, 1);
    std::vector<std::uint8_t> touched(n, 0);
    std::iota(parent.begin(), parent.end(), std::uint64_t{0});
    auto find = [&](std::uint64_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const Edge& e : graph.edges) {
        touched[e.source] = 1;
        touched[e.target] = 1;
        auto a = find(e.source);
        auto b = find(e.target);
        if (a == b) {
            continue;
        }
        if (size[a] < size[b]) {
            std::swap(a, b);
        }
        parent[b] = a;
        size[a] += size[b];
    }
    ComponentSummary out;
    for (std::uint64_t v = 0; v < n; ++v) {
        if (find(v) == v) {
            ++out.component_count;
            out.largest_size = std::max(out.largest_size, size[v]);
        }
        if (touched[v] == 0) {
            ++out.isolated_count;
        }
    }
    return out;
}

std::vector<double> extremum_prominences(const std::vector<double>& series) {
    std::vector<double> out;
    const std::size_t n = series.size();
    auto peak_prominence = [&](std::size_t i, double sign) {
        const double top = sign * series[i];
        double left_base = top;
        for (std::size_t j = i; j-- > 0;) {
            const double v = sign * series[j];
            if (v > top) {
                break;
            }
            left_base = std::min(left_base, v);
        }
        double right_base = top;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = sign * series[j];
            if (v > top) {
                break;
            }
            right_base = std::min(right_base, v);
        }
        return top - std::max(left_base, right_base);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (series[i] > series[i - 1] && series[i] > series[i + 1]) {
            out.push_back(peak_prominence(i, 1.0));
        } else if (series[i] < series[i - 1] && series[i] < series[i + 1]) {
            out.push_back(peak_prominence(i, -1.0));
        }
    }
    return out;
}

OscillationReport oscillation_score(const DegreeHistogram& hist, const OscillationParams& params) {
    if (!(params.bin_ratio > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "bin ratio must exceed 1");
    }
    std::uint64_t active = 0;
    for (const auto& [deg, count] : hist.counts) {
        if (deg > 0) {
            active += count;
        }
    }
    if (active < params.min_vertices) {
        throw Error(ErrorCode::InsufficientData, "need at least " + std::to_string(params.min_vertices) +
                                                     " vertices of nonzero degree, have " + std::to_string(active));
    }
    const std::uint64_t max_degree = hist.counts.rbegin()->first;

    OscillationReport report;
    double edge = 1.0;
    auto it = hist.counts.lower_bound(1);
    while (true) {
        const double next = edge * params.bin_ratio;
        // Integers d with edge <= d < next.
        const auto first = static_cast<std::uint64_t>(std::ceil(edge - 1e-9));
        const auto past = static_cast<std::uint64_t>(std::ceil(next - 1e-9));
        if (first > max_degree) {
            break;
        }
        if (past > first) {
            OscillationBin bin;
            bin.lo = edge;
            bin.hi = next;
            bin.degrees = past - first;
            while (it != hist.counts.end() && it->first < past) {
                bin.vertices += it->second;
                ++it;
            }
            if (bin.vertices > 0) {
                bin.log10_avg_frequency =
                    std::log10(static_cast<double>(bin.vertices) / static_cast<double>(bin.degrees));
                report.bins.push_back(bin);
            }
        }
        edge = next;
    }

    std::vector<double> series;
    series.reserve(report.bins.size());
    for (const auto& bin : report.bins) {
        series.push_back(bin.log10_avg_frequency);
    }
    for (double prom : extremum_prominences(series)) {
        if (prom > params.prominence) {
            ++report.extrema;
        }
    }
    report.score = report.bins.empty() ? 0.0
                                       : static_cast<double>(report.extrema) / static_cast<double>(report.bins.size());
    return report;
}

LognormalFit fit_lognormal(const OscillationReport& report) {
    // log10 f(d) ~ c0 + c1 ln d + c2 (ln d)^2 for a lognormal density in d.
    const std::size_t n = report.bins.size();
    if (n < 3) {
        throw Error(ErrorCode::InsufficientData, "lognormal fit needs at least 3 bins");
    }
    double s[5] = {0, 0, 0, 0, 0};
    double t[3] = {0, 0, 0};
    for (const auto& bin : report.bins) {
        const double x = std::log(std::sqrt(bin.lo * bin.hi));
        const double y = bin.log10_avg_frequency;
        double xp = 1.0;
        for (int k = 0; k < 5; ++k) {
            s[k] += xp;
            if (k < 3) {
                t[k] += xp * y;
            }
            xp *= x;
        }
    }
    // Normal equations, 3x3, by Cramer's rule.
    const double a[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    auto det3 = [](const double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double det = det3(a);
    if (std::abs(det) < 1e-300) {
        throw Error(ErrorCode::InsufficientData, "degenerate lognormal fit");
    }
    double c[3];
    for (int col = 0; col < 3; ++col) {
        double m[3][3];
        for (int r = 0; r < 3; ++r) {
            for (int k = 0; k < 3; ++k) {
                m[r][k] = k == col ? t[r] : a[r][k];
            }
        }
        c[col] = det3(m) / det;
    }
    LognormalFit fit;
    double sq = 0.0;
    for (const auto& bin : report.bins) {
        const double x = std::log(std::sqrt(bin.lo * bin.hi));
        const double e = c[0] + c[1] * x + c[2] * x * x - bin.log10_avg_frequency;
        sq += e * e;
    }
    fit.residual = std::sqrt(sq / static_cast<double>(n));
    // c2 = -log10(e) / (2 sigma^2), c1 = log10(e) (mu / sigma^2 - 1).
    const double log10e = 1.0 / std::log(10.0);
    if (c[2] < 0.0) {
        const double var = -log10e / (2.0 * c[2]);
        fit.sigma = std::sqrt(var);
        fit.mu = (c[1] / log10e + 1.0) * var;
    }
    return fit;
}

SliceAccumulator::SliceAccumulator(const StochasticSeed& seed, int ell, int k, std::uint64_t edges)
    : ell_(ell), k_(k), edges_(edges) {
    if ((ell > 0) == (k > 0)) {
        throw Error(ErrorCode::InvalidArgument, "slices need exactly one of l, k positive");
    }
    params_ = skg_params(seed, ell > 0 ? ell : k, edges);
}

void SliceAccumulator::add(const EdgeList& graph) {
    const int digits = ell_ > 0 ? ell_ : k_;
    const Radix radix = ell_ > 0 ? Radix::Binary : Radix::Ternary;
    const std::uint64_t expected_nodes = ipow(ell_ > 0 ? 2 : 3, digits);
    if (graph.node_count != expected_nodes) {
        throw Error(ErrorCode::InvalidArgument, "graph has " + std::to_string(graph.node_count) +
                                                    " vertices, slice layout expects " + std::to_string(expected_nodes));
    }
    if (graph.edges.size() != edges_) {
        throw Error(ErrorCode::InvalidArgument, "graph edge count differs from the slice model's m");
    }
    const auto deg = vertex_degrees(graph, Direction::Out, false);
    for (VertexId v = 0; v < graph.node_count; ++v) {
        auto& pool = pools_[slice_of_vertex(v, digits, radix)];
        ++pool.vertices;
        pool.out_edges += deg[v];
        ++pool.degree_counts[deg[v]];
    }
    ++graphs_;
}

std::vector<SliceRow> SliceAccumulator::rows() const {
    std::vector<SliceRow> out;
    for (const auto& [slice, pool] : pools_) {
        SliceRow row;
        row.slice = slice;
        row.vertices = pool.vertices;
        row.theoretical_p = slice.radix == Radix::Binary ? slice_probability_binary_zeros(params_, slice.zeros)
                                                         : slice_probability_ternary(params_, slice.zeros, slice.ones);
        row.empirical_p = static_cast<double>(pool.out_edges) /
                          (static_cast<double>(pool.vertices) * static_cast<double>(edges_));
        const auto law = theoretical_degree_pmf(row.theoretical_p, edges_, PmfMode::ExactBinomial);
        row.tv_binomial = tv_distance(DiscretePmf::from_counts(pool.degree_counts), law.pmf);
        out.push_back(row);
    }
    return out;
}

std::vector<SliceRow> slice_report(const EdgeList& graph, const StochasticSeed& seed, int ell, int k) {
    SliceAccumulator acc(seed, ell, k, graph.edges.size());
    acc.add(graph);
    return acc.rows();
}

}  // namespace kronlab
