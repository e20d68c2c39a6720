#include "kronlab/threshold.hpp"

#include "kronlab/analysis.hpp"
#include "kronlab/error.hpp"
#include "kronlab/parallel.hpp"
#include "kronlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace kronlab {

namespace {

struct TrialOutcome {
    bool has_isolated = false;
    bool connected = false;
};

std::vector<TrialOutcome> run_bernoulli_trials(const ThresholdConfig& cfg, double p, unsigned threads) {
    if (cfg.n < 2 || cfg.trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "threshold experiments need n >= 2 and trials >= 1");
    }
    std::vector<TrialOutcome> outcomes(cfg.trials);
    parallel_for(cfg.trials, threads, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            const EdgeList g = generate_bernoulli(cfg.n, p, derive_seed(cfg.rng_seed, t));
            const ComponentSummary s = component_summary(g);
            outcomes[t] = {s.isolated_count > 0, s.component_count == 1};
        }
    });
    return outcomes;
}

double chebyshev_no_isolated_bound(std::uint64_t n, double p) {
    const double mean = expected_isolated(n, p);
    if (mean <= 0.0) {
        return 1.0;
    }
    return std::min(1.0, 1.0 / mean + p / (1.0 - p));
}

}  // namespace

std::string_view to_string(ThresholdMode m) noexcept {
    return m == ThresholdMode::Isolated ? "isolated" : "connected";
}

std::string_view to_string(ThresholdSide s) noexcept {
    return s == ThresholdSide::Above ? "above" : "below";
}

ThresholdMode parse_threshold_mode(std::string_view name) {
    if (name == "isolated") {
        return ThresholdMode::Isolated;
    }
    if (name == "connected") {
        return ThresholdMode::Connected;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown threshold mode '" + std::string(name) + "'");
}

ThresholdSide parse_threshold_side(std::string_view name) {
    if (name == "above") {
        return ThresholdSide::Above;
    }
    if (name == "below") {
        return ThresholdSide::Below;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown threshold side '" + std::string(name) + "'");
}

double threshold_link_probability(const ThresholdConfig& cfg) {
    if (cfg.p_override) {
        return std::clamp(*cfg.p_override, 0.0, 1.0);
    }
    const auto n = static_cast<double>(cfg.n);
    const double log_n = std::log(n);
    double p = cfg.side == ThresholdSide::Above ? (log_n + cfg.alpha) / n : (log_n - cfg.alpha) / n;
    if (cfg.side == ThresholdSide::Above && cfg.mode == ThresholdMode::Connected) {
        p = std::max(9.0 * std::numbers::e / n, p);
    }
    return std::clamp(p, 0.0, 1.0);
}

ThresholdReport isolated_threshold_experiment(const ThresholdConfig& cfg, unsigned threads) {
    ThresholdReport report;
    report.p_used = threshold_link_probability(cfg);
    const auto outcomes = run_bernoulli_trials(cfg, report.p_used, threads);
    const auto hits = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.has_isolated; });
    report.fraction_with_property = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    if (report.p_used >= 1.0) {
        report.theoretical_bound = 0.0;
    } else if (cfg.side == ThresholdSide::Above) {
        report.theoretical_bound = std::min(1.0, std::exp(report.p_used) * std::exp(-cfg.alpha));
    } else {
        report.theoretical_bound = chebyshev_no_isolated_bound(cfg.n, report.p_used);
    }
    return report;
}

ThresholdReport connectivity_threshold_experiment(const ThresholdConfig& cfg, unsigned threads) {
    ThresholdReport report;
    report.p_used = threshold_link_probability(cfg);
    const auto outcomes = run_bernoulli_trials(cfg, report.p_used, threads);
    const auto hits = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.connected; });
    report.fraction_with_property = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    if (report.p_used >= 1.0) {
        report.theoretical_bound = 0.0;
    } else if (cfg.side == ThresholdSide::Above) {
        report.theoretical_bound = disconnection_bound(cfg.n, report.p_used);
    } else {
        report.theoretical_bound = chebyshev_no_isolated_bound(cfg.n, report.p_used);
    }
    return report;
}

double disconnection_bound(std::uint64_t n, double p) {
    if (n < 2) {
        return 0.0;
    }
    if (p <= 0.0) {
        return 1.0;
    }
    if (p >= 1.0) {
        return 0.0;
    }
    const auto nd = static_cast<double>(n);
    const double q1 = 1.0 - p;
    const double isolated = nd * std::pow(q1, nd - 1.0);
    const double pairs = nd * (nd - 1.0) / 2.0 * p * std::pow(q1, 2.0 * (nd - 2.0));
    const double np = nd * p;
    const double q = std::numbers::e * np * std::exp(-np / 2.0);
    double tail = 0.0;
    if (n >= 6) {
        if (q >= 1.0) {
            return 1.0;
        }
        double qk = q * q * q;
        for (std::uint64_t k = 3; k <= n / 2; ++k) {
            const double term = qk / (p * static_cast<double>(k * k));
            tail += term;
            if (term < 1e-18 * tail) {
                break;
            }
            qk *= q;
        }
    }
    return std::min(1.0, isolated + pairs + tail);
}

BruteForceStats brute_force_graph_stats(std::uint64_t n, double p) {
    if (n > 5) {
        throw Error(ErrorCode::TooLarge, "exhaustive enumeration is limited to n <= 5");
    }
    if (n < 1 || !(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "need n >= 1 and p in [0, 1]");
    }
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned u = 0; u < n; ++u) {
        for (unsigned v = u + 1; v < n; ++v) {
            pairs.emplace_back(u, v);
        }
    }
    const std::size_t e = pairs.size();
    BruteForceStats out;
    for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
        const int present = __builtin_popcount(mask);
        const double w = std::pow(p, present) * std::pow(1.0 - p, static_cast<double>(e) - present);
        unsigned degree_seen = 0;
        unsigned label[5] = {0, 1, 2, 3, 4};
        for (std::size_t i = 0; i < e; ++i) {
            if ((mask >> i) & 1u) {
                const auto [u, v] = pairs[i];
                degree_seen |= (1u << u) | (1u << v);
                const unsigned from = label[v];
                const unsigned to = label[u];
                for (unsigned x = 0; x < n; ++x) {
                    if (label[x] == from) {
                        label[x] = to;
                    }
                }
            }
        }
        const int isolated = static_cast<int>(n) - __builtin_popcount(degree_seen);
        bool connected = true;
        for (unsigned x = 1; x < n; ++x) {
            connected = connected && label[x] == label[0];
        }
        out.expected_isolated += w * isolated;
        out.connected_probability += connected ? w : 0.0;
    }
    return out;
}

double connectivity_probability(std::uint64_t n, double p) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "need n >= 1");
    }
    std::vector<double> conn(n + 1, 0.0);
    conn[1] = 1.0;
    for (std::uint64_t size = 2; size <= n; ++size) {
        double disconnected = 0.0;
        double binom = 1.0;  // C(size - 1, k - 1)
        for (std::uint64_t k = 1; k < size; ++k) {
            disconnected += binom * conn[k] * std::pow(1.0 - p, static_cast<double>(k * (size - k)));
            binom = binom * static_cast<double>(size - 1 - (k - 1)) / static_cast<double>(k);
        }
        conn[size] = 1.0 - disconnected;
    }
    return conn[n];
}

double identifiability_separation_probe(const GenConfig& a, const GenConfig& b, std::uint64_t trials,
                                        std::uint64_t rng_seed, unsigned threads) {
    if (trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "probe needs trials >= 1");
    }
    auto pooled = [&](GenConfig cfg, std::uint64_t which) {
        std::map<std::uint64_t, std::uint64_t> counts;
        for (std::uint64_t t = 0; t < trials; ++t) {
            cfg.rng_seed = derive_seed(derive_seed(rng_seed, which), t);
            const GenResult r = generate(cfg, threads);
            for (const auto& [deg, count] : degree_histogram(r.graph, Direction::Out, false).counts) {
                counts[deg] += count;
            }
        }
        return DiscretePmf::from_counts(counts);
    };
    return tv_distance(pooled(a, 0), pooled(b, 1));
}

void write_threshold_csv(std::ostream& os, const ThresholdConfig& cfg, const ThresholdReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%.17g,%.17g,%llu,%.17g,%.17g\n", to_string(cfg.mode).data(),
                  to_string(cfg.side).data(), static_cast<unsigned long long>(cfg.n), cfg.alpha, report.p_used,
                  static_cast<unsigned long long>(cfg.trials), report.fraction_with_property,
                  report.theoretical_bound);
    os << "mode,side,n,alpha,p,trials,fraction,theoretical_bound\n" << buf;
}

}  // namespace kronlab
