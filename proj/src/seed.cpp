#include "kronlab/seed.hpp"

#include "kronlab/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace kronlab {

namespace {

constexpr double kDenominatorFloor = 1e-12;

double checked_denominator(double value, const char* what) {
    if (value <= kDenominatorFloor) {
        throw Error(ErrorCode::DegenerateSeed, std::string("denominator ") + what + " vanishes");
    }
    return value;
}

// Memoized subdivision. Along every path the rescaled rectangle coordinates are
// produced by the same arithmetic from the parent, so each level sees at most
// 16 distinct rectangles and the memo keeps the recursion linear in depth.
class KgdEvaluator {
public:
    explicit KgdEvaluator(const StochasticSeed& seed) : seed_(seed) {}

    double mass(const Rect& r, int depth) {
        if (r.x_hi <= r.x_lo || r.y_hi <= r.y_lo) {
            return 0.0;
        }
        if (r.x_lo <= 0.0 && r.x_hi >= 1.0 && r.y_lo <= 0.0 && r.y_hi >= 1.0) {
            return 1.0;
        }
        const auto key = std::make_tuple(r.x_lo, r.x_hi, r.y_lo, r.y_hi, depth);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }

        const auto rows = static_cast<double>(seed_.rows());
        const auto cols = static_cast<double>(seed_.cols());
        double acc = 0.0;
        for (std::size_t p = 0; p < seed_.rows(); ++p) {
            const double xl = std::max(r.x_lo * rows - static_cast<double>(p), 0.0);
            const double xh = std::min(r.x_hi * rows - static_cast<double>(p), 1.0);
            if (xh <= xl) {
                continue;
            }
            for (std::size_t q = 0; q < seed_.cols(); ++q) {
                const double w = seed_(p, q);
                if (w == 0.0) {
                    continue;
                }
                const double yl = std::max(r.y_lo * cols - static_cast<double>(q), 0.0);
                const double yh = std::min(r.y_hi * cols - static_cast<double>(q), 1.0);
                if (yh <= yl) {
                    continue;
                }
                if (xl <= 0.0 && xh >= 1.0 && yl <= 0.0 && yh >= 1.0) {
                    acc += w;
                } else if (depth <= 1) {
                    acc += w * (xh - xl) * (yh - yl);
                } else {
                    acc += w * mass(Rect{xl, xh, yl, yh}, depth - 1);
                }
            }
        }
        memo_.emplace(key, acc);
        return acc;
    }

private:
    const StochasticSeed& seed_;
    std::map<std::tuple<double, double, double, double, int>, double> memo_;
};

}  // namespace

SeedMatrix::SeedMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0 || entries_.size() != rows_ * cols_) {
        throw Error(ErrorCode::InvalidShape, "seed matrix needs rows, cols >= 1 and rows*cols entries");
    }
}

SeedMatrix::SeedMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorCode::InvalidShape, "ragged seed rows");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (rows_ == 0 || cols_ == 0) {
        throw Error(ErrorCode::InvalidShape, "empty seed matrix");
    }
}

double SeedMatrix::sum() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

SeedMatrix SeedMatrix::transposed() const {
    std::vector<double> out(entries_.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out[c * rows_ + r] = entries_[r * cols_ + c];
        }
    }
    return SeedMatrix(cols_, rows_, std::move(out));
}

StochasticSeed StochasticSeed::from_normalized(SeedMatrix m) {
    for (std::size_t i = 0; i < m.entries().size(); ++i) {
        if (!(m.entries()[i] >= 0.0)) {
            throw Error(ErrorCode::NegativeEntry, "entry " + std::to_string(i) + " is negative");
        }
    }
    if (std::abs(m.sum() - 1.0) > kSeedSumTolerance) {
        throw Error(ErrorCode::NotStochastic, "entries sum to " + std::to_string(m.sum()));
    }
    return StochasticSeed(std::move(m));
}

bool StochasticSeed::is_symmetric(double tol) const noexcept {
    if (rows() != cols()) {
        return false;
    }
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = r + 1; c < cols(); ++c) {
            if (std::abs(m_(r, c) - m_(c, r)) > tol) {
                return false;
            }
        }
    }
    return true;
}

StochasticSeed validate_and_normalize(const SeedMatrix& raw) {
    const auto entries = raw.entries();
    bool any_positive = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i] >= 0.0) || !std::isfinite(entries[i])) {
            throw Error(ErrorCode::NegativeEntry,
                        "entry " + std::to_string(i) + " (row " + std::to_string(i / raw.cols()) + ", col " +
                            std::to_string(i % raw.cols()) + ") is negative or not finite");
        }
        any_positive = any_positive || entries[i] > 0.0;
    }
    if (!any_positive) {
        throw Error(ErrorCode::AllZero, "seed has no positive entry");
    }
    const double total = raw.sum();
    std::vector<double> scaled(entries.begin(), entries.end());
    for (double& e : scaled) {
        e /= total;
    }
    return StochasticSeed::from_normalized(SeedMatrix(raw.rows(), raw.cols(), std::move(scaled)));
}

StochasticSeed graph500_seed() {
    return validate_and_normalize(SeedMatrix{{9.0, 3.0}, {3.0, 1.0}});
}

StochasticSeed sample_3x1_from_2x1(const StochasticSeed& v) {
    const bool column = v.rows() == 2 && v.cols() == 1;
    if (!column && !(v.rows() == 1 && v.cols() == 2)) {
        throw Error(ErrorCode::InvalidShape, "expected a 1x2 or 2x1 seed");
    }
    const double a = v.entries()[0];
    const double b = v.entries()[1];
    if (a <= 0.0 || b <= 0.0) {
        throw Error(ErrorCode::DegenerateSeed, "the measure of a 2x1 seed with a zero entry is a point mass");
    }
    const double denom = checked_denominator(1.0 - a * b, "1 - ab");
    const double first = a * a / denom;
    const double last = b * b / denom;
    std::vector<double> out{first, (a - a * a) / denom, last};
    return StochasticSeed::from_normalized(column ? SeedMatrix(3, 1, std::move(out)) : SeedMatrix(1, 3, std::move(out)));
}

StochasticSeed sample_3x3_from_2x2(const StochasticSeed& t) {
    if (t.rows() != 2 || t.cols() != 2) {
        throw Error(ErrorCode::InvalidShape, "expected a 2x2 seed");
    }
    const double a = t(0, 0);
    const double b = t(0, 1);
    const double c = t(1, 0);
    const double d = t(1, 1);

    const double diag_main = checked_denominator(1.0 - a * d, "1 - ad");
    const double diag_anti = checked_denominator(1.0 - b * c, "1 - bc");
    const double row_ratio = checked_denominator(1.0 - (a + b) * (c + d), "1 - (a+b)(c+d)");
    const double col_ratio = checked_denominator(1.0 - (a + c) * (b + d), "1 - (a+c)(b+d)");

    // Marginal masses of the first and last thirds.
    const double top = (a + b) * (a + b) / row_ratio;
    const double bottom = (c + d) * (c + d) / row_ratio;
    const double left = (a + c) * (a + c) / col_ratio;
    const double right = (b + d) * (b + d) / col_ratio;

    const double A = (a * a + a * b * left + a * c * top) / diag_main;
    const double C = (b * b + a * b * right + b * d * top) / diag_anti;
    const double G = (c * c + c * d * left + a * c * bottom) / diag_anti;
    const double I = (d * d + c * d * right + b * d * bottom) / diag_main;

    const double B = top - (A + C);
    const double H = bottom - (G + I);
    const double D = left - (A + G);
    const double F = right - (C + I);
    const double E = 1.0 - (A + B + C + D + F + G + H + I);

    return StochasticSeed::from_normalized(SeedMatrix(3, 3, {A, B, C, D, E, F, G, H, I}));
}

bool Rect::valid() const noexcept {
    return 0.0 <= x_lo && x_lo <= x_hi && x_hi <= 1.0 && 0.0 <= y_lo && y_lo <= y_hi && y_hi <= 1.0;
}

double kgd_rectangle_mass(const StochasticSeed& s, const Rect& r, int depth) {
    if (depth < 1) {
        throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
    }
    if (!r.valid()) {
        throw Error(ErrorCode::InvalidArgument, "rectangle must lie in the unit square");
    }
    KgdEvaluator eval(s);
    return std::clamp(eval.mass(r, depth), 0.0, 1.0);
}

StochasticSeed sample_mxn(const StochasticSeed& s, std::size_t out_rows, std::size_t out_cols, int depth) {
    if (out_rows == 0 || out_cols == 0) {
        throw Error(ErrorCode::InvalidShape, "output shape must be at least 1x1");
    }
    if (depth < 1) {
        throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
    }
    KgdEvaluator eval(s);
    const auto fr = static_cast<double>(out_rows);
    const auto fc = static_cast<double>(out_cols);
    std::vector<double> out(out_rows * out_cols);
    for (std::size_t i = 0; i < out_rows; ++i) {
        for (std::size_t j = 0; j < out_cols; ++j) {
            const Rect cell{static_cast<double>(i) / fr, static_cast<double>(i + 1) / fr,
                            static_cast<double>(j) / fc, static_cast<double>(j + 1) / fc};
            out[i * out_cols + j] = std::clamp(eval.mass(cell, depth), 0.0, 1.0);
        }
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& e : out) {
        e /= total;
    }
    return StochasticSeed::from_normalized(SeedMatrix(out_rows, out_cols, std::move(out)));
}

SkgParams skg_params(const StochasticSeed& t, int ell, std::uint64_t edges) {
    if (t.rows() != 2 || t.cols() != 2) {
        throw Error(ErrorCode::InvalidShape, "slice parameters need a 2x2 seed");
    }
    if (std::abs(t(0, 1) - t(1, 0)) > kSeedSumTolerance) {
        throw Error(ErrorCode::AsymmetricSeed, "t2 != t3");
    }
    if (ell < 1 || edges < 1) {
        throw Error(ErrorCode::InvalidArgument, "ell and m must be >= 1");
    }
    SkgParams p;
    p.ell = ell;
    p.edges = edges;
    p.sigma = t(0, 0) + t(0, 1) - 0.5;
    if (std::abs(p.sigma) >= 0.5) {
        throw Error(ErrorCode::DegenerateSeed, "a row of the seed carries all the mass");
    }
    p.tau = (0.5 + p.sigma) / (0.5 - p.sigma);
    const double m = static_cast<double>(edges);
    p.delta = m / std::pow(2.0, ell);
    p.delta_ternary = m / std::pow(3.0, ell);
    const double s2 = p.sigma * p.sigma;
    p.lambda_small = p.delta * std::pow(1.0 - 4.0 * s2, 0.5 * ell);
    const double one_minus = 1.0 - 2.0 * p.sigma;
    p.lambda_big = p.delta_ternary * std::pow(3.0 * one_minus * one_minus / (3.0 + 4.0 * s2), ell);
    return p;
}

SeedMatrix parse_seed_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> entries;
    std::size_t cols = 0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string tok;
        std::size_t count = 0;
        while (ls >> tok) {
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw Error(ErrorCode::Parse, "bad seed entry '" + tok + "'");
            }
            entries.push_back(value);
            ++count;
        }
        if (count == 0) {
            continue;
        }
        if (rows > 0 && count != cols) {
            throw Error(ErrorCode::InvalidShape, "seed row " + std::to_string(rows) + " has " +
                                                     std::to_string(count) + " entries, expected " +
                                                     std::to_string(cols));
        }
        cols = count;
        ++rows;
    }
    if (rows == 0) {
        throw Error(ErrorCode::Parse, "seed text has no rows");
    }
    return SeedMatrix(rows, cols, std::move(entries));
}

SeedMatrix read_seed_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open seed file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_seed_text(buf.str());
}

void write_seed(std::ostream& os, const SeedMatrix& m) {
    char buf[32];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            os << (c == 0 ? "" : " ") << buf;
        }
        os << '\n';
    }
}

void write_seed_file(const std::string& path, const SeedMatrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write seed file " + path);
    }
    write_seed(out, m);
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for " + path);
    }
}

}  // namespace kronlab
