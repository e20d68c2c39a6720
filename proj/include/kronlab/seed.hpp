#ifndef KRONLAB_SEED_HPP_
#define KRONLAB_SEED_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kronlab {

inline constexpr double kSeedSumTolerance = 1e-12;
inline constexpr int kDefaultKgdDepth = 40;

// Dense nonnegative rows x cols matrix, row-major.
class SeedMatrix {
public:
    SeedMatrix() = default;
    SeedMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    SeedMatrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    [[nodiscard]] double sum() const noexcept;
    [[nodiscard]] SeedMatrix transposed() const;

    friend bool operator==(const SeedMatrix&, const SeedMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

// A seed matrix whose entries sum to one. Only constructible through
// validate_and_normalize() or from_normalized(), so the invariant holds for
// every live instance.
class StochasticSeed {
public:
    // Throws NotStochastic if the sum is off by more than kSeedSumTolerance.
    static StochasticSeed from_normalized(SeedMatrix m);

    [[nodiscard]] const SeedMatrix& matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t rows() const noexcept { return m_.rows(); }
    [[nodiscard]] std::size_t cols() const noexcept { return m_.cols(); }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    [[nodiscard]] std::span<const double> entries() const noexcept { return m_.entries(); }
    [[nodiscard]] bool is_symmetric(double tol = kSeedSumTolerance) const noexcept;

    friend bool operator==(const StochasticSeed&, const StochasticSeed&) = default;

private:
    explicit StochasticSeed(SeedMatrix m) : m_(std::move(m)) {}
    SeedMatrix m_;
};

// Scale to unit mass. Throws NegativeEntry (with index) or AllZero.
StochasticSeed validate_and_normalize(const SeedMatrix& raw);

// The Graph500 initiator (1/16)[[9,3],[3,1]].
StochasticSeed graph500_seed();

// Degree-2 closed form: [a, b] -> [a^2, a - a^2, b^2] / (1 - ab). Keeps the
// orientation of the input (1x2 -> 1x3, 2x1 -> 3x1).
StochasticSeed sample_3x1_from_2x1(const StochasticSeed& v);

// Degree-4 closed form for the 3x3 seed induced by the limit measure of a
// 2x2 seed. Entries are the masses of the nine thirds of the unit square.
StochasticSeed sample_3x3_from_2x2(const StochasticSeed& t);

// Axis-aligned rectangle in the unit square. x runs over rows, y over columns.
struct Rect {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;

    [[nodiscard]] bool valid() const noexcept;
};

// Mass of r under the self-similar measure of s, subdividing up to `depth`
// levels. Cells fully inside r contribute their mass, disjoint cells nothing;
// at the cutoff a partial cell contributes mass times covered area fraction.
double kgd_rectangle_mass(const StochasticSeed& s, const Rect& r, int depth = kDefaultKgdDepth);

// Grid-sample an out_rows x out_cols seed from the limit measure of s.
StochasticSeed sample_mxn(const StochasticSeed& s, std::size_t out_rows, std::size_t out_cols,
                          int depth = kDefaultKgdDepth);

struct SkgParams {
    double sigma = 0.0;          // t1 + t2 - 1/2
    double tau = 1.0;            // (1/2 + sigma) / (1/2 - sigma)
    double delta = 0.0;          // m / 2^ell
    double delta_ternary = 0.0;  // m / 3^ell
    double lambda_small = 0.0;   // delta * (1 - 4 sigma^2)^(ell/2)
    double lambda_big = 0.0;     // delta_ternary * (3 (1 - 2 sigma)^2 / (3 + 4 sigma^2))^ell
    int ell = 0;
    std::uint64_t edges = 0;
};

// Derived scalars of a symmetric 2x2 seed. Throws AsymmetricSeed when
// |t2 - t3| > 1e-12 and DegenerateSeed when |sigma| = 1/2.
SkgParams skg_params(const StochasticSeed& t, int ell, std::uint64_t edges);

// Seed text format: one row per line, whitespace separated, '#' comments.
SeedMatrix parse_seed_text(const std::string& text);
SeedMatrix read_seed_file(const std::string& path);
void write_seed(std::ostream& os, const SeedMatrix& m);
void write_seed_file(const std::string& path, const SeedMatrix& m);

}  // namespace kronlab

#endif  // KRONLAB_SEED_HPP_
