#ifndef KRONLAB_ERROR_HPP_
#define KRONLAB_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kronlab {

enum class ErrorCode {
    AllZero,
    NegativeEntry,
    InvalidShape,
    NotStochastic,
    DegenerateSeed,
    AsymmetricSeed,
    InvalidArgument,
    MissingSeed3,
    NoiseBoundViolated,
    DegreeSumMismatch,
    IdOutOfRange,
    InsufficientData,
    TooLarge,
    Parse,
    Io,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; the code is stable and the
// message carries the detail (offending index, value, path).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kronlab

#endif  // KRONLAB_ERROR_HPP_
