#include "kronlab/error.hpp"

namespace kronlab {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::DegenerateSeed: return "DegenerateSeed";
    case ErrorCode::AsymmetricSeed: return "AsymmetricSeed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingSeed3: return "MissingSeed3";
    case ErrorCode::NoiseBoundViolated: return "NoiseBoundViolated";
    case ErrorCode::DegreeSumMismatch: return "DegreeSumMismatch";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace kronlab
