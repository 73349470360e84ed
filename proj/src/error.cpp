#include "jacobi/error.hpp"

namespace jacobi {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidMatrix: return "InvalidMatrix";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DuplicateValues: return "DuplicateValues";
        case ErrorCode::MultipleZeros: return "MultipleZeros";
        case ErrorCode::NotInterlacing: return "NotInterlacing";
        case ErrorCode::InconsistentShift: return "InconsistentShift";
        case ErrorCode::ZeroMismatch: return "ZeroMismatch";
        case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::ZeroMFunction: return "ZeroMFunction";
        case ErrorCode::IndexNotFound: return "IndexNotFound";
        case ErrorCode::ZeroInSpectrum: return "ZeroInSpectrum";
        case ErrorCode::NonPositiveProduct: return "NonPositiveProduct";
        case ErrorCode::HintMissing: return "HintMissing";
        case ErrorCode::HintUnexpected: return "HintUnexpected";
        case ErrorCode::InvalidHint: return "InvalidHint";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::NormalizationFailure: return "NormalizationFailure";
        case ErrorCode::BreakdownAtStep: return "BreakdownAtStep";
        case ErrorCode::ForwardCheckFailure: return "ForwardCheckFailure";
        case ErrorCode::InadmissibleSeed: return "InadmissibleSeed";
        case ErrorCode::DivisionNearZero: return "DivisionNearZero";
        case ErrorCode::PostconditionViolated: return "PostconditionViolated";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<long> step)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), step_(step) {}

}  // namespace jacobi
