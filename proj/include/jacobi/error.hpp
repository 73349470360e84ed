#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jacobi {

enum class ErrorCode {
    InvalidMatrix,
    InvalidArgument,
    DuplicateValues,
    MultipleZeros,
    NotInterlacing,
    InconsistentShift,
    ZeroMismatch,
    CardinalityMismatch,
    ConvergenceFailure,
    DegenerateSpectrum,
    PoleProximity,
    ZeroMFunction,
    IndexNotFound,
    ZeroInSpectrum,
    NonPositiveProduct,
    HintMissing,
    HintUnexpected,
    InvalidHint,
    BoundViolated,
    NonPositiveWeight,
    NormalizationFailure,
    BreakdownAtStep,
    ForwardCheckFailure,
    InadmissibleSeed,
    DivisionNearZero,
    PostconditionViolated,
};

std::string_view to_string(ErrorCode code);

/// Library failure. `code` names the gate that tripped; `step` carries the
/// 1-based step or index for the errors that have one (BreakdownAtStep,
/// InadmissibleSeed, DivisionNearZero, NotInterlacing).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<long> step = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<long> step() const noexcept { return step_; }

private:
    ErrorCode code_;
    std::optional<long> step_;
};

}  // namespace jacobi
