#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace jacobi::cli {

enum ExitCode : int { Success = 0, UsageOrIo = 1, GateFailure = 2 };

struct Common {
    std::string precision = "extended";
    std::optional<std::string> tolerance;  // JACOBI_TOLERANCE
};

struct HintFlags {
    std::optional<std::string> q1;
    std::optional<std::string> alpha0;
    std::optional<std::string> theta;
};

struct DirectArgs {
    std::filesystem::path input;
    std::string theta;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> report;
    std::optional<std::filesystem::path> plot;
};

struct InverseArgs {
    std::filesystem::path input;
    HintFlags hint;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> report;
};

struct VerifyArgs {
    std::filesystem::path input;
    HintFlags hint;
};

struct MassesArgs {
    std::filesystem::path input;
    std::optional<std::string> k1;
    std::optional<std::string> m1;
    bool scan = false;
    std::size_t grid = 400;
    std::optional<std::filesystem::path> out;
};

// Each returns an ExitCode; data goes to `out` (unless a file is named),
// diagnostics to `err`.
int run_direct(const Common& common, const DirectArgs& args, std::ostream& out, std::ostream& err);
int run_inverse(const Common& common, const InverseArgs& args, std::ostream& out, std::ostream& err);
int run_verify(const Common& common, const VerifyArgs& args, std::ostream& out, std::ostream& err);
int run_masses(const Common& common, const MassesArgs& args, std::ostream& out, std::ostream& err);

}  // namespace jacobi::cli
