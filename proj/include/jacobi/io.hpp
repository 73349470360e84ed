#pragma once

// Versioned JSON container for the four kinds of problem data. Numbers are
// written as shortest round-trip decimal strings; plain JSON numbers are
// accepted on input.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jacobi/core.hpp"
#include "jacobi/inverse.hpp"
#include "jacobi/mass_spring.hpp"

namespace jacobi {

enum class ProblemKind { Matrix, Chain, SpectraPair, Measure };

std::string_view to_string(ProblemKind kind);

/// Two spectra as stored on disk; pairing happens when the file is used.
template <Real R>
struct SpectraPairRecord {
    std::vector<R> lambdas;
    std::vector<R> mus;
    std::optional<Shift> shift;
    std::optional<ZeroCaseHint<R>> hint;
};

/// Alternatives in ProblemKind order.
template <Real R>
using Payload = std::variant<JacobiMatrix<R>, MassSpringChain<R>, SpectraPairRecord<R>, SpectralMeasure<R>>;

template <Real R>
struct ProblemFile {
    Payload<R> payload;
    std::map<std::string, std::string> metadata;
    std::string schema_version = "1";

    ProblemKind kind() const { return static_cast<ProblemKind>(payload.index()); }
};

/// Malformed, unreadable or invalid input. The message names the source and
/// the offending field or line/column.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <Real R>
ProblemFile<R> parse_problem(std::string_view text, const std::string& source = "<input>");

template <Real R>
ProblemFile<R> load_problem(const std::filesystem::path& path);

/// Indented JSON with a trailing newline.
template <Real R>
std::string serialize_problem(const ProblemFile<R>& file);

template <Real R>
void save_problem(const ProblemFile<R>& file, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace jacobi
