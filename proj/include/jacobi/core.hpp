#pragma once

// Domain types shared across the library: Jacobi matrices, the first-mass
// perturbation J -> J(theta), signed-index spectra and interlacing pairs.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jacobi/error.hpp"
#include "jacobi/real.hpp"

namespace jacobi {

/// Finite symmetric tridiagonal matrix with diagonal q_1..q_N and strictly
/// positive off-diagonal b_1..b_{N-1}. Immutable once constructed.
template <Real R>
class JacobiMatrix {
public:
    /// Throws Error(InvalidMatrix) when the sizes disagree, some b_j <= 0
    /// or an entry is not finite. Order 1 is accepted (lower truncations of
    /// a 2x2 matrix are 1x1).
    JacobiMatrix(std::vector<R> diagonal, std::vector<R> off_diagonal);

    std::size_t size() const noexcept { return q_.size(); }
    std::span<const R> diagonal() const noexcept { return q_; }
    std::span<const R> off_diagonal() const noexcept { return b_; }

    /// Matrix with the first `rows` rows and columns removed (J_rows).
    JacobiMatrix truncated(std::size_t rows = 1) const;

    /// Gershgorin bound on the spectral radius.
    R norm_bound() const;

    friend bool operator==(const JacobiMatrix&, const JacobiMatrix&) = default;

private:
    std::vector<R> q_;
    std::vector<R> b_;
};

/// Perturbation parameter; theta^2 = m_1 / (m_1 + dm) in the chain picture.
template <Real R>
class Theta {
public:
    explicit Theta(R value);

    const R& value() const noexcept { return value_; }
    R squared() const { return value_ * value_; }
    bool is_identity() const { return value_ == R(1); }

private:
    R value_;
};

/// (q_1, b_1) -> (theta^2 q_1, theta b_1); every other entry unchanged.
template <Real R>
JacobiMatrix<R> apply_theta(const JacobiMatrix<R>& matrix, const Theta<R>& theta);

/// Eigenvalues labelled by signed indices: negatives get -n..-1, a zero
/// eigenvalue (if any) gets 0, positives get 1..p. Without a zero the index
/// set jumps from -1 to 1.
template <Real R>
class IndexedSpectrum {
public:
    IndexedSpectrum() = default;

    /// `values` strictly increasing; `zero_position` marks the entry treated
    /// as the zero eigenvalue. Prefer enumerate_spectrum().
    IndexedSpectrum(std::vector<R> values, std::optional<std::size_t> zero_position);

    std::size_t size() const noexcept { return values_.size(); }
    bool has_zero() const noexcept { return has_zero_; }
    std::size_t negative_count() const noexcept { return negative_count_; }
    std::size_t positive_count() const noexcept {
        return values_.size() - negative_count_ - (has_zero_ ? 1 : 0);
    }

    int first_index() const noexcept;
    int last_index() const noexcept;
    bool contains(int index) const noexcept;
    std::size_t position_of(int index) const;  // throws IndexNotFound
    int index_at(std::size_t position) const;

    /// Stored value (for index 0 this is the raw near-zero eigenvalue).
    const R& at(int index) const { return values_[position_of(index)]; }
    /// Value used in formulas: exactly 0 for index 0.
    R exact(int index) const { return index == 0 ? R(0) : at(index); }

    std::span<const R> values() const noexcept { return values_; }
    std::vector<int> indices() const;

private:
    std::vector<R> values_;
    std::size_t negative_count_ = 0;
    bool has_zero_ = false;
};

/// Default zero tolerance: 1e-10 * max(1, spectral radius estimate).
template <Real R>
R default_zero_tolerance(std::span<const R> values);

template <Real R>
IndexedSpectrum<R> enumerate_spectrum(std::span<const R> values, const R& zero_tolerance);

template <Real R>
IndexedSpectrum<R> enumerate_spectrum(std::span<const R> values) {
    return enumerate_spectrum<R>(values, default_zero_tolerance<R>(values));
}

/// Direction of the perturbed spectrum. RightPositive: mu right of lambda on
/// the positive half-line, left of it on the negative one (theta > 1).
/// LeftPositive is the mirror (theta < 1). Degenerate marks identical spectra
/// (theta = 1), which never pass pair_spectra.
enum class Shift { RightPositive, LeftPositive, Degenerate };

std::string_view to_string(Shift shift);
Shift shift_from_string(std::string_view text);

template <Real R>
struct SpectrumPair {
    IndexedSpectrum<R> lambdas;
    IndexedSpectrum<R> mus;
    Shift shift = Shift::Degenerate;
};

/// Outcome of the positional interlacing scan; failure is a value here.
struct InterlacingResult {
    bool ok = false;
    Shift shift = Shift::Degenerate;
    ErrorCode failure = ErrorCode::NotInterlacing;
    std::optional<int> violation_index;
    std::string detail;
};

/// Scans two indexed spectra for the mirrored interlacing pattern. Values
/// closer than `separation` count as coincident.
template <Real R>
InterlacingResult check_interlacing(const IndexedSpectrum<R>& lambdas, const IndexedSpectrum<R>& mus,
                                    const R& separation = R(0));

/// Indexes `mus_raw` over the index set of `lambdas` and classifies the
/// shift. Throws NotInterlacing, InconsistentShift, ZeroMismatch or
/// CardinalityMismatch.
template <Real R>
SpectrumPair<R> pair_spectra(const IndexedSpectrum<R>& lambdas, std::span<const R> mus_raw,
                             const R& zero_tolerance, const R& separation = R(0));

/// Discrete probability measure: nodes strictly increasing, weights > 0.
template <Real R>
class SpectralMeasure {
public:
    /// Throws InvalidArgument if nodes are not strictly increasing or a weight
    /// is not positive, NormalizationFailure if |sum - 1| > tolerance.
    SpectralMeasure(std::vector<R> nodes, std::vector<R> weights, const R& tolerance = R(1e-8));

    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const R> nodes() const noexcept { return nodes_; }
    std::span<const R> weights() const noexcept { return weights_; }

private:
    std::vector<R> nodes_;
    std::vector<R> weights_;
};

}  // namespace jacobi
