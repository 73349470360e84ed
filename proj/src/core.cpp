#include "jacobi/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace jacobi {
namespace {

template <Real R>
std::string show(const R& x) {
    return format_real(x);
}

}  // namespace

// ---------------------------------------------------------------- JacobiMatrix

template <Real R>
JacobiMatrix<R>::JacobiMatrix(std::vector<R> diagonal, std::vector<R> off_diagonal)
    : q_(std::move(diagonal)), b_(std::move(off_diagonal)) {
    if (q_.empty()) throw Error(ErrorCode::InvalidMatrix, "empty diagonal");
    if (b_.size() + 1 != q_.size()) {
        throw Error(ErrorCode::InvalidMatrix, "off-diagonal must have " + std::to_string(q_.size() - 1) +
                                                  " entries, got " + std::to_string(b_.size()));
    }
    for (std::size_t j = 0; j < q_.size(); ++j) {
        if (!is_finite(q_[j])) {
            throw Error(ErrorCode::InvalidMatrix, "q[" + std::to_string(j) + "] is not finite");
        }
    }
    for (std::size_t j = 0; j < b_.size(); ++j) {
        if (!is_finite(b_[j]) || !(b_[j] > 0)) {
            throw Error(ErrorCode::InvalidMatrix,
                        "b[" + std::to_string(j) + "] must be finite and > 0, got " + show(b_[j]));
        }
    }
}

template <Real R>
JacobiMatrix<R> JacobiMatrix<R>::truncated(std::size_t rows) const {
    if (rows >= q_.size()) {
        throw Error(ErrorCode::InvalidArgument, "cannot drop " + std::to_string(rows) + " rows of a matrix of order " +
                                                    std::to_string(q_.size()));
    }
    return JacobiMatrix(std::vector<R>(q_.begin() + static_cast<std::ptrdiff_t>(rows), q_.end()),
                        std::vector<R>(b_.begin() + static_cast<std::ptrdiff_t>(rows), b_.end()));
}

template <Real R>
R JacobiMatrix<R>::norm_bound() const {
    using std::abs;
    R bound(0);
    for (std::size_t j = 0; j < q_.size(); ++j) {
        R row = abs(q_[j]);
        if (j > 0) row += b_[j - 1];
        if (j < b_.size()) row += b_[j];
        if (row > bound) bound = row;
    }
    return bound;
}

template <Real R>
Theta<R>::Theta(R value) : value_(std::move(value)) {
    if (!is_finite(value_) || !(value_ > 0)) {
        throw Error(ErrorCode::InvalidArgument, "theta must be finite and > 0, got " + show(value_));
    }
}

template <Real R>
JacobiMatrix<R> apply_theta(const JacobiMatrix<R>& matrix, const Theta<R>& theta) {
    std::vector<R> q(matrix.diagonal().begin(), matrix.diagonal().end());
    std::vector<R> b(matrix.off_diagonal().begin(), matrix.off_diagonal().end());
    q.front() *= theta.squared();
    if (!b.empty()) b.front() *= theta.value();
    return JacobiMatrix<R>(std::move(q), std::move(b));
}

// ------------------------------------------------------------- IndexedSpectrum

template <Real R>
IndexedSpectrum<R>::IndexedSpectrum(std::vector<R> values, std::optional<std::size_t> zero_position)
    : values_(std::move(values)), has_zero_(zero_position.has_value()) {
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i - 1] < values_[i])) {
            throw Error(ErrorCode::DuplicateValues, "values not strictly increasing at position " + std::to_string(i));
        }
    }
    if (zero_position) {
        if (*zero_position >= values_.size()) throw Error(ErrorCode::InvalidArgument, "zero position out of range");
        negative_count_ = *zero_position;
    } else {
        negative_count_ = static_cast<std::size_t>(
            std::count_if(values_.begin(), values_.end(), [](const R& v) { return v < 0; }));
        if (negative_count_ < values_.size() && values_[negative_count_] == 0) {
            throw Error(ErrorCode::InvalidArgument, "exact zero present but not flagged as index 0");
        }
    }
}

template <Real R>
int IndexedSpectrum<R>::first_index() const noexcept {
    if (negative_count_ > 0) return -static_cast<int>(negative_count_);
    return has_zero_ ? 0 : 1;
}

template <Real R>
int IndexedSpectrum<R>::last_index() const noexcept {
    if (positive_count() > 0) return static_cast<int>(positive_count());
    return has_zero_ ? 0 : -1;
}

template <Real R>
bool IndexedSpectrum<R>::contains(int index) const noexcept {
    if (index < 0) return static_cast<std::size_t>(-index) <= negative_count_;
    if (index == 0) return has_zero_;
    return static_cast<std::size_t>(index) <= positive_count();
}

template <Real R>
std::size_t IndexedSpectrum<R>::position_of(int index) const {
    if (!contains(index)) throw Error(ErrorCode::IndexNotFound, "index " + std::to_string(index) + " not in spectrum");
    const auto n_neg = static_cast<long>(negative_count_);
    if (index < 0) return static_cast<std::size_t>(n_neg + index);
    if (index == 0) return negative_count_;
    return static_cast<std::size_t>(n_neg + index - (has_zero_ ? 0 : 1));
}

template <Real R>
int IndexedSpectrum<R>::index_at(std::size_t position) const {
    const auto p = static_cast<int>(position);
    const auto n_neg = static_cast<int>(negative_count_);
    if (p < n_neg) return p - n_neg;
    if (has_zero_) return p - n_neg;
    return p - n_neg + 1;
}

template <Real R>
std::vector<int> IndexedSpectrum<R>::indices() const {
    std::vector<int> out(values_.size());
    for (std::size_t p = 0; p < values_.size(); ++p) out[p] = index_at(p);
    return out;
}

template <Real R>
R default_zero_tolerance(std::span<const R> values) {
    using std::abs;
    R radius(1);
    for (const R& v : values) {
        if (abs(v) > radius) radius = abs(v);
    }
    return R(1e-10) * radius;
}

template <Real R>
IndexedSpectrum<R> enumerate_spectrum(std::span<const R> values, const R& zero_tolerance) {
    using std::abs;
    std::optional<std::size_t> zero;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && !(values[i - 1] < values[i])) {
            throw Error(ErrorCode::DuplicateValues, "values not strictly increasing at position " + std::to_string(i));
        }
        if (abs(values[i]) <= zero_tolerance) {
            if (zero) {
                throw Error(ErrorCode::MultipleZeros, "values at positions " + std::to_string(*zero) + " and " +
                                                          std::to_string(i) + " both within the zero tolerance");
            }
            zero = i;
        }
    }
    return IndexedSpectrum<R>(std::vector<R>(values.begin(), values.end()), zero);
}

// ------------------------------------------------------------------ pairing

std::string_view to_string(Shift shift) {
    switch (shift) {
        case Shift::RightPositive: return "right_pos";
        case Shift::LeftPositive: return "left_pos";
        case Shift::Degenerate: return "degenerate";
    }
    return "degenerate";
}

Shift shift_from_string(std::string_view text) {
    if (text == "right_pos") return Shift::RightPositive;
    if (text == "left_pos") return Shift::LeftPositive;
    if (text == "degenerate") return Shift::Degenerate;
    throw Error(ErrorCode::InvalidArgument, "unknown shift '" + std::string(text) + "'");
}

namespace {

template <Real R>
InterlacingResult violation(ErrorCode code, std::optional<int> index, std::string detail) {
    InterlacingResult result;
    result.ok = false;
    result.failure = code;
    result.violation_index = index;
    result.detail = std::move(detail);
    return result;
}

// Checks lo_k < hi_k < lo_{k+1} for consecutive indices k of one half-line,
// where (lo, hi) is (lambda, mu) or (mu, lambda).
template <Real R>
std::optional<InterlacingResult> scan_region(const IndexedSpectrum<R>& lo, const IndexedSpectrum<R>& hi,
                                             const char* lo_name, const char* hi_name, int first, int last,
                                             const R& separation) {
    for (int k = first; k <= last; ++k) {
        if (k == 0) continue;
        const R& lo_k = lo.at(k);
        const R& hi_k = hi.at(k);
        int next = k + 1;
        if (next == 0 && !lo.contains(0)) next = 1;
        const bool has_next = next <= last;
        const bool below = lo_k + separation < hi_k;
        const bool above = !has_next || hi_k + separation < lo.at(next);
        if (!below || !above) {
            std::ostringstream os;
            os << lo_name << "_" << k << "=" << show(lo_k) << ", " << hi_name << "_" << k << "=" << show(hi_k);
            if (has_next) os << ", " << lo_name << "_" << next << "=" << show(lo.at(next));
            os << " break " << lo_name << "_k < " << hi_name << "_k < " << lo_name << "_{k+1}";
            return violation<R>(ErrorCode::NotInterlacing, k, os.str());
        }
    }
    return std::nullopt;
}

}  // namespace

template <Real R>
InterlacingResult check_interlacing(const IndexedSpectrum<R>& lambdas, const IndexedSpectrum<R>& mus,
                                    const R& separation) {
    if (lambdas.size() != mus.size()) {
        return violation<R>(ErrorCode::CardinalityMismatch, std::nullopt,
                            "spectra have " + std::to_string(lambdas.size()) + " and " + std::to_string(mus.size()) +
                                " values");
    }
    if (lambdas.has_zero() != mus.has_zero()) {
        return violation<R>(ErrorCode::ZeroMismatch, 0, "zero eigenvalue present in exactly one spectrum");
    }
    // theta = 1: the two spectra coincide and no shift direction exists.
    bool identical = true;
    for (std::size_t i = 0; i < lambdas.size() && identical; ++i) {
        using std::abs;
        identical = abs(lambdas.values()[i] - mus.values()[i]) <= separation;
    }
    if (identical) {
        InterlacingResult same;
        same.ok = true;
        same.shift = Shift::Degenerate;
        return same;
    }
    if (lambdas.negative_count() != mus.negative_count()) {
        return violation<R>(ErrorCode::NotInterlacing, std::nullopt,
                            "negative half-line holds " + std::to_string(lambdas.negative_count()) + " lambdas but " +
                                std::to_string(mus.negative_count()) + " mus");
    }

    std::optional<Shift> positive_shift;
    std::optional<Shift> negative_shift;

    const int n_pos = static_cast<int>(lambdas.positive_count());
    if (n_pos > 0) {
        const bool mu_right = lambdas.at(1) < mus.at(1);
        auto failure = mu_right ? scan_region(lambdas, mus, "lambda", "mu", 1, n_pos, separation)
                                : scan_region(mus, lambdas, "mu", "lambda", 1, n_pos, separation);
        if (failure) return *failure;
        positive_shift = mu_right ? Shift::RightPositive : Shift::LeftPositive;
    }

    const int n_neg = static_cast<int>(lambdas.negative_count());
    if (n_neg > 0) {
        const bool mu_left = mus.at(-n_neg) < lambdas.at(-n_neg);
        auto failure = mu_left ? scan_region(mus, lambdas, "mu", "lambda", -n_neg, -1, separation)
                               : scan_region(lambdas, mus, "lambda", "mu", -n_neg, -1, separation);
        if (failure) return *failure;
        negative_shift = mu_left ? Shift::RightPositive : Shift::LeftPositive;
    }

    if (positive_shift && negative_shift && *positive_shift != *negative_shift) {
        return violation<R>(ErrorCode::InconsistentShift, std::nullopt,
                            std::string("mu is shifted ") +
                                (*positive_shift == Shift::RightPositive ? "right" : "left") +
                                " on the positive half-line and " +
                                (*negative_shift == Shift::RightPositive ? "left" : "right") +
                                " on the negative one; the directions must be mirrored");
    }

    InterlacingResult result;
    result.ok = true;
    result.shift = positive_shift.value_or(negative_shift.value_or(Shift::Degenerate));
    return result;
}

template <Real R>
SpectrumPair<R> pair_spectra(const IndexedSpectrum<R>& lambdas, std::span<const R> mus_raw, const R& zero_tolerance,
                             const R& separation) {
    if (mus_raw.size() != lambdas.size()) {
        throw Error(ErrorCode::CardinalityMismatch, "spectra have " + std::to_string(lambdas.size()) + " and " +
                                                        std::to_string(mus_raw.size()) + " values");
    }
    SpectrumPair<R> pair{lambdas, enumerate_spectrum<R>(mus_raw, zero_tolerance), Shift::Degenerate};
    const InterlacingResult check = check_interlacing(pair.lambdas, pair.mus, separation);
    if (!check.ok) {
        std::optional<long> step;
        if (check.violation_index) step = *check.violation_index;
        throw Error(check.failure, check.detail, step);
    }
    pair.shift = check.shift;
    return pair;
}

// ------------------------------------------------------------ SpectralMeasure

template <Real R>
SpectralMeasure<R>::SpectralMeasure(std::vector<R> nodes, std::vector<R> weights, const R& tolerance)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
    using std::abs;
    if (nodes_.empty() || nodes_.size() != weights_.size()) {
        throw Error(ErrorCode::InvalidArgument, "measure needs matching, non-empty node and weight lists");
    }
    CompensatedSum<R> total;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!is_finite(nodes_[i]) || (i > 0 && !(nodes_[i - 1] < nodes_[i]))) {
            throw Error(ErrorCode::InvalidArgument, "nodes must be finite and strictly increasing (position " +
                                                        std::to_string(i) + ")");
        }
        if (!is_finite(weights_[i]) || !(weights_[i] > 0)) {
            throw Error(ErrorCode::NonPositiveWeight, "weight " + std::to_string(i) + " = " + show(weights_[i]));
        }
        total.add(weights_[i]);
    }
    if (abs(total.value() - R(1)) > tolerance) {
        throw Error(ErrorCode::NormalizationFailure, "weights sum to " + show(total.value()));
    }
}

#define JACOBI_INSTANTIATE(R)                                                                                  \
    template class JacobiMatrix<R>;                                                                            \
    template class Theta<R>;                                                                                   \
    template class IndexedSpectrum<R>;                                                                         \
    template class SpectralMeasure<R>;                                                                         \
    template JacobiMatrix<R> apply_theta(const JacobiMatrix<R>&, const Theta<R>&);                             \
    template R default_zero_tolerance(std::span<const R>);                                                     \
    template IndexedSpectrum<R> enumerate_spectrum(std::span<const R>, const R&);                              \
    template InterlacingResult check_interlacing(const IndexedSpectrum<R>&, const IndexedSpectrum<R>&, const R&); \
    template SpectrumPair<R> pair_spectra(const IndexedSpectrum<R>&, std::span<const R>, const R&, const R&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
