#pragma once

// Scalar types the library is instantiated for.
//
// `double` is the fast path and the one the SIMD kernels accelerate.
// `Extended` (100 significant decimal digits) is needed whenever first
// eigenvector components get small: for random Jacobi matrices of order 30
// the spectral weights routinely fall to 1e-30, far below what a pair of
// double-precision spectra can resolve.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>

namespace jacobi {

using Extended = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                               boost::multiprecision::et_off>;

template <class R>
concept Real = std::same_as<R, double> || std::same_as<R, Extended>;

template <Real R>
inline R machine_epsilon() {
    return std::numeric_limits<R>::epsilon();
}

template <Real R>
inline bool is_finite(const R& x) {
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(x);
}

template <Real R>
inline double to_double(const R& x) {
    return static_cast<double>(x);
}

/// Parses a decimal or hexadecimal floating literal; the whole string must be
/// consumed. Throws Error(InvalidArgument) otherwise.
template <Real R>
R parse_real(std::string_view text);

/// Shortest text that parses back to exactly `x`. Values exactly
/// representable as a double use the shortest double form, so fixtures such
/// as "-2" or "0.5" are stable across both precisions.
template <Real R>
std::string format_real(const R& x);

std::string_view precision_name(const double*);
std::string_view precision_name(const Extended*);

template <Real R>
inline std::string_view precision_name() {
    return precision_name(static_cast<const R*>(nullptr));
}

/// Neumaier (improved Kahan) summation.
template <class T>
class CompensatedSum {
public:
    void add(const T& x) {
        using std::abs;
        const T t = sum_ + x;
        if (abs(sum_) >= abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    T value() const { return sum_ + carry_; }

private:
    T sum_{0};
    T carry_{0};
};

}  // namespace jacobi
