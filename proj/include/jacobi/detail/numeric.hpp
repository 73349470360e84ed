#pragma once

// Precision-generic numeric helpers. The double overloads route through the
// SIMD kernels; Extended uses the plain loops.

#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

#include "jacobi/complex.hpp"
#include "jacobi/real.hpp"
#include "jacobi/simd/kernels.hpp"

namespace jacobi::detail {

template <Real R>
R hypot(const R& a, const R& b) {
    using std::abs;
    using std::sqrt;
    const R x = abs(a);
    const R y = abs(b);
    if (x == 0) return y;
    if (y == 0) return x;
    if (x >= y) {
        const R t = y / x;
        return x * sqrt(R(1) + t * t);
    }
    const R t = x / y;
    return y * sqrt(R(1) + t * t);
}

template <Real R>
R copysign(const R& magnitude, const R& sign) {
    using std::abs;
    return sign >= 0 ? abs(magnitude) : -abs(magnitude);
}

/// e such that |x| = f * 2^e with f in [0.5, 1); 0 for x == 0.
template <Real R>
long binary_exponent(const R& x) {
    using std::frexp;
    if (x == 0) return 0;
    int e = 0;
    (void)frexp(x, &e);
    return e;
}

/// Running product kept as mantissa * 2^exponent so long products of
/// ratios neither overflow nor underflow.
template <Real R>
class ScaledProduct {
public:
    void multiply(const R& factor) {
        mantissa_ *= factor;
        if (++pending_ == 16) renormalize();
    }

    bool is_zero() const { return mantissa_ == 0; }
    int sign() const { return mantissa_ > 0 ? 1 : (mantissa_ < 0 ? -1 : 0); }

    /// log|product|; -inf for a zero product.
    R log_abs() {
        using std::abs;
        using std::log;
        renormalize();
        return log(abs(mantissa_)) + R(exponent_) * log(R(2));
    }

    R value() {
        using std::ldexp;
        renormalize();
        return ldexp(mantissa_, static_cast<int>(exponent_));
    }

private:
    void renormalize() {
        using std::ldexp;
        pending_ = 0;
        if (mantissa_ == 0) return;
        const long e = binary_exponent(mantissa_);
        mantissa_ = ldexp(mantissa_, static_cast<int>(-e));
        exponent_ += e;
    }

    R mantissa_{1};
    long exponent_ = 0;
    int pending_ = 0;
};

template <Real R>
R dot(std::span<const R> x, std::span<const R> y) {
    if constexpr (std::is_same_v<R, double>) {
        return simd::dot(x, y);
    } else {
        R sum(0);
        for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
        return sum;
    }
}

template <Real R>
void axpy(const R& alpha, std::span<const R> x, std::span<R> y) {
    if constexpr (std::is_same_v<R, double>) {
        simd::axpy(alpha, x, y);
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
    }
}

/// sums[j] = sum_k weights[k] nodes[k]^j, compensated.
template <Real R>
void power_sums(std::span<const R> nodes, std::span<const R> weights, std::span<R> sums) {
    if constexpr (std::is_same_v<R, double>) {
        simd::power_sums(nodes, weights, sums);
    } else {
        std::vector<CompensatedSum<R>> acc(sums.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            R term = weights[k];
            for (std::size_t j = 0; j < sums.size(); ++j) {
                acc[j].add(term);
                term *= nodes[k];
            }
        }
        for (std::size_t j = 0; j < sums.size(); ++j) sums[j] = acc[j].value();
    }
}

/// sum_k weights[k] / (nodes[k] - z)
template <Real R>
Complex<R> resolvent_sum(std::span<const R> nodes, std::span<const R> weights, const Complex<R>& z) {
    if constexpr (std::is_same_v<R, double>) {
        return Complex<double>(simd::resolvent_sum(nodes, weights, z.to_std()));
    } else {
        CompensatedSum<R> re;
        CompensatedSum<R> im;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const R d = nodes[k] - z.re;
            const R scaled = weights[k] / (d * d + z.im * z.im);
            re.add(scaled * d);
            im.add(scaled * z.im);
        }
        return {re.value(), im.value()};
    }
}

}  // namespace jacobi::detail
