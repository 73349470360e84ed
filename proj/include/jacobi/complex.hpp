#pragma once

#include <cmath>
#include <complex>

#include "jacobi/real.hpp"

namespace jacobi {

// std::complex is only specified for the built-in floating types, so the
// Extended path needs its own. Kept deliberately small.
template <Real R>
struct Complex {
    R re{0};
    R im{0};

    Complex() = default;
    Complex(R real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
    Complex(R real, R imag) : re(std::move(real)), im(std::move(imag)) {}

    template <class T = R>
        requires std::same_as<T, double>
    Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

    Complex& operator+=(const Complex& z) {
        re += z.re;
        im += z.im;
        return *this;
    }
    Complex& operator-=(const Complex& z) {
        re -= z.re;
        im -= z.im;
        return *this;
    }
    Complex& operator*=(const Complex& z) {
        R r = re * z.re - im * z.im;
        im = re * z.im + im * z.re;
        re = std::move(r);
        return *this;
    }
    // Smith's algorithm.
    Complex& operator/=(const Complex& z) {
        using std::abs;
        if (abs(z.re) >= abs(z.im)) {
            const R ratio = z.im / z.re;
            const R denom = z.re + z.im * ratio;
            R r = (re + im * ratio) / denom;
            im = (im - re * ratio) / denom;
            re = std::move(r);
        } else {
            const R ratio = z.re / z.im;
            const R denom = z.re * ratio + z.im;
            R r = (re * ratio + im) / denom;
            im = (im * ratio - re) / denom;
            re = std::move(r);
        }
        return *this;
    }

    Complex operator-() const { return {-re, -im}; }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator+(Complex a, const R& b) { a.re += b; return a; }
    friend Complex operator+(const R& a, Complex b) { b.re += a; return b; }
    friend Complex operator-(Complex a, const R& b) { a.re -= b; return a; }
    friend Complex operator-(const R& a, const Complex& b) { return {a - b.re, -b.im}; }
    friend Complex operator*(Complex a, const R& b) { a.re *= b; a.im *= b; return a; }
    friend Complex operator*(const R& a, Complex b) { b.re *= a; b.im *= a; return b; }
    friend Complex operator/(Complex a, const R& b) { a.re /= b; a.im /= b; return a; }
    friend Complex operator/(const R& a, const Complex& b) { return Complex(a) / b; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

    std::complex<double> to_std() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

template <Real R>
R abs(const Complex<R>& z) {
    using std::abs;
    using std::sqrt;
    const R a = abs(z.re);
    const R b = abs(z.im);
    if (a == 0) return b;
    if (b == 0) return a;
    if (a >= b) {
        const R t = b / a;
        return a * sqrt(R(1) + t * t);
    }
    const R t = a / b;
    return b * sqrt(R(1) + t * t);
}

template <Real R>
R arg(const Complex<R>& z) {
    using std::atan2;
    return atan2(z.im, z.re);
}

template <Real R>
Complex<R> log(const Complex<R>& z) {
    using std::log;
    return {log(abs(z)), arg(z)};
}

template <Real R>
Complex<R> exp(const Complex<R>& z) {
    using std::cos;
    using std::exp;
    using std::sin;
    const R m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

template <Real R>
Complex<R> ldexp(const Complex<R>& z, int e) {
    using std::ldexp;
    return {ldexp(z.re, e), ldexp(z.im, e)};
}

/// Magnitude used for rescaling decisions; avoids a square root.
template <Real R>
R max_abs_component(const Complex<R>& z) {
    using std::abs;
    using std::max;
    return max(abs(z.re), abs(z.im));
}

}  // namespace jacobi
