#include <cmath>
#include <vector>

#include "jacobi/simd/kernels.hpp"

namespace jacobi::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

std::complex<double> resolvent_sum(const double* nodes, const double* weights, std::size_t n,
                                   std::complex<double> z) {
    const double x = z.real();
    const double y = z.imag();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = nodes[k] - x;
        const double scaled = weights[k] / (d * d + y * y);
        re += scaled * d;
        im += scaled;
    }
    return {re, im * y};
}

void power_sums(const double* nodes, const double* weights, std::size_t n, double* sums, std::size_t count) {
    std::vector<double> carry(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) sums[j] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double term = weights[k];
        for (std::size_t j = 0; j < count; ++j) {
            const double t = sums[j] + term;
            if (std::fabs(sums[j]) >= std::fabs(term)) {
                carry[j] += (sums[j] - t) + term;
            } else {
                carry[j] += (term - t) + sums[j];
            }
            sums[j] = t;
            term *= nodes[k];
        }
    }
    for (std::size_t j = 0; j < count; ++j) sums[j] += carry[j];
}

}  // namespace jacobi::simd::scalar
