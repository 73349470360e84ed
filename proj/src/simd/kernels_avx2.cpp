#include "jacobi/simd/kernels.hpp"

#if defined(JACOBI_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>
#include <vector>

// Compiled without -mavx2 so no AVX2 code leaks into inline functions shared
// with other translation units; every function here opts in explicitly.
#define JACOBI_AVX2 __attribute__((target("avx2,fma")))

namespace jacobi::simd::avx2 {
namespace {

JACOBI_AVX2 inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

JACOBI_AVX2 inline __m256d vabs(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Scalar Neumaier step, used to fold lane partials and tails.
inline void neumaier(double& sum, double& carry, double term) {
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
        carry += (sum - t) + term;
    } else {
        carry += (term - t) + sum;
    }
    sum = t;
}

}  // namespace

JACOBI_AVX2 double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

JACOBI_AVX2 void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

JACOBI_AVX2 std::complex<double> resolvent_sum(const double* nodes, const double* weights, std::size_t n,
                                               std::complex<double> z) {
    const __m256d x = _mm256_set1_pd(z.real());
    const __m256d y2 = _mm256_set1_pd(z.imag() * z.imag());
    __m256d re = _mm256_setzero_pd();
    __m256d im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(nodes + k), x);
        const __m256d den = _mm256_fmadd_pd(d, d, y2);
        const __m256d scaled = _mm256_div_pd(_mm256_loadu_pd(weights + k), den);
        re = _mm256_fmadd_pd(scaled, d, re);
        im = _mm256_add_pd(im, scaled);
    }
    double re_sum = horizontal_sum(re);
    double im_sum = horizontal_sum(im);
    for (; k < n; ++k) {
        const double d = nodes[k] - z.real();
        const double scaled = weights[k] / (d * d + z.imag() * z.imag());
        re_sum += scaled * d;
        im_sum += scaled;
    }
    return {re_sum, im_sum * z.imag()};
}

JACOBI_AVX2 void power_sums(const double* nodes, const double* weights, std::size_t n, double* sums,
                            std::size_t count) {
    // Lane partials live in plain arrays (4 doubles per power).
    std::vector<double> lane_sum(4 * count, 0.0);
    std::vector<double> lane_carry(4 * count, 0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d node = _mm256_loadu_pd(nodes + k);
        __m256d term = _mm256_loadu_pd(weights + k);
        for (std::size_t j = 0; j < count; ++j) {
            double* sum_ptr = lane_sum.data() + 4 * j;
            double* carry_ptr = lane_carry.data() + 4 * j;
            const __m256d s = _mm256_loadu_pd(sum_ptr);
            const __m256d t = _mm256_add_pd(s, term);
            const __m256d big_sum = _mm256_cmp_pd(vabs(s), vabs(term), _CMP_GE_OQ);
            const __m256d when_sum = _mm256_add_pd(_mm256_sub_pd(s, t), term);
            const __m256d when_term = _mm256_add_pd(_mm256_sub_pd(term, t), s);
            _mm256_storeu_pd(carry_ptr,
                             _mm256_add_pd(_mm256_loadu_pd(carry_ptr), _mm256_blendv_pd(when_term, when_sum, big_sum)));
            _mm256_storeu_pd(sum_ptr, t);
            term = _mm256_mul_pd(term, node);
        }
    }

    std::vector<double> carry(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        sums[j] = 0.0;
        for (std::size_t lane = 0; lane < 4; ++lane) {
            neumaier(sums[j], carry[j], lane_sum[4 * j + lane]);
            carry[j] += lane_carry[4 * j + lane];
        }
    }
    for (; k < n; ++k) {
        double term = weights[k];
        for (std::size_t j = 0; j < count; ++j) {
            neumaier(sums[j], carry[j], term);
            term *= nodes[k];
        }
    }
    for (std::size_t j = 0; j < count; ++j) sums[j] += carry[j];
}

}  // namespace jacobi::simd::avx2

#endif
