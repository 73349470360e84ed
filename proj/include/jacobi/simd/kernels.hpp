#pragma once

// Double-precision inner loops used by the spectral kernels. Each kernel has
// a scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// variant is picked once at start-up from CPUID; JACOBI_SIMD=scalar|avx2 in
// the environment overrides the choice.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace jacobi::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Switches every dispatched kernel to `isa`. Throws std::invalid_argument
/// when the CPU lacks it. Intended for tests and benchmarks.
void set_active_isa(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// sum_k weights[k] / (nodes[k] - z)
std::complex<double> resolvent_sum(std::span<const double> nodes, std::span<const double> weights,
                                   std::complex<double> z);

/// sums[j] = sum_k weights[k] * nodes[k]^j for j < sums.size(), with
/// compensated accumulation.
void power_sums(std::span<const double> nodes, std::span<const double> weights, std::span<double> sums);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
std::complex<double> resolvent_sum(const double* nodes, const double* weights, std::size_t n, std::complex<double> z);
void power_sums(const double* nodes, const double* weights, std::size_t n, double* sums, std::size_t count);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define JACOBI_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
std::complex<double> resolvent_sum(const double* nodes, const double* weights, std::size_t n, std::complex<double> z);
void power_sums(const double* nodes, const double* weights, std::size_t n, double* sums, std::size_t count);
}  // namespace avx2
#endif

}  // namespace jacobi::simd
