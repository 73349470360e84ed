#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "jacobi/simd/kernels.hpp"

namespace jacobi::simd {
namespace {

struct KernelTable {
    Isa isa;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    std::complex<double> (*resolvent_sum)(const double*, const double*, std::size_t, std::complex<double>);
    void (*power_sums)(const double*, const double*, std::size_t, double*, std::size_t);
};

constexpr KernelTable scalar_table{Isa::Scalar, scalar::dot, scalar::axpy, scalar::resolvent_sum,
                                   scalar::power_sums};
#if defined(JACOBI_HAVE_AVX2_KERNELS)
constexpr KernelTable avx2_table{Isa::Avx2, avx2::dot, avx2::axpy, avx2::resolvent_sum, avx2::power_sums};
#endif

const KernelTable* table_for(Isa isa) {
#if defined(JACOBI_HAVE_AVX2_KERNELS)
    if (isa == Isa::Avx2) return &avx2_table;
#endif
    return &scalar_table;
}

const KernelTable* initial_table() {
    if (const char* forced = std::getenv("JACOBI_SIMD")) {
        const std::string name(forced);
        if (name == "scalar") return &scalar_table;
        if (name == "avx2" && isa_available(Isa::Avx2)) return table_for(Isa::Avx2);
    }
    return isa_available(Isa::Avx2) ? table_for(Isa::Avx2) : &scalar_table;
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("simd kernel: operand lengths differ");
}

}  // namespace

std::string_view to_string(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(JACOBI_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return kernels().isa; }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("instruction set not available: " + std::string(to_string(isa)));
    active().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) {
    check_sizes(x.size(), y.size());
    return kernels().dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    check_sizes(x.size(), y.size());
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}

std::complex<double> resolvent_sum(std::span<const double> nodes, std::span<const double> weights,
                                   std::complex<double> z) {
    check_sizes(nodes.size(), weights.size());
    return kernels().resolvent_sum(nodes.data(), weights.data(), nodes.size(), z);
}

void power_sums(std::span<const double> nodes, std::span<const double> weights, std::span<double> sums) {
    check_sizes(nodes.size(), weights.size());
    kernels().power_sums(nodes.data(), weights.data(), nodes.size(), sums.data(), sums.size());
}

}  // namespace jacobi::simd
