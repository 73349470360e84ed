#pragma once

// Gate chain deciding whether two candidate spectra come from some J and
// J(theta): interlacing, the trace series, weight positivity, moment/Hankel
// positivity and the Gram-matrix surrogate for polynomial density. Every gate
// reports; nothing here throws on a rejected candidate.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jacobi/core.hpp"
#include "jacobi/inverse.hpp"

namespace jacobi {

/// Enumerates both lists and scans them; enumeration problems (duplicates,
/// two zeros) come back as failures too.
template <Real R>
InterlacingResult check_interlacing(std::span<const R> lambdas, std::span<const R> mus);

template <Real R>
struct SumDiagnostics {
    R sum{0};                    ///< sum_k (mu_k - lambda_k), compensated
    bool finite = true;
    std::vector<R> partial_sums;  ///< terms taken by increasing |lambda_k|
    R tail_fraction{0};           ///< share of sum |mu_k - lambda_k| in the outer quarter of the terms
};

template <Real R>
SumDiagnostics<R> check_sum(const SpectrumPair<R>& pair);

template <Real R>
struct TauCandidate {
    std::vector<R> nodes;    ///< exact lambda values (0 for index 0)
    std::vector<R> weights;  ///< tau_n, same order
    std::optional<R> theta_squared;
    std::optional<R> zero_product;  ///< prod' mu/lambda, zero case only
    R weight_sum{0};
    bool positive = false;
    std::optional<int> first_nonpositive_index;
    std::string failure;
};

template <Real R>
TauCandidate<R> build_tau(const SpectrumPair<R>& pair, const std::optional<ZeroCaseHint<R>>& hint = {});

template <Real R>
struct HankelReport {
    std::size_t max_order = 0;      ///< largest n with H_n = [s_{i+j}]_{0<=i,j<=n} tested
    bool overflow = false;          ///< some s_j with j <= 2 max_order is not finite in R
    std::size_t largest_safe_order = 0;
    R growth_rate{0};               ///< |s_{2n}|^{1/2n} at the largest safe order
    bool positive_definite = false;
    std::optional<std::size_t> first_failing_order;
    std::vector<int> determinant_signs;   ///< sign of det H_n, n = 0..max_order (0 once a pivot fails)
    std::vector<double> log_pivots;       ///< ln |d_n| of the unpivoted LDL^T
    std::vector<double> log_dprime_ratios;  ///< ln det H_n - ln det [s_{i+j+4}]_{0<=i,j<=n-2}, n >= 2
    double pivot_tolerance_factor = 0;      ///< pivots must exceed this times trace H_n
    std::optional<double> gram_min_eigenvalue;  ///< smallest eigenvalue of H_{max_order}
    bool gram_nonsingular = false;
};

/// Hankel factorizations run in a 300-digit type so the verdict reflects the
/// candidate measure rather than rounding in R.
template <Real R>
HankelReport<R> check_moments_and_hamburger(std::span<const R> nodes, std::span<const R> weights,
                                            std::size_t max_order);

enum class Verdict { Admissible, Rejected };

std::string_view to_string(Verdict verdict);

template <Real R>
struct AdmissibilityReport {
    InterlacingResult condition_a;
    std::optional<SpectrumPair<R>> pair;
    std::optional<SumDiagnostics<R>> condition_b;
    std::optional<TauCandidate<R>> tau;
    std::optional<HankelReport<R>> hankel;  ///< conditions c), d') and the d) surrogate
    Verdict verdict = Verdict::Rejected;
    std::string reason;  ///< gate that rejected; empty when admissible
};

template <Real R>
AdmissibilityReport<R> admissible(std::span<const R> lambdas, std::span<const R> mus,
                                  const std::optional<ZeroCaseHint<R>>& hint = {});

}  // namespace jacobi
