#pragma once

// Direct problem: spectra of J and J(theta), their pairing, and numerical
// checks of the identities that tie them together (interlacing direction,
// trace shift, determinant ratio, the two forms of the m-ratio).

#include <optional>
#include <vector>

#include "jacobi/complex.hpp"
#include "jacobi/core.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi {

template <Real R>
struct DirectOptions {
    /// Relative tolerance for every identity check in the report.
    R check_tolerance = R(1e-9);
    /// Zero detection; defaults to 1e-10 * max(1, spectral radius).
    std::optional<R> zero_tolerance;
};

template <Real R>
struct DirectDiagnostics {
    R trace_residual{0};                  ///< |sum(mu-lambda) - q1(theta^2-1)| / (1 + |q1| theta^2)
    std::optional<R> determinant_residual;  ///< |prod mu/lambda - theta^2| / theta^2, absent with a zero eigenvalue
    R mgoth_residual{0};                  ///< worst relative gap between product and m-function forms
    R weight_residual{0};                 ///< |sum 1/alpha_n - 1| for J(theta)
    bool shift_consistent = true;
    bool zero_preserved = true;
    R tolerance{0};
    bool pass = true;
};

template <Real R>
struct DirectReport {
    SpectrumPair<R> pair;
    Theta<R> theta;
    std::vector<R> alpha;  ///< normalizing constants of J(theta), by position in pair.mus
    DirectDiagnostics<R> diagnostics;
    bool degenerate = false;  ///< theta == 1: both spectra coincide
};

/// Throws whatever eigen() or pair_spectra() throw; identity failures are
/// reported through diagnostics.pass rather than thrown.
template <Real R>
DirectReport<R> spectra_pair(const JacobiMatrix<R>& matrix, const Theta<R>& theta,
                             const DirectOptions<R>& options = {});

/// d lambda_k / d theta = 2 lambda_k(theta) / (theta alpha_k(theta)), with
/// k a signed index of sigma(J(theta)). Throws IndexNotFound.
template <Real R>
R eigenvalue_derivative(const JacobiMatrix<R>& matrix, const Theta<R>& theta, int index);

template <Real R>
struct TraceShift {
    R lhs;  ///< sum_k (mu_k - lambda_k) over the paired spectra of J(theta1), J(theta2)
    R rhs;  ///< q1 (theta2^2 - theta1^2)
};

/// Requires theta1 <= theta2 (InvalidArgument otherwise).
template <Real R>
TraceShift<R> trace_shift(const JacobiMatrix<R>& matrix, const Theta<R>& theta1, const Theta<R>& theta2);

/// prod_k (zeta - mu_k) / (zeta - lambda_k), summed in log space. Throws
/// PoleProximity near a lambda.
template <Real R>
Complex<R> mgoth_eval(const SpectrumPair<R>& pair, const Complex<R>& zeta);

/// zeta (theta^2 - 1) m(zeta) + theta^2.
template <Real R>
Complex<R> mgoth_via_m(const WeylFunction<R>& weyl, const Theta<R>& theta, const Complex<R>& zeta);

template <Real R>
Complex<R> mgoth_via_m(const JacobiMatrix<R>& matrix, const Theta<R>& theta, const Complex<R>& zeta) {
    return mgoth_via_m(WeylFunction<R>(matrix), theta, zeta);
}

}  // namespace jacobi
