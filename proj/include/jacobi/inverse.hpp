#pragma once

// Inverse problem: recover theta, the spectral weights and the Jacobi matrix
// from the spectra of J and J(theta).

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "jacobi/core.hpp"

namespace jacobi {

/// Extra datum needed when 0 is an eigenvalue of both matrices.
template <Real R>
struct Q1Hint {
    R q1;
};
template <Real R>
struct Alpha0Hint {
    R alpha0;  ///< normalizing constant of the zero eigenvalue of J
};
template <Real R>
struct ThetaHint {
    R theta;
};
template <Real R>
using ZeroCaseHint = std::variant<Q1Hint<R>, Alpha0Hint<R>, ThetaHint<R>>;

template <Real R>
struct InverseInput {
    SpectrumPair<R> pair;
    std::optional<ZeroCaseHint<R>> hint;
};

template <Real R>
struct InverseOptions {
    /// Eigenvalues of the rebuilt J, J(theta) must match the input to this
    /// tolerance times max(1, spectral radius).
    R forward_tolerance = R(1e-8);
    /// Allowed |sum tau - 1| before NormalizationFailure.
    R normalization_tolerance = R(1e-8);
};

template <Real R>
struct InverseResiduals {
    R lambda_residual{0};  ///< max |eig(J) - lambda|, scaled
    R mu_residual{0};      ///< max |eig(J(theta)) - mu|, scaled
    R q1_moment_gap{0};    ///< |q1 - s1| / max(1, |q1|)
    R b1_moment_gap{0};    ///< |b1^2 - (s2 - s1^2)| / max(1, b1^2)
    R weight_sum_error{0};
    R theta_condition{0};  ///< 1 / |theta^2 - 1|, amplification of spectral errors into tau
    R forward_tolerance{0};
};

template <Real R>
struct InverseSolution {
    JacobiMatrix<R> matrix;
    Theta<R> theta;
    SpectralMeasure<R> measure;
    InverseResiduals<R> residuals;
};

/// theta = sqrt(prod mu_k / lambda_k). Throws ZeroInSpectrum if 0 is an
/// eigenvalue, NonPositiveProduct if some ratio is not positive.
template <Real R>
Theta<R> recover_theta(const SpectrumPair<R>& pair);

/// prod over k != 0 of mu_k / lambda_k.
template <Real R>
R zero_case_product(const SpectrumPair<R>& pair);

/// theta^2 implied by a zero-case hint, without any admissibility check.
/// Throws HintMissing or InvalidHint (q1 = 0).
template <Real R>
R zero_case_theta_squared(const SpectrumPair<R>& pair, const std::optional<ZeroCaseHint<R>>& hint);

/// Zero-case recovery with the bound theta^2 < P' (LeftPositive) or
/// theta^2 > P' (RightPositive). Throws HintMissing, InvalidHint or
/// BoundViolated.
template <Real R>
Theta<R> recover_theta_zero_case(const SpectrumPair<R>& pair, const std::optional<ZeroCaseHint<R>>& hint);

/// Raw weights tau_n by position in pair.lambdas; no sign or sum checks.
template <Real R>
std::vector<R> tau_weights(const SpectrumPair<R>& pair, const R& theta_squared);

/// Throws NonPositiveWeight (step = index) or NormalizationFailure.
template <Real R>
SpectralMeasure<R> recover_weights(const SpectrumPair<R>& pair, const Theta<R>& theta,
                                   const R& normalization_tolerance = R(1e-8));

/// s_0 .. s_{count-1}.
template <Real R>
std::vector<R> moments(std::span<const R> nodes, std::span<const R> weights, std::size_t count);

template <Real R>
std::vector<R> moments(const SpectralMeasure<R>& measure, std::size_t count) {
    return moments<R>(measure.nodes(), measure.weights(), count);
}

/// Lanczos on diag(nodes) from sqrt(weights), with full reorthogonalization.
/// Throws BreakdownAtStep when some b_k falls below 1e-12 times the spectral
/// diameter.
template <Real R>
JacobiMatrix<R> reconstruct_jacobi(const SpectralMeasure<R>& measure);

/// Full pipeline. Throws HintMissing, HintUnexpected, CardinalityMismatch,
/// plus everything raised by the steps above and ForwardCheckFailure.
template <Real R>
InverseSolution<R> solve(const InverseInput<R>& input, const InverseOptions<R>& options = {});

}  // namespace jacobi
