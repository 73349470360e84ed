#include "jacobi/inverse.hpp"

#include <algorithm>
#include <string>

#include "jacobi/detail/numeric.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi {
namespace {

template <Real R>
R check_bound(const SpectrumPair<R>& pair, const R& theta2, const R& product) {
    if (!is_finite(theta2) || !(theta2 > 0)) {
        throw Error(ErrorCode::BoundViolated, "hint gives theta^2 = " + format_real(theta2));
    }
    if (pair.shift == Shift::LeftPositive && !(theta2 < product)) {
        throw Error(ErrorCode::BoundViolated, "left shift needs theta^2 < " + format_real(product) + ", got " +
                                                  format_real(theta2));
    }
    if (pair.shift == Shift::RightPositive && !(theta2 > product)) {
        throw Error(ErrorCode::BoundViolated, "right shift needs theta^2 > " + format_real(product) + ", got " +
                                                  format_real(theta2));
    }
    return theta2;
}

template <Real R>
R max_abs(std::span<const R> values) {
    using std::abs;
    using std::max;
    R out(0);
    for (const R& v : values) out = max(out, abs(v));
    return out;
}

}  // namespace

template <Real R>
Theta<R> recover_theta(const SpectrumPair<R>& pair) {
    using std::sqrt;
    if (pair.lambdas.has_zero() || pair.mus.has_zero()) {
        throw Error(ErrorCode::ZeroInSpectrum, "0 is an eigenvalue; theta needs a zero-case hint");
    }
    if (pair.lambdas.size() != pair.mus.size()) {
        throw Error(ErrorCode::CardinalityMismatch, "spectra of different size");
    }
    detail::ScaledProduct<R> product;
    for (int k : pair.lambdas.indices()) {
        const R ratio = pair.mus.at(k) / pair.lambdas.at(k);
        if (!(ratio > 0)) {
            throw Error(ErrorCode::NonPositiveProduct, "mu/lambda <= 0 at index " + std::to_string(k), k);
        }
        product.multiply(ratio);
    }
    return Theta<R>(sqrt(product.value()));
}

template <Real R>
R zero_case_product(const SpectrumPair<R>& pair) {
    detail::ScaledProduct<R> product;
    for (int k : pair.lambdas.indices()) {
        if (k != 0) product.multiply(pair.mus.at(k) / pair.lambdas.at(k));
    }
    return product.value();
}

template <Real R>
R zero_case_theta_squared(const SpectrumPair<R>& pair, const std::optional<ZeroCaseHint<R>>& hint) {
    if (!hint) throw Error(ErrorCode::HintMissing, "0 is an eigenvalue: supply q1, alpha0 or theta");
    if (const auto* h = std::get_if<ThetaHint<R>>(&*hint)) return h->theta * h->theta;
    if (const auto* h = std::get_if<Alpha0Hint<R>>(&*hint)) {
        if (!(h->alpha0 > 1)) {
            throw Error(ErrorCode::BoundViolated, "alpha0 must exceed 1, got " + format_real(h->alpha0));
        }
        return (h->alpha0 * zero_case_product(pair) - R(1)) / (h->alpha0 - R(1));
    }
    const R q1 = std::get<Q1Hint<R>>(*hint).q1;
    if (q1 == 0) throw Error(ErrorCode::InvalidHint, "q1 = 0 does not determine theta");
    CompensatedSum<R> shift;
    for (int k : pair.lambdas.indices()) shift.add(pair.mus.exact(k) - pair.lambdas.exact(k));
    return R(1) + shift.value() / q1;
}

template <Real R>
Theta<R> recover_theta_zero_case(const SpectrumPair<R>& pair, const std::optional<ZeroCaseHint<R>>& hint) {
    using std::sqrt;
    if (!pair.lambdas.has_zero()) throw Error(ErrorCode::InvalidArgument, "no zero eigenvalue");
    if (pair.shift == Shift::Degenerate) throw Error(ErrorCode::InvalidArgument, "identical spectra");
    if (hint) {
        if (const auto* h = std::get_if<ThetaHint<R>>(&*hint); h && !(h->theta > 0 && is_finite(h->theta))) {
            throw Error(ErrorCode::InvalidHint, "theta hint must be finite and > 0");
        }
    }
    const R theta2 = zero_case_theta_squared(pair, hint);
    return Theta<R>(sqrt(check_bound(pair, theta2, zero_case_product(pair))));
}

template <Real R>
std::vector<R> tau_weights(const SpectrumPair<R>& pair, const R& theta_squared) {
    const auto& lambdas = pair.lambdas;
    const auto& mus = pair.mus;
    const std::vector<int> indices = lambdas.indices();
    const R shift = theta_squared - R(1);
    std::vector<R> tau(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int n = indices[i];
        if (n == 0) {
            tau[i] = (theta_squared - zero_case_product(pair)) / shift;
            continue;
        }
        const R lambda_n = lambdas.exact(n);
        detail::ScaledProduct<R> product;
        product.multiply((mus.exact(n) - lambda_n) / (lambda_n * shift));
        for (int k : indices) {
            if (k == n || k == 0) continue;  // the k = 0 factor is (0 - lambda_n) / (0 - lambda_n)
            product.multiply((mus.exact(k) - lambda_n) / (lambdas.exact(k) - lambda_n));
        }
        tau[i] = product.value();
    }
    return tau;
}

template <Real R>
SpectralMeasure<R> recover_weights(const SpectrumPair<R>& pair, const Theta<R>& theta,
                                   const R& normalization_tolerance) {
    using std::abs;
    if (theta.is_identity()) throw Error(ErrorCode::InvalidArgument, "theta = 1 leaves the weights undetermined");
    std::vector<R> tau = tau_weights(pair, theta.squared());
    const std::vector<int> indices = pair.lambdas.indices();
    CompensatedSum<R> total;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (!(tau[i] > 0)) {
            throw Error(ErrorCode::NonPositiveWeight,
                        "tau_" + std::to_string(indices[i]) + " = " + format_real(tau[i]), indices[i]);
        }
        total.add(tau[i]);
    }
    if (abs(total.value() - R(1)) > normalization_tolerance) {
        throw Error(ErrorCode::NormalizationFailure, "weights sum to " + format_real(total.value()));
    }
    std::vector<R> nodes;
    nodes.reserve(indices.size());
    for (int k : indices) nodes.push_back(pair.lambdas.exact(k));
    return SpectralMeasure<R>(std::move(nodes), std::move(tau), normalization_tolerance);
}

template <Real R>
std::vector<R> moments(std::span<const R> nodes, std::span<const R> weights, std::size_t count) {
    std::vector<R> out(count);
    detail::power_sums<R>(nodes, weights, out);
    return out;
}

template <Real R>
JacobiMatrix<R> reconstruct_jacobi(const SpectralMeasure<R>& measure) {
    using std::sqrt;
    const std::size_t n = measure.size();
    const auto nodes = measure.nodes();
    const R breakdown = R(1e-12) * (nodes.back() - nodes.front());

    std::vector<std::vector<R>> basis;
    basis.reserve(n);
    std::vector<R> start(n);
    for (std::size_t i = 0; i < n; ++i) start[i] = sqrt(measure.weights()[i]);
    const R start_norm = sqrt(detail::dot<R>(start, start));
    for (R& x : start) x /= start_norm;
    basis.push_back(std::move(start));

    std::vector<R> q(n);
    std::vector<R> b;
    b.reserve(n > 0 ? n - 1 : 0);
    std::vector<R> u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::vector<R>& v = basis[k];
        for (std::size_t i = 0; i < n; ++i) u[i] = nodes[i] * v[i];
        q[k] = detail::dot<R>(v, u);
        if (k + 1 == n) break;

        detail::axpy<R>(-q[k], v, u);
        if (k > 0) detail::axpy<R>(-b[k - 1], basis[k - 1], u);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& w : basis) detail::axpy<R>(-detail::dot<R>(w, u), w, u);
        }
        const R norm = sqrt(detail::dot<R>(u, u));
        if (!(norm > breakdown)) {
            throw Error(ErrorCode::BreakdownAtStep,
                        "Lanczos breakdown at step " + std::to_string(k + 1) + " (b = " + format_real(norm) + ")",
                        static_cast<long>(k + 1));
        }
        b.push_back(norm);
        std::vector<R> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = u[i] / norm;
        basis.push_back(std::move(next));
    }
    return JacobiMatrix<R>(std::move(q), std::move(b));
}

template <Real R>
InverseSolution<R> solve(const InverseInput<R>& input, const InverseOptions<R>& options) {
    using std::abs;
    using std::max;
    const auto& pair = input.pair;
    if (pair.lambdas.size() != pair.mus.size()) {
        throw Error(ErrorCode::CardinalityMismatch, "spectra have " + std::to_string(pair.lambdas.size()) + " and " +
                                                        std::to_string(pair.mus.size()) + " values");
    }
    if (pair.shift == Shift::Degenerate) {
        throw Error(ErrorCode::InvalidArgument, "identical spectra (theta = 1) cannot be inverted");
    }
    const bool zero = pair.lambdas.has_zero();
    if (zero && !input.hint) throw Error(ErrorCode::HintMissing, "0 is an eigenvalue: supply q1, alpha0 or theta");
    if (!zero && input.hint) throw Error(ErrorCode::HintUnexpected, "hints apply only when 0 is an eigenvalue");

    const Theta<R> theta = zero ? recover_theta_zero_case(pair, input.hint) : recover_theta(pair);
    SpectralMeasure<R> measure = recover_weights(pair, theta, options.normalization_tolerance);
    JacobiMatrix<R> matrix = reconstruct_jacobi(measure);

    InverseResiduals<R> res;
    res.forward_tolerance = options.forward_tolerance;
    const R scale = max({R(1), max_abs<R>(pair.lambdas.values()), max_abs<R>(pair.mus.values())});
    const auto indices = pair.lambdas.indices();
    const auto forward = [&](const JacobiMatrix<R>& m, const IndexedSpectrum<R>& given) {
        const auto computed = eigen(m).eigenvalues;
        R worst(0);
        for (std::size_t i = 0; i < computed.size(); ++i) {
            worst = max(worst, abs(computed[i] - given.exact(indices[i])));
        }
        return worst / scale;
    };
    res.lambda_residual = forward(matrix, pair.lambdas);
    res.mu_residual = forward(apply_theta(matrix, theta), pair.mus);

    const auto s = moments(measure, 3);
    const R q1 = matrix.diagonal()[0];
    res.q1_moment_gap = abs(q1 - s[1]) / max(R(1), abs(q1));
    if (matrix.size() > 1) {
        const R b1 = matrix.off_diagonal()[0];
        res.b1_moment_gap = abs(b1 * b1 - (s[2] - s[1] * s[1])) / max(R(1), b1 * b1);
    }
    CompensatedSum<R> total;
    for (const R& w : measure.weights()) total.add(w);
    res.weight_sum_error = abs(total.value() - R(1));
    res.theta_condition = R(1) / abs(theta.squared() - R(1));

    if (res.lambda_residual > options.forward_tolerance || res.mu_residual > options.forward_tolerance) {
        throw Error(ErrorCode::ForwardCheckFailure,
                    "rebuilt matrix reproduces the spectra only to " +
                        format_real(max(res.lambda_residual, res.mu_residual)) + " (tolerance " +
                        format_real(options.forward_tolerance) + ")");
    }
    return InverseSolution<R>{std::move(matrix), theta, std::move(measure), res};
}

#define JACOBI_INSTANTIATE(R)                                                                                  \
    template Theta<R> recover_theta(const SpectrumPair<R>&);                                                   \
    template R zero_case_product(const SpectrumPair<R>&);                                                      \
    template R zero_case_theta_squared(const SpectrumPair<R>&, const std::optional<ZeroCaseHint<R>>&);        \
    template Theta<R> recover_theta_zero_case(const SpectrumPair<R>&, const std::optional<ZeroCaseHint<R>>&); \
    template std::vector<R> tau_weights(const SpectrumPair<R>&, const R&);                                     \
    template SpectralMeasure<R> recover_weights(const SpectrumPair<R>&, const Theta<R>&, const R&);            \
    template std::vector<R> moments(std::span<const R>, std::span<const R>, std::size_t);                      \
    template JacobiMatrix<R> reconstruct_jacobi(const SpectralMeasure<R>&);                                    \
    template InverseSolution<R> solve(const InverseInput<R>&, const InverseOptions<R>&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
