#include "jacobi/direct.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "jacobi/detail/numeric.hpp"

namespace jacobi {
namespace {

template <Real R>
std::vector<R> concatenated(std::span<const R> a, std::span<const R> b) {
    std::vector<R> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// 1e-8 times the distance to the nearest neighbour, as in WeylFunction.
template <Real R>
std::vector<R> pole_tolerances(std::span<const R> sorted) {
    using std::abs;
    using std::max;
    using std::min;
    const std::size_t n = sorted.size();
    std::vector<R> tol(n);
    for (std::size_t i = 0; i < n; ++i) {
        R gap = max(R(1), abs(sorted[i]));
        if (n > 1) {
            if (i == 0) {
                gap = sorted[1] - sorted[0];
            } else if (i + 1 == n) {
                gap = sorted[i] - sorted[i - 1];
            } else {
                gap = min(sorted[i] - sorted[i - 1], sorted[i + 1] - sorted[i]);
            }
        }
        tol[i] = R(1e-8) * gap;
    }
    return tol;
}

template <Real R>
R relative_gap(const Complex<R>& a, const Complex<R>& b) {
    using std::max;
    return abs(a - b) / max(R(1), abs(b));
}

}  // namespace

template <Real R>
DirectReport<R> spectra_pair(const JacobiMatrix<R>& matrix, const Theta<R>& theta, const DirectOptions<R>& options) {
    using std::abs;
    using std::max;
    const JacobiMatrix<R> perturbed = apply_theta(matrix, theta);
    EigenDecomposition<R> base = eigen(matrix);
    const EigenDecomposition<R> shifted = eigen(perturbed);

    const std::vector<R> all = concatenated<R>(base.eigenvalues, shifted.eigenvalues);
    const R zero_tol = options.zero_tolerance.value_or(default_zero_tolerance<R>(all));

    DirectReport<R> report{.pair = {}, .theta = theta, .alpha = {}, .diagnostics = {}, .degenerate = false};
    report.pair.lambdas = enumerate_spectrum<R>(base.eigenvalues, zero_tol);
    if (theta.is_identity()) {
        report.pair.mus = report.pair.lambdas;
        report.pair.shift = Shift::Degenerate;
        report.degenerate = true;
    } else {
        report.pair = pair_spectra<R>(report.pair.lambdas, shifted.eigenvalues, zero_tol);
    }
    report.alpha = normalizing_constants<R>(perturbed, shifted.eigenvalues);

    auto& diag = report.diagnostics;
    diag.tolerance = options.check_tolerance;
    const auto& lambdas = report.pair.lambdas;
    const auto& mus = report.pair.mus;
    const R theta2 = theta.squared();
    const R q1 = matrix.diagonal()[0];

    CompensatedSum<R> shift_sum;
    for (int k : lambdas.indices()) shift_sum.add(mus.exact(k) - lambdas.exact(k));
    const R expected_shift = q1 * (theta2 - R(1));
    diag.trace_residual = abs(shift_sum.value() - expected_shift) / max(R(1), abs(q1) * max(R(1), theta2));

    if (!lambdas.has_zero()) {
        detail::ScaledProduct<R> ratio;
        for (int k : lambdas.indices()) ratio.multiply(mus.at(k) / lambdas.at(k));
        diag.determinant_residual = abs(ratio.value() - theta2) / theta2;
    }

    CompensatedSum<R> weight_sum;
    for (const R& a : report.alpha) weight_sum.add(R(1) / a);
    diag.weight_residual = abs(weight_sum.value() - R(1));

    diag.zero_preserved = lambdas.has_zero() == mus.has_zero();
    if (theta.value() > R(1)) {
        diag.shift_consistent = report.pair.shift == Shift::RightPositive;
    } else if (theta.value() < R(1)) {
        diag.shift_consistent = report.pair.shift == Shift::LeftPositive;
    } else {
        diag.shift_consistent = report.pair.shift == Shift::Degenerate;
    }

    // Two evaluations of the m-ratio at a handful of probe points around the
    // spectrum, one of them on the real axis beyond it.
    const R lo = *std::min_element(all.begin(), all.end());
    const R hi = *std::max_element(all.begin(), all.end());
    const R centre = (lo + hi) / R(2);
    const R radius = max(R(1), (hi - lo) / R(2));
    const std::array<Complex<R>, 4> probes{
        Complex<R>(centre, radius),
        Complex<R>(centre - radius / R(2), radius / R(4)),
        Complex<R>(centre + R(7) * radius / R(10), radius / R(10)),
        Complex<R>(hi + radius, R(0)),
    };
    const WeylFunction<R> weyl(std::move(base));
    diag.mgoth_residual = R(0);
    for (const auto& zeta : probes) {
        diag.mgoth_residual = max(diag.mgoth_residual, relative_gap(mgoth_eval(report.pair, zeta),
                                                                    mgoth_via_m(weyl, theta, zeta)));
    }

    const R tol = options.check_tolerance;
    diag.pass = diag.trace_residual <= tol && (!diag.determinant_residual || *diag.determinant_residual <= tol) &&
                diag.mgoth_residual <= tol && diag.weight_residual <= tol && diag.shift_consistent &&
                diag.zero_preserved;
    return report;
}

template <Real R>
R eigenvalue_derivative(const JacobiMatrix<R>& matrix, const Theta<R>& theta, int index) {
    const JacobiMatrix<R> perturbed = apply_theta(matrix, theta);
    const EigenDecomposition<R> decomposition = eigen(perturbed);
    const IndexedSpectrum<R> spectrum = enumerate_spectrum<R>(decomposition.eigenvalues);
    const std::size_t position = spectrum.position_of(index);
    const R value = spectrum.exact(index);
    const std::array<R, 1> at{decomposition.eigenvalues[position]};
    const R alpha = normalizing_constants<R>(perturbed, at)[0];
    return R(2) * value / (theta.value() * alpha);
}

template <Real R>
TraceShift<R> trace_shift(const JacobiMatrix<R>& matrix, const Theta<R>& theta1, const Theta<R>& theta2) {
    if (theta1.value() > theta2.value()) {
        throw Error(ErrorCode::InvalidArgument, "trace shift needs theta1 <= theta2");
    }
    if (theta1.value() == theta2.value()) return {R(0), R(0)};
    const auto first = eigen(apply_theta(matrix, theta1));
    const auto second = eigen(apply_theta(matrix, theta2));
    const std::vector<R> all = concatenated<R>(first.eigenvalues, second.eigenvalues);
    const R zero_tol = default_zero_tolerance<R>(all);
    const auto lambdas = enumerate_spectrum<R>(first.eigenvalues, zero_tol);
    const auto pair = pair_spectra<R>(lambdas, second.eigenvalues, zero_tol);

    CompensatedSum<R> sum;
    for (int k : pair.lambdas.indices()) sum.add(pair.mus.exact(k) - pair.lambdas.exact(k));
    const R q1 = matrix.diagonal()[0];
    return {sum.value(), q1 * (theta2.squared() - theta1.squared())};
}

template <Real R>
Complex<R> mgoth_eval(const SpectrumPair<R>& pair, const Complex<R>& zeta) {
    const auto& lambdas = pair.lambdas;
    const auto& mus = pair.mus;
    if (lambdas.size() != mus.size()) {
        throw Error(ErrorCode::CardinalityMismatch, "spectra of different size");
    }
    const std::vector<R> tol = pole_tolerances<R>(lambdas.values());
    Complex<R> log_sum(R(0));
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const int k = lambdas.index_at(i);
        if (k == 0 && mus.has_zero()) continue;  // (zeta - 0) / (zeta - 0)
        const R lambda = lambdas.exact(k);
        const Complex<R> den = zeta - lambda;
        if (abs(den) < tol[i]) {
            throw Error(ErrorCode::PoleProximity,
                        "zeta is within " + format_real(tol[i]) + " of lambda_" + std::to_string(k));
        }
        const Complex<R> num = zeta - mus.exact(k);
        if (num.re == 0 && num.im == 0) return Complex<R>(R(0));
        log_sum = log_sum + log(num / den);
    }
    return exp(log_sum);
}

template <Real R>
Complex<R> mgoth_via_m(const WeylFunction<R>& weyl, const Theta<R>& theta, const Complex<R>& zeta) {
    const R theta2 = theta.squared();
    return zeta * (theta2 - R(1)) * weyl(zeta) + theta2;
}

#define JACOBI_INSTANTIATE(R)                                                                              \
    template DirectReport<R> spectra_pair(const JacobiMatrix<R>&, const Theta<R>&, const DirectOptions<R>&); \
    template R eigenvalue_derivative(const JacobiMatrix<R>&, const Theta<R>&, int);                         \
    template TraceShift<R> trace_shift(const JacobiMatrix<R>&, const Theta<R>&, const Theta<R>&);           \
    template Complex<R> mgoth_eval(const SpectrumPair<R>&, const Complex<R>&);                              \
    template Complex<R> mgoth_via_m(const WeylFunction<R>&, const Theta<R>&, const Complex<R>&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
