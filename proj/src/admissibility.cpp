#include "jacobi/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/mpfr.hpp>

#include "jacobi/detail/numeric.hpp"

namespace jacobi {
namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<300>,
                                           boost::multiprecision::et_off>;
using Matrix = std::vector<std::vector<Wide>>;

InterlacingResult rejected_enumeration(const Error& e) {
    InterlacingResult r;
    r.ok = false;
    r.failure = e.code();
    r.detail = e.what();
    return r;
}

// Unpivoted LDL^T of the leading minors; stops at the first pivot that does
// not exceed factor * trace of its minor.
struct Ldl {
    Matrix lower;
    std::vector<Wide> pivots;
    std::optional<std::size_t> failed_at;
};

Ldl factor(const Matrix& h, const Wide& factor_threshold) {
    const std::size_t m = h.size();
    Ldl out;
    out.lower.assign(m, std::vector<Wide>(m, Wide(0)));
    Wide trace(0);
    for (std::size_t j = 0; j < m; ++j) {
        trace += h[j][j];
        Wide d = h[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= out.lower[j][k] * out.lower[j][k] * out.pivots[k];
        out.pivots.push_back(d);
        if (!(d > factor_threshold * trace)) {
            out.failed_at = j;
            return out;
        }
        out.lower[j][j] = Wide(1);
        for (std::size_t i = j + 1; i < m; ++i) {
            Wide v = h[i][j];
            for (std::size_t k = 0; k < j; ++k) v -= out.lower[i][k] * out.lower[j][k] * out.pivots[k];
            out.lower[i][j] = v / d;
        }
    }
    return out;
}

// Solves L D L^T y = x in place.
void ldl_solve(const Ldl& f, std::vector<Wide>& x) {
    const std::size_t m = x.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= f.lower[i][k] * x[k];
    }
    for (std::size_t i = 0; i < m; ++i) x[i] /= f.pivots[i];
    for (std::size_t i = m; i-- > 0;) {
        for (std::size_t k = i + 1; k < m; ++k) x[i] -= f.lower[k][i] * x[k];
    }
}

// Smallest eigenvalue of a positive definite matrix by inverse iteration.
Wide smallest_eigenvalue(const Ldl& f) {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    const std::size_t m = f.pivots.size();
    std::vector<Wide> x(m, Wide(1) / sqrt(Wide(m)));
    Wide estimate(0);
    for (int iteration = 0; iteration < 500; ++iteration) {
        std::vector<Wide> y = x;
        ldl_solve(f, y);
        Wide rayleigh(0);
        Wide norm2(0);
        for (std::size_t i = 0; i < m; ++i) {
            rayleigh += x[i] * y[i];
            norm2 += y[i] * y[i];
        }
        const Wide norm = sqrt(norm2);
        for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / norm;
        const Wide next = Wide(1) / rayleigh;
        if (iteration > 0 && abs(next - estimate) <= Wide(1e-12) * abs(next)) return next;
        estimate = next;
    }
    return estimate;
}

Matrix hankel(const std::vector<Wide>& s, std::size_t offset, std::size_t size) {
    Matrix h(size, std::vector<Wide>(size));
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) h[i][j] = s[offset + i + j];
    }
    return h;
}

double log_abs(const Wide& x) {
    using boost::multiprecision::abs;
    using boost::multiprecision::log;
    return static_cast<double>(log(abs(x)));
}

}  // namespace

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::Admissible ? "ADMISSIBLE" : "REJECTED";
}

template <Real R>
InterlacingResult check_interlacing(std::span<const R> lambdas, std::span<const R> mus) {
    std::vector<R> all(lambdas.begin(), lambdas.end());
    all.insert(all.end(), mus.begin(), mus.end());
    const R tol = default_zero_tolerance<R>(all);
    try {
        return check_interlacing<R>(enumerate_spectrum<R>(lambdas, tol), enumerate_spectrum<R>(mus, tol));
    } catch (const Error& e) {
        return rejected_enumeration(e);
    }
}

template <Real R>
SumDiagnostics<R> check_sum(const SpectrumPair<R>& pair) {
    using std::abs;
    const std::vector<int> indices = pair.lambdas.indices();
    std::vector<std::size_t> order(indices.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return abs(pair.lambdas.exact(indices[a])) < abs(pair.lambdas.exact(indices[b]));
    });

    SumDiagnostics<R> out;
    CompensatedSum<R> sum;
    CompensatedSum<R> mass;
    CompensatedSum<R> tail;
    const std::size_t tail_start = order.size() - order.size() / 4;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int k = indices[order[i]];
        const R term = pair.mus.exact(k) - pair.lambdas.exact(k);
        sum.add(term);
        mass.add(abs(term));
        if (i >= tail_start) tail.add(abs(term));
        out.partial_sums.push_back(sum.value());
    }
    out.sum = sum.value();
    out.finite = is_finite(out.sum);
    out.tail_fraction = mass.value() > 0 ? tail.value() / mass.value() : R(0);
    return out;
}

template <Real R>
TauCandidate<R> build_tau(const SpectrumPair<R>& pair, const std::optional<ZeroCaseHint<R>>& hint) {
    TauCandidate<R> out;
    const std::vector<int> indices = pair.lambdas.indices();
    for (int k : indices) out.nodes.push_back(pair.lambdas.exact(k));
    if (pair.shift == Shift::Degenerate) {
        out.failure = "identical spectra";
        return out;
    }
    try {
        if (pair.lambdas.has_zero()) {
            out.zero_product = zero_case_product(pair);
            out.theta_squared = zero_case_theta_squared(pair, hint);
        } else {
            if (hint) {
                out.failure = "hint given without a zero eigenvalue";
                return out;
            }
            detail::ScaledProduct<R> product;
            for (int k : indices) product.multiply(pair.mus.at(k) / pair.lambdas.at(k));
            out.theta_squared = product.value();
        }
    } catch (const Error& e) {
        out.failure = e.what();
        return out;
    }
    if (!is_finite(*out.theta_squared) || !(*out.theta_squared > 0) || *out.theta_squared == R(1)) {
        out.failure = "theta^2 = " + format_real(*out.theta_squared) + " is not usable";
        return out;
    }

    out.weights = tau_weights(pair, *out.theta_squared);
    CompensatedSum<R> total;
    out.positive = true;
    for (std::size_t i = 0; i < out.weights.size(); ++i) {
        const R& w = out.weights[i];
        total.add(w);
        if (out.positive && !(is_finite(w) && w > 0)) {
            out.positive = false;
            out.first_nonpositive_index = indices[i];
            out.failure = "tau_" + std::to_string(indices[i]) + " = " + format_real(w);
        }
    }
    out.weight_sum = total.value();
    return out;
}

template <Real R>
HankelReport<R> check_moments_and_hamburger(std::span<const R> nodes, std::span<const R> weights,
                                            std::size_t max_order) {
    using boost::multiprecision::sqrt;
    HankelReport<R> out;
    out.max_order = max_order;
    const std::size_t count = 2 * max_order + 1;

    const std::vector<R> coarse = moments<R>(nodes, weights, count);
    std::size_t finite_prefix = 0;
    while (finite_prefix < count && is_finite(coarse[finite_prefix])) ++finite_prefix;
    out.overflow = finite_prefix < count;
    out.largest_safe_order = finite_prefix == 0 ? 0 : (finite_prefix - 1) / 2;
    if (out.largest_safe_order > 0) {
        using std::abs;
        using std::pow;
        const std::size_t top = 2 * out.largest_safe_order;
        out.growth_rate = pow(abs(coarse[top]), R(1) / R(static_cast<double>(top)));
    }

    std::vector<Wide> s(count, Wide(0));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Wide x(nodes[k]);
        Wide term(weights[k]);
        for (std::size_t j = 0; j < count; ++j) {
            s[j] += term;
            term *= x;
        }
    }

    const Wide eps = std::numeric_limits<Wide>::epsilon();
    const Wide threshold = sqrt(eps);
    out.pivot_tolerance_factor = static_cast<double>(threshold);
    const Ldl f = factor(hankel(s, 0, max_order + 1), threshold);
    out.positive_definite = !f.failed_at.has_value();
    out.first_failing_order = f.failed_at;

    int sign = 1;
    double log_det = 0;
    std::vector<double> log_det_h;
    for (std::size_t n = 0; n < f.pivots.size(); ++n) {
        if (f.pivots[n] < 0) sign = -sign;
        out.determinant_signs.push_back(f.pivots[n] == 0 ? 0 : sign);
        out.log_pivots.push_back(f.pivots[n] == 0 ? -INFINITY : log_abs(f.pivots[n]));
        log_det += out.log_pivots.back();
        log_det_h.push_back(log_det);
    }

    if (max_order >= 2 && out.positive_definite) {
        const Ldl shifted = factor(hankel(s, 4, max_order - 1), Wide(0));
        double log_det_shifted = 0;
        for (std::size_t n = 2; n <= max_order; ++n) {
            const std::size_t j = n - 2;
            if (j >= shifted.pivots.size() || (shifted.failed_at && j >= *shifted.failed_at)) break;
            log_det_shifted += log_abs(shifted.pivots[j]);
            out.log_dprime_ratios.push_back(log_det_h[n] - log_det_shifted);
        }
    }

    if (out.positive_definite) {
        const Wide smallest = smallest_eigenvalue(f);
        Wide trace(0);
        for (std::size_t i = 0; i <= max_order; ++i) trace += s[2 * i];
        out.gram_min_eigenvalue = static_cast<double>(smallest);
        out.gram_nonsingular = smallest > threshold * trace;
    }
    return out;
}

template <Real R>
AdmissibilityReport<R> admissible(std::span<const R> lambdas, std::span<const R> mus,
                                  const std::optional<ZeroCaseHint<R>>& hint) {
    AdmissibilityReport<R> report;
    const auto reject = [&](std::string reason) {
        report.verdict = Verdict::Rejected;
        report.reason = std::move(reason);
        return report;
    };

    std::vector<R> all(lambdas.begin(), lambdas.end());
    all.insert(all.end(), mus.begin(), mus.end());
    const R tol = default_zero_tolerance<R>(all);
    try {
        const IndexedSpectrum<R> l = enumerate_spectrum<R>(lambdas, tol);
        const IndexedSpectrum<R> m = enumerate_spectrum<R>(mus, tol);
        report.condition_a = check_interlacing<R>(l, m);
        if (report.condition_a.ok) report.pair = pair_spectra<R>(l, mus, tol);
    } catch (const Error& e) {
        report.condition_a = rejected_enumeration(e);
    }
    if (!report.condition_a.ok) return reject("condition_a");

    report.condition_b = check_sum(*report.pair);
    if (!report.condition_b->finite) return reject("condition_b");

    if (report.pair->lambdas.has_zero() && !hint) return reject("hint_missing");
    report.tau = build_tau(*report.pair, hint);
    if (!report.tau->positive) return reject("positivity");

    const std::size_t n = report.tau->nodes.size();
    report.hankel = check_moments_and_hamburger<R>(report.tau->nodes, report.tau->weights, n - 1);
    if (!report.hankel->positive_definite) return reject("hamburger");
    if (!report.hankel->gram_nonsingular) return reject("condition_d");

    report.verdict = Verdict::Admissible;
    report.reason.clear();
    return report;
}

#define JACOBI_INSTANTIATE(R)                                                                                  \
    template InterlacingResult check_interlacing(std::span<const R>, std::span<const R>);                      \
    template SumDiagnostics<R> check_sum(const SpectrumPair<R>&);                                              \
    template TauCandidate<R> build_tau(const SpectrumPair<R>&, const std::optional<ZeroCaseHint<R>>&);        \
    template HankelReport<R> check_moments_and_hamburger(std::span<const R>, std::span<const R>, std::size_t); \
    template AdmissibilityReport<R> admissible(std::span<const R>, std::span<const R>,                          \
                                               const std::optional<ZeroCaseHint<R>>&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
