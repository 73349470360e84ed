#include "jacobi/spectral.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

#include "jacobi/detail/numeric.hpp"

namespace jacobi {
namespace {

constexpr std::size_t rescale_period = 50;
constexpr long early_rescale_exponent = 256;

// Eigenvector of a tridiagonal at a computed eigenvalue by three steps of
// inverse iteration. The shifted matrix is factored with row interchanges
// (fill-in on a second superdiagonal); exact zero pivots are nudged.
template <Real R>
std::vector<R> eigenvector_at(const JacobiMatrix<R>& matrix, const R& lambda) {
    using std::abs;
    using std::max;
    const std::size_t n = matrix.size();
    if (n == 1) return {R(1)};
    const auto q = matrix.diagonal();
    const auto b = matrix.off_diagonal();
    const R tiny = std::numeric_limits<R>::epsilon() * max(R(1), matrix.norm_bound());

    std::vector<R> d(n);
    std::vector<R> dl(b.begin(), b.end());
    std::vector<R> du(b.begin(), b.end());
    std::vector<R> du2(n > 2 ? n - 2 : 0, R(0));
    std::vector<bool> swapped(n - 1, false);
    for (std::size_t i = 0; i < n; ++i) d[i] = q[i] - lambda;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (abs(d[i]) >= abs(dl[i])) {
            if (d[i] == 0) d[i] = tiny;
            const R factor = dl[i] / d[i];
            dl[i] = factor;
            d[i + 1] -= factor * du[i];
        } else {
            const R factor = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = factor;
            const R upper = du[i];
            du[i] = d[i + 1];
            d[i + 1] = upper - factor * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -factor * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if (d[n - 1] == 0) d[n - 1] = tiny;

    // Irregular start so no eigenvector of a structured matrix is orthogonal to it.
    std::vector<R> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double golden = 0.6180339887498949 * static_cast<double>(i + 1);
        x[i] = R(0.5 + (golden - static_cast<double>(static_cast<long>(golden))));
    }
    for (int step = 0; step < 3; ++step) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) {
                const R top = x[i];
                x[i] = x[i + 1];
                x[i + 1] = top - dl[i] * x[i];
            } else {
                x[i + 1] -= dl[i] * x[i];
            }
        }
        x[n - 1] /= d[n - 1];
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        R big(0);
        for (const R& v : x) big = max(big, abs(v));
        for (R& v : x) v /= big;
    }
    return x;
}

template <Real R>
R magnitude(const R& x) {
    using std::abs;
    return abs(x);
}

template <Real R>
R magnitude(const Complex<R>& z) {
    return max_abs_component(z);
}

template <Real R>
R scaled(const R& x, long e) {
    using std::ldexp;
    return ldexp(x, static_cast<int>(e));
}

template <Real R>
Complex<R> scaled(const Complex<R>& z, long e) {
    return ldexp(z, static_cast<int>(e));
}

template <Real R>
R modulus(const R& x) {
    using std::abs;
    return abs(x);
}

template <Real R>
R modulus(const Complex<R>& z) {
    return abs(z);
}

}  // namespace

template <Real R>
std::vector<R> EigenDecomposition<R>::weights() const {
    std::vector<R> w(first_components.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = first_components[i] * first_components[i];
    return w;
}

template <Real R>
EigenDecomposition<R> eigen(const JacobiMatrix<R>& matrix, int max_iterations) {
    using std::abs;
    const std::size_t n = matrix.size();
    std::vector<R> d(matrix.diagonal().begin(), matrix.diagonal().end());
    std::vector<R> e(n, R(0));
    std::copy(matrix.off_diagonal().begin(), matrix.off_diagonal().end(), e.begin());
    std::vector<R> z(n, R(0));  // first row of the accumulated rotations
    z[0] = R(1);
    const R eps = machine_epsilon<R>();

    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        for (;;) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const R dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iterations > max_iterations) {
                throw Error(ErrorCode::ConvergenceFailure,
                            "eigenvalue " + std::to_string(l) + " did not converge; residual |Jv - lambda v| ~ " +
                                format_real(R(abs(e[l]))));
            }

            R g = (d[l + 1] - d[l]) / (R(2) * e[l]);
            R r = detail::hypot(g, R(1));
            g = d[m] - d[l] + e[l] / (g + detail::copysign(r, g));
            R s(1);
            R c(1);
            R p(0);
            bool deflated = false;
            for (std::size_t i = m; i-- > l;) {
                const R f = s * e[i];
                const R bb = c * e[i];
                r = detail::hypot(f, g);
                e[i + 1] = r;
                if (r == 0) {
                    d[i + 1] -= p;
                    e[m] = R(0);
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + R(2) * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;

                const R zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = R(0);
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    EigenDecomposition<R> out;
    out.eigenvalues.reserve(n);
    out.first_components.reserve(n);
    for (std::size_t i : order) {
        out.eigenvalues.push_back(d[i]);
        out.first_components.push_back(abs(z[i]));
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(out.eigenvalues[i - 1] < out.eigenvalues[i])) {
            throw Error(ErrorCode::DegenerateSpectrum,
                        "computed eigenvalues " + std::to_string(i - 1) + " and " + std::to_string(i) +
                            " coincide at this precision (" + format_real(out.eigenvalues[i]) + ")");
        }
    }
    return out;
}

template <Real R, class Point>
Point PolynomialTable<R, Point>::p(std::size_t k) const {
    return scaled(p_.at(k), exponents_.at(k));
}

template <Real R, class Point>
Point PolynomialTable<R, Point>::q(std::size_t k) const {
    return scaled(q_.at(k), exponents_.at(k));
}

template <Real R, class Point>
PolynomialTable<R, Point> poly_table(const JacobiMatrix<R>& matrix, const Point& zeta, std::size_t n) {
    using std::max;
    const std::size_t order = matrix.size();
    if (n > order) {
        throw Error(ErrorCode::InvalidArgument,
                    "table degree " + std::to_string(n) + " exceeds matrix order " + std::to_string(order));
    }
    const auto q = matrix.diagonal();
    const auto b = matrix.off_diagonal();

    std::vector<Point> p_out{Point(R(1))};
    std::vector<Point> q_out{Point(R(0))};
    std::vector<long> exponents{0};
    p_out.reserve(n + 1);
    q_out.reserve(n + 1);
    exponents.reserve(n + 1);

    Point p_prev(R(0));
    Point p_cur(R(1));
    Point q_prev(R(0));
    Point q_cur(R(0));
    long exponent = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const R b_k = k < order ? b[k - 1] : R(1);
        const R b_prev = k >= 2 ? b[k - 2] : R(0);
        const Point shift = zeta - q[k - 1];
        Point p_next = (shift * p_cur - b_prev * p_prev) / b_k;
        Point q_next = k == 1 ? Point(R(1) / b_k) : Point((shift * q_cur - b_prev * q_prev) / b_k);
        p_prev = std::move(p_cur);
        p_cur = std::move(p_next);
        q_prev = std::move(q_cur);
        q_cur = std::move(q_next);

        // Fast growth (|zeta| much larger than the b_k) can overflow a double
        // well within one period, so a large exponent also forces a rescale.
        const R big = max(max(magnitude(p_prev), magnitude(p_cur)), max(magnitude(q_prev), magnitude(q_cur)));
        const long e = detail::binary_exponent(big);
        if (k % rescale_period == 0 || e > early_rescale_exponent || e < -early_rescale_exponent) {
            if (e != 0) {
                p_prev = scaled(p_prev, -e);
                p_cur = scaled(p_cur, -e);
                q_prev = scaled(q_prev, -e);
                q_cur = scaled(q_cur, -e);
                exponent += e;
            }
        }
        p_out.push_back(p_cur);
        q_out.push_back(q_cur);
        exponents.push_back(exponent);
    }
    return PolynomialTable<R, Point>(std::move(p_out), std::move(q_out), std::move(exponents));
}

template <Real R, class Point>
R wronskian_residual(const PolynomialTable<R, Point>& table, const JacobiMatrix<R>& matrix, std::size_t k) {
    using std::ldexp;
    if (k == 0 || k > table.degree() || k >= matrix.size()) {
        throw Error(ErrorCode::InvalidArgument, "Wronskian index out of range");
    }
    const R b_k = matrix.off_diagonal()[k - 1];
    const auto p = table.p_mantissas();
    const auto q = table.q_mantissas();
    const auto ex = table.exponents();
    const Point left = p[k - 1] * q[k];
    const Point right = p[k] * q[k - 1];
    const Point w = b_k * (left - right);
    const R target = ldexp(R(1), static_cast<int>(-(ex[k - 1] + ex[k])));
    return modulus(w - Point(target)) / (b_k * (modulus(left) + modulus(right)));
}

template <Real R>
std::vector<R> normalizing_constants(const JacobiMatrix<R>& matrix) {
    return normalizing_constants<R>(matrix, eigen(matrix).eigenvalues);
}

template <Real R>
std::vector<R> normalizing_constants(const JacobiMatrix<R>& matrix, std::span<const R> eigenvalues) {
    // P_k(lambda_n) = u_{k+1}(n) / u_1(n). Running the three-term recurrence
    // forward instead is unstable whenever the eigenvector decays from the
    // first row downwards, which is common.
    std::vector<R> alpha;
    alpha.reserve(eigenvalues.size());
    for (const R& lambda : eigenvalues) {
        const std::vector<R> u = eigenvector_at(matrix, lambda);
        if (u[0] == 0) {
            throw Error(ErrorCode::PostconditionViolated,
                        "eigenvector at " + format_real(lambda) + " has a vanishing first component");
        }
        CompensatedSum<R> sum;
        for (const R& component : u) {
            const R p = component / u[0];
            sum.add(p * p);
        }
        alpha.push_back(sum.value());
    }
    return alpha;
}

template <Real R>
WeylFunction<R>::WeylFunction(const JacobiMatrix<R>& matrix) : WeylFunction(eigen(matrix)) {}

template <Real R>
WeylFunction<R>::WeylFunction(EigenDecomposition<R> decomposition)
    : decomposition_(std::move(decomposition)), weights_(decomposition_.weights()) {
    using std::abs;
    using std::max;
    using std::min;
    const auto& lambda = decomposition_.eigenvalues;
    const std::size_t n = lambda.size();
    pole_tolerance_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        R gap = n == 1 ? max(R(1), abs(lambda[0])) : R(0);
        if (n > 1) {
            if (i == 0) {
                gap = lambda[1] - lambda[0];
            } else if (i + 1 == n) {
                gap = lambda[i] - lambda[i - 1];
            } else {
                gap = min(lambda[i] - lambda[i - 1], lambda[i + 1] - lambda[i]);
            }
        }
        pole_tolerance_[i] = R(1e-8) * gap;
    }
}

template <Real R>
void WeylFunction<R>::check_pole_distance(const Complex<R>& zeta) const {
    const auto& lambda = decomposition_.eigenvalues;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (abs(zeta - lambda[i]) < pole_tolerance_[i]) {
            throw Error(ErrorCode::PoleProximity,
                        "zeta is within " + format_real(pole_tolerance_[i]) + " of the pole " + format_real(lambda[i]));
        }
    }
}

template <Real R>
Complex<R> WeylFunction<R>::operator()(const Complex<R>& zeta) const {
    check_pole_distance(zeta);
    return detail::resolvent_sum<R>(decomposition_.eigenvalues, weights_, zeta);
}

template <Real R>
Complex<R> riccati_next(const Complex<R>& m_prev, const R& q_n, const R& b_n, const Complex<R>& zeta,
                        const R& tolerance) {
    if (abs(m_prev) <= tolerance) {
        throw Error(ErrorCode::ZeroMFunction, "previous m-function value vanishes; zeta is an eigenvalue of the "
                                              "truncated matrix");
    }
    return (Complex<R>(q_n) - zeta - R(1) / m_prev) / (b_n * b_n);
}

template <Real R>
AsymptoticCoefficients<R> asymptotic_coeffs(const JacobiMatrix<R>& matrix) {
    using std::abs;
    using std::max;
    const EigenDecomposition<R> decomposition = eigen(matrix);
    const std::vector<R> weights = decomposition.weights();
    std::vector<R> s(3);
    detail::power_sums<R>(decomposition.eigenvalues, weights, s);

    const R q1 = matrix.diagonal()[0];
    const R b1 = matrix.size() > 1 ? matrix.off_diagonal()[0] : R(0);
    const R scale = max(R(1), matrix.norm_bound());
    if (abs(s[0] - R(1)) > R(1e-12) || abs(s[1] - q1) > R(1e-10) * scale ||
        abs(s[2] - (q1 * q1 + b1 * b1)) > R(1e-10) * scale * scale) {
        throw Error(ErrorCode::PostconditionViolated,
                    "spectral moments (" + format_real(s[0]) + ", " + format_real(s[1]) + ", " + format_real(s[2]) +
                        ") disagree with (1, q1, q1^2 + b1^2)");
    }
    return {s[0], s[1], s[2]};
}

#define JACOBI_INSTANTIATE(R)                                                                                   \
    template struct EigenDecomposition<R>;                                                                      \
    template EigenDecomposition<R> eigen(const JacobiMatrix<R>&, int);                                          \
    template class PolynomialTable<R, R>;                                                                       \
    template class PolynomialTable<R, Complex<R>>;                                                              \
    template PolynomialTable<R, R> poly_table(const JacobiMatrix<R>&, const R&, std::size_t);                   \
    template PolynomialTable<R, Complex<R>> poly_table(const JacobiMatrix<R>&, const Complex<R>&, std::size_t); \
    template R wronskian_residual(const PolynomialTable<R, R>&, const JacobiMatrix<R>&, std::size_t);           \
    template R wronskian_residual(const PolynomialTable<R, Complex<R>>&, const JacobiMatrix<R>&, std::size_t);  \
    template std::vector<R> normalizing_constants(const JacobiMatrix<R>&);                                      \
    template std::vector<R> normalizing_constants(const JacobiMatrix<R>&, std::span<const R>);                  \
    template class WeylFunction<R>;                                                                             \
    template Complex<R> riccati_next(const Complex<R>&, const R&, const R&, const Complex<R>&, const R&);       \
    template AsymptoticCoefficients<R> asymptotic_coeffs(const JacobiMatrix<R>&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
