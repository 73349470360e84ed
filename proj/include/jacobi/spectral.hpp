#pragma once

// Spectral kernel for finite Jacobi matrices: eigenvalues with first
// eigenvector components, orthogonal polynomials of the first and second
// kind, normalizing constants, the Weyl m-function and its Riccati step.

#include <cstddef>
#include <span>
#include <vector>

#include "jacobi/complex.hpp"
#include "jacobi/core.hpp"

namespace jacobi {

template <Real R>
struct EigenDecomposition {
    std::vector<R> eigenvalues;       ///< strictly increasing
    std::vector<R> first_components;  ///< u_1(n) > 0 of the unit eigenvectors

    /// Spectral weights u_1(n)^2 (= 1 / alpha_n).
    std::vector<R> weights() const;
};

/// Implicit-shift QL on the tridiagonal, carrying only the first row of the
/// eigenvector matrix: O(N^2). Throws ConvergenceFailure (with the remaining
/// off-diagonal magnitude as residual) after `max_iterations` sweeps on one
/// eigenvalue, DegenerateSpectrum if two computed eigenvalues coincide.
template <Real R>
EigenDecomposition<R> eigen(const JacobiMatrix<R>& matrix, int max_iterations = 60);

/// P_0..P_n and Q_0..Q_n at one point, stored as mantissas with a shared
/// binary exponent per index (true value = mantissa * 2^exponent). The
/// recurrence is rescaled every 50 steps so large |zeta| or large n cannot
/// overflow. For k = N the missing b_N is taken as 1, which makes P_N
/// proportional to det(zeta - J).
template <Real R, class Point>
class PolynomialTable {
public:
    PolynomialTable(std::vector<Point> p, std::vector<Point> q, std::vector<long> exponents)
        : p_(std::move(p)), q_(std::move(q)), exponents_(std::move(exponents)) {}

    std::size_t degree() const noexcept { return p_.size() - 1; }
    Point p(std::size_t k) const;
    Point q(std::size_t k) const;

    std::span<const Point> p_mantissas() const noexcept { return p_; }
    std::span<const Point> q_mantissas() const noexcept { return q_; }
    std::span<const long> exponents() const noexcept { return exponents_; }

private:
    std::vector<Point> p_;
    std::vector<Point> q_;
    std::vector<long> exponents_;
};

template <Real R, class Point>
PolynomialTable<R, Point> poly_table(const JacobiMatrix<R>& matrix, const Point& zeta, std::size_t n);

/// |b_k (P_{k-1} Q_k - P_k Q_{k-1}) - 1| relative to the size of the two
/// products, evaluated on the scaled values. Requires 1 <= k <= min(n, N-1).
template <Real R, class Point>
R wronskian_residual(const PolynomialTable<R, Point>& table, const JacobiMatrix<R>& matrix, std::size_t k);

/// alpha_n = sum_{k<N} P_k(lambda_n)^2, in the eigenvalue order of eigen().
/// P_k(lambda_n) is read off an inverse-iteration eigenvector as
/// u_{k+1}/u_1, so the sum stays accurate when the eigenvector decays.
template <Real R>
std::vector<R> normalizing_constants(const JacobiMatrix<R>& matrix);

/// Same, reusing eigenvalues already computed for `matrix`.
template <Real R>
std::vector<R> normalizing_constants(const JacobiMatrix<R>& matrix, std::span<const R> eigenvalues);

/// m(zeta) = <e_1, (J - zeta)^{-1} e_1> = sum_n u_1(n)^2 / (lambda_n - zeta),
/// evaluated from a cached eigen-decomposition.
template <Real R>
class WeylFunction {
public:
    explicit WeylFunction(const JacobiMatrix<R>& matrix);
    explicit WeylFunction(EigenDecomposition<R> decomposition);

    /// Throws PoleProximity when zeta lies within 1e-8 times the local
    /// eigenvalue gap of a pole.
    Complex<R> operator()(const Complex<R>& zeta) const;

    const EigenDecomposition<R>& decomposition() const noexcept { return decomposition_; }
    std::span<const R> weights() const noexcept { return weights_; }

private:
    void check_pole_distance(const Complex<R>& zeta) const;

    EigenDecomposition<R> decomposition_;
    std::vector<R> weights_;
    std::vector<R> pole_tolerance_;
};

template <Real R>
Complex<R> weyl_m(const JacobiMatrix<R>& matrix, const Complex<R>& zeta) {
    return WeylFunction<R>(matrix)(zeta);
}

/// One step of b_n^2 m_n = q_n - zeta - 1/m_{n-1}: the m-function of the
/// matrix with one more leading row removed. Throws ZeroMFunction when
/// |m_prev| <= tolerance.
template <Real R>
Complex<R> riccati_next(const Complex<R>& m_prev, const R& q_n, const R& b_n, const Complex<R>& zeta,
                        const R& tolerance = R(0));

/// Moments (s_0, s_1, s_2) of the spectral measure of J; they are the
/// coefficients of -1/zeta, -1/zeta^2, -1/zeta^3 in the expansion of m.
template <Real R>
struct AsymptoticCoefficients {
    R s0;
    R s1;
    R s2;
};

/// Computes the moments from the eigen-data and checks them against
/// (1, q_1, q_1^2 + b_1^2); throws PostconditionViolated on disagreement.
template <Real R>
AsymptoticCoefficients<R> asymptotic_coeffs(const JacobiMatrix<R>& matrix);

}  // namespace jacobi
