#pragma once

// Mass-spring chains attached to a wall: conversion to and from Jacobi
// matrices, the continued fraction for k_j/m_j, and a scan for the seeds
// k_1/m_1 a given matrix admits.

#include <cstddef>
#include <span>
#include <vector>

#include "jacobi/core.hpp"

namespace jacobi {

/// masses m_1..m_N > 0; springs k_1..k_N > 0 where k_j joins mass j to mass
/// j-1 (k_1 to the wall); terminal spring k_{N+1} >= 0 (0 = free end).
template <Real R>
class MassSpringChain {
public:
    /// Throws InvalidArgument on empty input, size mismatch, or an entry out
    /// of range.
    MassSpringChain(std::vector<R> masses, std::vector<R> springs, R terminal_spring);

    std::size_t size() const noexcept { return masses_.size(); }
    std::span<const R> masses() const noexcept { return masses_; }
    std::span<const R> springs() const noexcept { return springs_; }
    const R& terminal_spring() const noexcept { return terminal_; }

    /// k_j for j = 1..N+1.
    const R& spring(std::size_t j) const { return j == springs_.size() + 1 ? terminal_ : springs_.at(j - 1); }

    friend bool operator==(const MassSpringChain&, const MassSpringChain&) = default;

private:
    std::vector<R> masses_;
    std::vector<R> springs_;
    R terminal_;
};

/// q_j = -(k_{j+1} + k_j) / m_j, b_j = k_{j+1} / sqrt(m_j m_{j+1}).
template <Real R>
JacobiMatrix<R> chain_to_jacobi(const MassSpringChain<R>& chain);

/// k_{j+1} = -(k_j + q_j m_j), m_{j+1} = k_{j+1}^2 / (m_j b_j^2), then the
/// terminal k_{N+1} = -(k_N + q_N m_N). Throws InadmissibleSeed with step j
/// when k_{j+1} or m_{j+1} is not positive (a terminal spring within
/// 1e-13 * (k_N + |q_N| m_N) of zero is clamped to 0).
template <Real R>
MassSpringChain<R> jacobi_to_chain(const JacobiMatrix<R>& matrix, const R& k1, const R& m1);

template <Real R>
struct FrequencyRatios {
    std::vector<R> ratios;  ///< r_j = k_j / m_j, j = 1..N
    R terminal_ratio;       ///< k_{N+1} / m_N
};

/// x_j = q_j + r_j, r_{j+1} = -b_j^2 / x_j. Throws InvalidArgument for
/// r1 <= 0, DivisionNearZero (step j) when |x_j| < 1e-13 (|q_j| + r_j), and
/// InadmissibleSeed (step j) when r_{j+1} <= 0 or the terminal ratio is
/// negative.
template <Real R>
FrequencyRatios<R> frequency_ratio_chain(const JacobiMatrix<R>& matrix, const R& r1);

template <Real R>
struct RatioInterval {
    R lower;
    R upper;
    bool open_below = false;  ///< admissible down to the bottom of the grid
    bool open_above = false;  ///< admissible up to the top of the grid
};

template <Real R>
struct RatioScan {
    std::vector<RatioInterval<R>> intervals;  ///< empty when no grid point is admissible
    R grid_min;
    R grid_max;
    std::size_t grid_points;
};

/// Logarithmic grid on (1e-9 |q_1|, |q_1|) (r1 < -q_1 is necessary), with
/// interval endpoints refined by bisection to `relative_precision`.
template <Real R>
RatioScan<R> admissible_ratio_scan(const JacobiMatrix<R>& matrix, std::size_t grid_points = 400,
                                   const R& relative_precision = R(1e-12));

}  // namespace jacobi
