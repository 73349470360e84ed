#include "jacobi/mass_spring.hpp"

#include <cmath>
#include <string>

namespace jacobi {
namespace {

template <Real R>
bool admits(const JacobiMatrix<R>& matrix, const R& r1) {
    try {
        (void)frequency_ratio_chain(matrix, r1);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// Shrinks [bad, good] (either order) until it is `precision`-narrow and
// returns the admissible end.
template <Real R>
R refine(const JacobiMatrix<R>& matrix, R bad, R good, const R& precision) {
    using std::abs;
    using std::max;
    for (int i = 0; i < 400 && abs(good - bad) > precision * max(abs(good), abs(bad)); ++i) {
        const R mid = (good + bad) / R(2);
        if (admits(matrix, mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    return good;
}

}  // namespace

template <Real R>
MassSpringChain<R>::MassSpringChain(std::vector<R> masses, std::vector<R> springs, R terminal_spring)
    : masses_(std::move(masses)), springs_(std::move(springs)), terminal_(std::move(terminal_spring)) {
    if (masses_.empty() || masses_.size() != springs_.size()) {
        throw Error(ErrorCode::InvalidArgument, "need as many springs as masses (" + std::to_string(masses_.size()) +
                                                    " masses, " + std::to_string(springs_.size()) + " springs)");
    }
    for (std::size_t j = 0; j < masses_.size(); ++j) {
        if (!(is_finite(masses_[j]) && masses_[j] > 0)) {
            throw Error(ErrorCode::InvalidArgument, "m_" + std::to_string(j + 1) + " must be finite and > 0");
        }
        if (!(is_finite(springs_[j]) && springs_[j] > 0)) {
            throw Error(ErrorCode::InvalidArgument, "k_" + std::to_string(j + 1) + " must be finite and > 0");
        }
    }
    if (!(is_finite(terminal_) && terminal_ >= 0)) {
        throw Error(ErrorCode::InvalidArgument, "terminal spring must be finite and >= 0");
    }
}

template <Real R>
JacobiMatrix<R> chain_to_jacobi(const MassSpringChain<R>& chain) {
    using std::sqrt;
    const std::size_t n = chain.size();
    const auto m = chain.masses();
    std::vector<R> q(n);
    std::vector<R> b(n - 1);
    for (std::size_t j = 1; j <= n; ++j) {
        q[j - 1] = -(chain.spring(j + 1) + chain.spring(j)) / m[j - 1];
        if (j < n) b[j - 1] = chain.spring(j + 1) / sqrt(m[j - 1] * m[j]);
    }
    return JacobiMatrix<R>(std::move(q), std::move(b));
}

template <Real R>
MassSpringChain<R> jacobi_to_chain(const JacobiMatrix<R>& matrix, const R& k1, const R& m1) {
    using std::abs;
    if (!(k1 > 0 && m1 > 0 && is_finite(k1) && is_finite(m1))) {
        throw Error(ErrorCode::InvalidArgument, "seed k1, m1 must be finite and > 0");
    }
    const auto q = matrix.diagonal();
    const auto b = matrix.off_diagonal();
    const std::size_t n = matrix.size();
    std::vector<R> k{k1};
    std::vector<R> m{m1};
    for (std::size_t j = 1; j < n; ++j) {
        const R k_next = -(k[j - 1] + q[j - 1] * m[j - 1]);
        if (!(k_next > 0)) {
            throw Error(ErrorCode::InadmissibleSeed,
                        "k_" + std::to_string(j + 1) + " = " + format_real(k_next) + " at step " + std::to_string(j),
                        static_cast<long>(j));
        }
        const R m_next = k_next * k_next / (m[j - 1] * b[j - 1] * b[j - 1]);
        if (!(m_next > 0 && is_finite(m_next))) {
            throw Error(ErrorCode::InadmissibleSeed,
                        "m_" + std::to_string(j + 1) + " = " + format_real(m_next) + " at step " + std::to_string(j),
                        static_cast<long>(j));
        }
        k.push_back(k_next);
        m.push_back(m_next);
    }
    R terminal = -(k[n - 1] + q[n - 1] * m[n - 1]);
    if (terminal < 0) {
        if (abs(terminal) <= R(1e-13) * (k[n - 1] + abs(q[n - 1]) * m[n - 1])) {
            terminal = R(0);
        } else {
            throw Error(ErrorCode::InadmissibleSeed,
                        "terminal spring k_" + std::to_string(n + 1) + " = " + format_real(terminal) + " at step " +
                            std::to_string(n),
                        static_cast<long>(n));
        }
    }
    return MassSpringChain<R>(std::move(m), std::move(k), terminal);
}

template <Real R>
FrequencyRatios<R> frequency_ratio_chain(const JacobiMatrix<R>& matrix, const R& r1) {
    using std::abs;
    if (!(r1 > 0 && is_finite(r1))) throw Error(ErrorCode::InvalidArgument, "r1 must be finite and > 0");
    const auto q = matrix.diagonal();
    const auto b = matrix.off_diagonal();
    const std::size_t n = matrix.size();
    FrequencyRatios<R> out{{r1}, R(0)};
    for (std::size_t j = 1; j < n; ++j) {
        const R r = out.ratios.back();
        const R x = q[j - 1] + r;
        if (abs(x) < R(1e-13) * (abs(q[j - 1]) + r)) {
            throw Error(ErrorCode::DivisionNearZero, "continued fraction pole at step " + std::to_string(j),
                        static_cast<long>(j));
        }
        const R r_next = -b[j - 1] * b[j - 1] / x;
        if (!(r_next > 0)) {
            throw Error(ErrorCode::InadmissibleSeed,
                        "r_" + std::to_string(j + 1) + " = " + format_real(r_next) + " at step " + std::to_string(j),
                        static_cast<long>(j));
        }
        out.ratios.push_back(r_next);
    }
    const R r = out.ratios.back();
    const R x = q[n - 1] + r;
    if (x > 0) {
        if (x <= R(1e-13) * (abs(q[n - 1]) + r)) {
            out.terminal_ratio = R(0);
            return out;
        }
        throw Error(ErrorCode::InadmissibleSeed,
                    "terminal ratio " + format_real(R(-x)) + " at step " + std::to_string(n), static_cast<long>(n));
    }
    out.terminal_ratio = x == 0 ? R(0) : R(-x);
    return out;
}

template <Real R>
RatioScan<R> admissible_ratio_scan(const JacobiMatrix<R>& matrix, std::size_t grid_points,
                                   const R& relative_precision) {
    using std::log;
    using std::exp;
    const R q1 = matrix.diagonal()[0];
    RatioScan<R> out{{}, R(0), R(0), grid_points};
    if (!(q1 < 0) || grid_points < 2) return out;

    const R top = -q1;
    const R bottom = R(1e-9) * top;
    const R log_bottom = log(bottom);
    const R log_span = log(top) - log_bottom;
    std::vector<R> grid(grid_points);
    std::vector<char> ok(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        // Cell midpoints, so neither end of the range (r1 = -q1 is a pole) is sampled.
        grid[i] = exp(log_bottom + log_span * R((static_cast<double>(i) + 0.5) / static_cast<double>(grid_points)));
        ok[i] = admits(matrix, grid[i]);
    }
    out.grid_min = grid.front();
    out.grid_max = grid.back();

    for (std::size_t i = 0; i < grid_points;) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < grid_points && ok[j + 1]) ++j;
        RatioInterval<R> interval{grid[i], grid[j], i == 0, j + 1 == grid_points};
        if (i > 0) interval.lower = refine(matrix, grid[i - 1], grid[i], relative_precision);
        if (j + 1 < grid_points) interval.upper = refine(matrix, grid[j + 1], grid[j], relative_precision);
        out.intervals.push_back(interval);
        i = j + 1;
    }
    return out;
}

#define JACOBI_INSTANTIATE(R)                                                                  \
    template class MassSpringChain<R>;                                                         \
    template JacobiMatrix<R> chain_to_jacobi(const MassSpringChain<R>&);                       \
    template MassSpringChain<R> jacobi_to_chain(const JacobiMatrix<R>&, const R&, const R&);   \
    template FrequencyRatios<R> frequency_ratio_chain(const JacobiMatrix<R>&, const R&);       \
    template RatioScan<R> admissible_ratio_scan(const JacobiMatrix<R>&, std::size_t, const R&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
