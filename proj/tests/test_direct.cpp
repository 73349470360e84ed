#include <gtest/gtest.h>

#include "jacobi/direct.hpp"
#include "oracle.hpp"

using namespace jacobi;

namespace {

const JacobiMatrix<double> two({0.0, 0.0}, {1.0});
const JacobiMatrix<double> three({-2.0, -2.0, -2.0}, {1.0, 1.0});

// J shifted so that its k-th eigenvalue sits at zero.
template <class R>
JacobiMatrix<R> make_singular(const JacobiMatrix<R>& j, std::size_t k) {
    const R lambda = eigen(j).eigenvalues.at(k);
    std::vector<R> q(j.diagonal().begin(), j.diagonal().end());
    for (auto& x : q) x -= lambda;
    return JacobiMatrix<R>(std::move(q), std::vector<R>(j.off_diagonal().begin(), j.off_diagonal().end()));
}

}  // namespace

TEST(SpectraPair, TwoByTwo) {
    const auto r = spectra_pair(two, Theta<double>(2.0));
    EXPECT_EQ(r.pair.shift, Shift::RightPositive);
    EXPECT_NEAR(r.pair.lambdas.at(-1), -1, 1e-15);
    EXPECT_NEAR(r.pair.lambdas.at(1), 1, 1e-15);
    EXPECT_NEAR(r.pair.mus.at(-1), -2, 1e-15);
    EXPECT_NEAR(r.pair.mus.at(1), 2, 1e-15);
    EXPECT_TRUE(r.diagnostics.pass);
    EXPECT_FALSE(r.degenerate);
}

TEST(SpectraPair, ThetaOneIsDegenerate) {
    const auto r = spectra_pair(three, Theta<double>(1.0));
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.pair.shift, Shift::Degenerate);
    for (int k : r.pair.lambdas.indices()) EXPECT_EQ(r.pair.lambdas.at(k), r.pair.mus.at(k));
}

TEST(SpectraPair, ShrinkingFirstEntryShiftsLeftOnPositives) {
    const auto r = spectra_pair(three, Theta<double>(0.5));
    EXPECT_EQ(r.pair.shift, Shift::LeftPositive);
    // Every eigenvalue is negative here; LEFT_POS puts each mu right of its lambda.
    for (int k : r.pair.lambdas.indices()) {
        EXPECT_LT(k, 0);
        EXPECT_GT(r.pair.mus.at(k), r.pair.lambdas.at(k));
    }
    const auto ref = oracle::sturm_eigenvalues(apply_theta(three, Theta<double>(0.5)));
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(r.pair.mus.values()[i], ref[i], 1e-13);
}

// Random spectra need Extended: with b_k as small as 0.1 the first
// eigenvector components reach 1e-10 and mu_k - lambda_k ~ u_1^2 falls below
// double resolution.
TEST(SpectraPair, ShiftFollowsSignOfThetaMinusOne) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto j = oracle::random_jacobi<Extended>(rng, 2 + trial % 19);
        const double theta = u(rng);
        const auto r = spectra_pair(j, Theta<Extended>(Extended(theta)));
        EXPECT_EQ(r.pair.shift, theta > 1 ? Shift::RightPositive : Shift::LeftPositive) << trial;
        EXPECT_TRUE(r.diagnostics.pass) << trial;
        ASSERT_TRUE(r.diagnostics.determinant_residual.has_value());
    }
}

TEST(SpectraPair, ZeroIsPreserved) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto j = make_singular(oracle::random_jacobi<Extended>(rng, n), trial % n);
        const auto r = spectra_pair(j, Theta<Extended>(trial % 2 ? Extended(1.7) : Extended(0.6)));
        EXPECT_TRUE(r.pair.lambdas.has_zero());
        EXPECT_TRUE(r.pair.mus.has_zero());
        EXPECT_TRUE(r.diagnostics.zero_preserved);
        EXPECT_FALSE(r.diagnostics.determinant_residual.has_value());
        EXPECT_TRUE(r.diagnostics.pass);
    }
}

TEST(SpectraPair, DeterminantRatioIsThetaSquared) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const auto j = oracle::random_jacobi<double>(rng, 2 + trial % 6);
        const double theta = 0.4 + 0.1 * trial;
        if (theta == 1.0) continue;
        const auto r = spectra_pair(j, Theta<double>(theta));
        double ratio = oracle::determinant(oracle::dense(apply_theta(j, Theta<double>(theta)))) /
                       oracle::determinant(oracle::dense(j));
        EXPECT_NEAR(ratio, theta * theta, 1e-8 * theta * theta);
        EXPECT_LE(*r.diagnostics.determinant_residual, 1e-9);
    }
}

TEST(EigenvalueDerivative, TwoByTwoAtThetaOne) {
    EXPECT_NEAR(eigenvalue_derivative(two, Theta<double>(1.0), 1), 1.0, 1e-14);
    EXPECT_NEAR(eigenvalue_derivative(two, Theta<double>(1.0), -1), -1.0, 1e-14);
    EXPECT_THROW((void)eigenvalue_derivative(two, Theta<double>(1.0), 2), Error);
    EXPECT_THROW((void)eigenvalue_derivative(two, Theta<double>(1.0), 0), Error);
}

TEST(EigenvalueDerivative, ZeroEigenvalueIsStationary) {
    const JacobiMatrix<double> singular({1.0, 1.0}, {1.0});  // eigenvalues 0 and 2
    EXPECT_EQ(eigenvalue_derivative(singular, Theta<double>(1.3), 0), 0.0);
}

// Central differences at h and h/2 combined by Richardson extrapolation, so
// the comparison is not dominated by the O(h^2) truncation error that near
// avoided crossings produce.
TEST(EigenvalueDerivative, MatchesExtrapolatedDifference) {
    using X = Extended;
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    const X h(1e-5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto j = oracle::random_jacobi<X>(rng, 1 + trial % 20);
        const X theta(u(rng));
        const auto at = [&](const X& t) { return eigen(apply_theta(j, Theta<X>(t))).eigenvalues; };
        const auto central = [&](const X& step) {
            const auto up = at(theta * (1 + step));
            const auto down = at(theta * (1 - step));
            std::vector<X> out(up.size());
            for (std::size_t i = 0; i < up.size(); ++i) out[i] = (up[i] - down[i]) / (2 * theta * step);
            return out;
        };
        const auto coarse = central(h);
        const auto fine = central(h / 2);
        const auto centre = enumerate_spectrum<X>(at(theta));
        for (std::size_t i = 0; i < centre.size(); ++i) {
            const int k = centre.indices()[i];
            const X fd = (4 * fine[i] - coarse[i]) / 3;
            const X d = eigenvalue_derivative(j, Theta<X>(theta), k);
            const X scale = std::max(X(1), abs(centre.values()[i]));
            EXPECT_LE(abs(d - fd), X(1e-6) * scale) << trial << " k=" << k;
        }
    }
}

TEST(EigenvalueDerivative, NearAvoidedCrossingPlainDifferenceIsTruncationLimited) {
    // Two eigenvalues 3e-3 apart: the plain h = 1e-5 difference misses by
    // about 1.2e-6 while the extrapolated one agrees to 1e-10.
    using X = Extended;
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    JacobiMatrix<double> jd({0.0}, {});
    double theta = 0;
    for (int trial = 0; trial <= 70; ++trial) {
        jd = oracle::random_jacobi<double>(rng, 1 + trial % 20);
        theta = u(rng);
    }
    const JacobiMatrix<X> j(std::vector<X>(jd.diagonal().begin(), jd.diagonal().end()),
                            std::vector<X>(jd.off_diagonal().begin(), jd.off_diagonal().end()));
    const auto at = [&](const X& t) { return eigen(apply_theta(j, Theta<X>(t))).eigenvalues; };
    const X t(theta);
    const X h(1e-5);
    const auto central = [&](const X& step, std::size_t i) {
        return (at(t * (1 + step))[i] - at(t * (1 - step))[i]) / (2 * t * step);
    };
    const std::size_t i = 6;  // k = 2
    const X d = eigenvalue_derivative(j, Theta<X>(t), 2);
    const X plain = central(h, i);
    const X extrapolated = (4 * central(h / 2, i) - plain) / 3;
    EXPECT_GT(abs(d - plain), X(1e-6));
    EXPECT_LT(abs(d - extrapolated), X(1e-10));
}

TEST(TraceShift, WorkedExamples) {
    const auto same = trace_shift(three, Theta<double>(1.2), Theta<double>(1.2));
    EXPECT_EQ(same.lhs, 0.0);
    EXPECT_EQ(same.rhs, 0.0);

    const auto a = trace_shift(JacobiMatrix<double>({3.0, 2.0}, {4.0}), Theta<double>(1.0), Theta<double>(2.0));
    EXPECT_EQ(a.rhs, 9.0);
    EXPECT_NEAR(a.lhs, 9.0, 1e-12);

    const auto b = trace_shift(three, Theta<double>(0.5), Theta<double>(1.5));
    EXPECT_EQ(b.rhs, -4.0);
    EXPECT_NEAR(b.lhs, -4.0, 1e-10);

    const auto c = trace_shift(JacobiMatrix<double>({-2.0, 0.5, 1.0}, {1.0, 2.0}), Theta<double>(1.0),
                               Theta<double>(2.0));
    EXPECT_EQ(c.rhs, -6.0);
    EXPECT_NEAR(c.lhs, -6.0, 1e-12);

    EXPECT_THROW((void)trace_shift(three, Theta<double>(2.0), Theta<double>(1.0)), Error);
}

TEST(TraceShift, HoldsOnRandomMatrices) {
    using X = Extended;
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto j = oracle::random_jacobi<X>(rng, 1 + trial % 25);
        double t1 = u(rng);
        double t2 = u(rng);
        if (t1 > t2) std::swap(t1, t2);
        const auto s = trace_shift(j, Theta<X>(X(t1)), Theta<X>(X(t2)));
        EXPECT_LE(abs(s.lhs - s.rhs), X(1e-9) * (1 + abs(j.diagonal()[0]) * t2 * t2));
    }
}

TEST(MRatio, TwoByTwoAtI) {
    const auto r = spectra_pair(two, Theta<double>(2.0));
    const Complex<double> i(0, 1);
    const auto product = mgoth_eval(r.pair, i);
    const auto via_m = mgoth_via_m(two, Theta<double>(2.0), i);
    EXPECT_NEAR(product.re, 2.5, 1e-14);
    EXPECT_NEAR(product.im, 0.0, 1e-14);
    EXPECT_NEAR(via_m.re, 2.5, 1e-14);
    EXPECT_NEAR(via_m.im, 0.0, 1e-14);
}

TEST(MRatio, IdentityPairIsOne) {
    const auto r = spectra_pair(three, Theta<double>(1.0));
    for (const Complex<double>& z : {Complex<double>(0, 1), Complex<double>(-3, 0.2), Complex<double>(5)}) {
        const auto v = mgoth_eval(r.pair, z);
        EXPECT_NEAR(v.re, 1.0, 1e-15);
        EXPECT_NEAR(v.im, 0.0, 1e-15);
    }
}

TEST(MRatio, TendsToOneAtInfinity) {
    std::mt19937_64 rng(36);
    const auto j = oracle::random_jacobi<double>(rng, 10);
    const auto r = spectra_pair(j, Theta<double>(2.5));
    EXPECT_LT(abs(mgoth_eval(r.pair, Complex<double>(0, 1e6)) - 1.0), 1e-4);
    EXPECT_LT(abs(mgoth_eval(r.pair, Complex<double>(1e6, 1)) - 1.0), 1e-4);
}

TEST(MRatio, ProductAndMFunctionFormsAgree) {
    using X = Extended;
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> re(-8, 8);
    std::uniform_real_distribution<double> im(0.5, 5);
    std::uniform_real_distribution<double> th(0.3, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto j = oracle::random_jacobi<X>(rng, 2 + trial);
        const Theta<X> theta(X(th(rng)));
        const auto r = spectra_pair(j, theta);
        const WeylFunction<X> weyl(j);
        for (int p = 0; p < 20; ++p) {
            const Complex<X> z(X(re(rng)), X(im(rng)));
            const auto a = mgoth_eval(r.pair, z);
            const auto b = mgoth_via_m(weyl, theta, z);
            EXPECT_LE(abs(a - b) / abs(b), X(1e-9));
        }
    }
}

TEST(MRatio, PoleProximityNearALambda) {
    const auto r = spectra_pair(two, Theta<double>(2.0));
    try {
        (void)mgoth_eval(r.pair, Complex<double>(1.0 + 1e-13));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PoleProximity);
    }
}

TEST(MRatio, LargeOrderDoesNotOverflow) {
    // Thousands of ratios near 1; a direct product would be fine, but the
    // individual partial products of numerators alone overflow.
    const std::size_t n = 3000;
    const JacobiMatrix<double> j(std::vector<double>(n, 0.0), std::vector<double>(n - 1, 40.0));
    const Theta<double> theta(1.1);
    const auto r = spectra_pair(j, theta);
    const Complex<double> z(3.0, 2.0);
    const auto a = mgoth_eval(r.pair, z);
    const auto b = mgoth_via_m(j, theta, z);
    EXPECT_TRUE(std::isfinite(a.re));
    EXPECT_LE(abs(a - b) / abs(b), 1e-8);
}
