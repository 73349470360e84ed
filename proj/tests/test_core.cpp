#include <gtest/gtest.h>

#include "jacobi/core.hpp"
#include "oracle.hpp"

using namespace jacobi;

namespace {

template <class R>
ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::PostconditionViolated;
}

std::vector<double> v(std::initializer_list<double> x) {
    return x;
}

}  // namespace

TEST(JacobiMatrix, ValidatesShapeAndSigns) {
    EXPECT_NO_THROW(JacobiMatrix<double>(v({-2, -2, -2}), v({1, 1})));
    EXPECT_NO_THROW(JacobiMatrix<double>(v({3}), {}));
    EXPECT_EQ(code_of<double>([] { JacobiMatrix<double>({}, {}); }), ErrorCode::InvalidMatrix);
    EXPECT_EQ(code_of<double>([] { JacobiMatrix<double>(v({1, 2}), v({1, 1})); }), ErrorCode::InvalidMatrix);
    EXPECT_EQ(code_of<double>([] { JacobiMatrix<double>(v({1, 2}), v({0})); }), ErrorCode::InvalidMatrix);
    EXPECT_EQ(code_of<double>([] { JacobiMatrix<double>(v({1, 2}), v({-1})); }), ErrorCode::InvalidMatrix);
    EXPECT_EQ(code_of<double>([] { JacobiMatrix<double>(v({NAN, 2}), v({1})); }), ErrorCode::InvalidMatrix);
}

TEST(JacobiMatrix, TruncationDropsLeadingRows) {
    const JacobiMatrix<double> j(v({1, 2, 3}), v({4, 5}));
    const auto t = j.truncated();
    EXPECT_EQ(std::vector<double>(t.diagonal().begin(), t.diagonal().end()), v({2, 3}));
    EXPECT_EQ(std::vector<double>(t.off_diagonal().begin(), t.off_diagonal().end()), v({5}));
    EXPECT_EQ(j.truncated(2).size(), 1u);
    EXPECT_THROW((void)j.truncated(3), Error);
}

TEST(Theta, RejectsNonPositive) {
    EXPECT_THROW(Theta<double>(0.0), Error);
    EXPECT_THROW(Theta<double>(-1.0), Error);
    EXPECT_THROW(Theta<double>{INFINITY}, Error);
    EXPECT_TRUE(Theta<double>(1.0).is_identity());
}

TEST(ApplyTheta, ScalesOnlyTheFirstRow) {
    const JacobiMatrix<double> j(v({-2, -2, -2}), v({1, 1}));
    const auto p = apply_theta(j, Theta<double>(2.0));
    EXPECT_EQ(std::vector<double>(p.diagonal().begin(), p.diagonal().end()), v({-8, -2, -2}));
    EXPECT_EQ(std::vector<double>(p.off_diagonal().begin(), p.off_diagonal().end()), v({2, 1}));
    EXPECT_EQ(apply_theta(j, Theta<double>(1.0)), j);
}

TEST(ApplyTheta, DeterminantScalesByThetaSquared) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto j = oracle::random_jacobi<double>(rng, 2 + trial % 8);
        const double theta = 0.3 + 0.05 * trial;
        const double det = oracle::determinant(oracle::dense(j));
        const double det_theta = oracle::determinant(oracle::dense(apply_theta(j, Theta<double>(theta))));
        EXPECT_NEAR(det_theta, theta * theta * det, 1e-10 * (1 + std::abs(theta * theta * det)));
    }
}

TEST(IndexedSpectrum, SignedIndicesSkipZeroWhenAbsent) {
    const auto s = enumerate_spectrum<double>(v({-3, -1, 2}));
    EXPECT_EQ(s.indices(), (std::vector<int>{-2, -1, 1}));
    EXPECT_FALSE(s.has_zero());
    EXPECT_EQ(s.at(-2), -3);
    EXPECT_EQ(s.at(1), 2);
    EXPECT_EQ(code_of<double>([&] { (void)s.position_of(0); }), ErrorCode::IndexNotFound);
    EXPECT_EQ(code_of<double>([&] { (void)s.position_of(2); }), ErrorCode::IndexNotFound);
}

TEST(IndexedSpectrum, ZeroGetsIndexZeroAndExactValue) {
    const auto s = enumerate_spectrum<double>(v({-1, 1e-14, 3, 4}));
    EXPECT_EQ(s.indices(), (std::vector<int>{-1, 0, 1, 2}));
    EXPECT_TRUE(s.has_zero());
    EXPECT_EQ(s.exact(0), 0.0);
    EXPECT_EQ(s.at(0), 1e-14);
    EXPECT_EQ(s.positive_count(), 2u);
}

TEST(IndexedSpectrum, RejectsDuplicatesAndTwoZeros) {
    EXPECT_EQ(code_of<double>([] { (void)enumerate_spectrum<double>(v({1, 1})); }), ErrorCode::DuplicateValues);
    EXPECT_EQ(code_of<double>([] { (void)enumerate_spectrum<double>(v({2, 1})); }), ErrorCode::DuplicateValues);
    EXPECT_EQ(code_of<double>([] { (void)enumerate_spectrum<double>(v({-1e-12, 1e-12, 1}), 1e-10); }),
              ErrorCode::MultipleZeros);
}

TEST(Interlacing, PositiveOnlyRightShift) {
    const auto r = check_interlacing(enumerate_spectrum<double>(v({1, 3})), enumerate_spectrum<double>(v({2, 4})));
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(r.shift, Shift::RightPositive);
}

TEST(Interlacing, MirroredAcrossZero) {
    const auto r = check_interlacing(enumerate_spectrum<double>(v({-3, -1, 1, 3})),
                                     enumerate_spectrum<double>(v({-4, -2, 2, 4})));
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(r.shift, Shift::RightPositive);
    const auto l = check_interlacing(enumerate_spectrum<double>(v({-4, -2, 2, 4})),
                                     enumerate_spectrum<double>(v({-3, -1, 1, 3})));
    ASSERT_TRUE(l.ok);
    EXPECT_EQ(l.shift, Shift::LeftPositive);
}

TEST(Interlacing, TwoMusAboveTheLastLambdaFail) {
    const auto r = check_interlacing(enumerate_spectrum<double>(v({1, 2})), enumerate_spectrum<double>(v({3, 4})));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failure, ErrorCode::NotInterlacing);
    EXPECT_EQ(r.violation_index, 1);
}

TEST(Interlacing, SameDirectionOnBothHalfLinesIsInconsistent) {
    const auto r = check_interlacing(enumerate_spectrum<double>(v({-2, 1})), enumerate_spectrum<double>(v({-1, 2})));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failure, ErrorCode::InconsistentShift);
}

TEST(Interlacing, ZeroInOneSpectrumOnly) {
    const auto r = check_interlacing(enumerate_spectrum<double>(v({0, 2})), enumerate_spectrum<double>(v({1, 3})));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failure, ErrorCode::ZeroMismatch);
}

TEST(Interlacing, ZeroCasePattern) {
    const auto r = check_interlacing(enumerate_spectrum<double>(v({-2, 0, 2})),
                                     enumerate_spectrum<double>(v({-3, 0, 3})));
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(r.shift, Shift::RightPositive);
}

TEST(PairSpectra, ErrorsCarryCodes) {
    const auto l = enumerate_spectrum<double>(v({1, 2}));
    EXPECT_EQ(code_of<double>([&] { (void)pair_spectra<double>(l, v({1.5}), 1e-10); }),
              ErrorCode::CardinalityMismatch);
    EXPECT_EQ(code_of<double>([&] { (void)pair_spectra<double>(l, v({3, 4}), 1e-10); }), ErrorCode::NotInterlacing);
    const auto p = pair_spectra<double>(l, v({1.5, 3}), 1e-10);
    EXPECT_EQ(p.shift, Shift::RightPositive);
    EXPECT_EQ(p.mus.at(2), 3);
}

TEST(PairSpectra, SeparationTreatsNearlyEqualValuesAsCoincident) {
    const auto l = enumerate_spectrum<double>(v({1, 2}));
    EXPECT_NO_THROW((void)pair_spectra<double>(l, v({1 + 1e-12, 3}), 1e-10));
    EXPECT_THROW((void)pair_spectra<double>(l, v({1 + 1e-12, 3}), 1e-10, 1e-9), Error);
}

TEST(ShiftNames, RoundTrip) {
    for (Shift s : {Shift::RightPositive, Shift::LeftPositive, Shift::Degenerate}) {
        EXPECT_EQ(shift_from_string(to_string(s)), s);
    }
    EXPECT_THROW(shift_from_string("sideways"), Error);
}

TEST(SpectralMeasure, Validation) {
    EXPECT_NO_THROW(SpectralMeasure<double>(v({-1, 1}), v({0.5, 0.5})));
    EXPECT_EQ(code_of<double>([] { SpectralMeasure<double>(v({-1, 1}), v({1.5, -0.5})); }),
              ErrorCode::NonPositiveWeight);
    EXPECT_EQ(code_of<double>([] { SpectralMeasure<double>(v({-1, 1}), v({0.5, 0.6})); }),
              ErrorCode::NormalizationFailure);
    EXPECT_EQ(code_of<double>([] { SpectralMeasure<double>(v({1, 1}), v({0.5, 0.5})); }),
              ErrorCode::InvalidArgument);
}

TEST(Real, FormatParsesBackExactly) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        EXPECT_EQ(parse_real<double>(format_real(x)), x);
        const Extended y = Extended(x) / 3;
        EXPECT_EQ(parse_real<Extended>(format_real(y)), y);
    }
    EXPECT_EQ(format_real(Extended(-2)), "-2");
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_EQ(parse_real<double>("+0.3e1"), 3.0);
    EXPECT_THROW(parse_real<double>("1.0abc"), Error);
    EXPECT_THROW(parse_real<Extended>(""), Error);
}

TEST(ApplyTheta, WorkedExamples) {
    const JacobiMatrix<double> j(v({1, 2}), v({1}));
    EXPECT_EQ(apply_theta(j, Theta<double>(1.0)), j);
    EXPECT_EQ(apply_theta(j, Theta<double>(2.0)), JacobiMatrix<double>(v({4, 2}), v({2})));
    EXPECT_EQ(apply_theta(JacobiMatrix<double>(v({-2, -2, -2}), v({1, 1})), Theta<double>(0.5)),
              JacobiMatrix<double>(v({-0.5, -2, -2}), v({0.5, 1})));
}

TEST(IndexedSpectrum, WorkedExamples) {
    const auto a = enumerate_spectrum<double>(v({-3, -1, 2, 5}), 1e-10);
    EXPECT_EQ(a.indices(), (std::vector<int>{-2, -1, 1, 2}));
    EXPECT_EQ(a.at(2), 5);
    const auto b = enumerate_spectrum<double>(v({-3, 0, 2}), 1e-10);
    EXPECT_EQ(b.indices(), (std::vector<int>{-1, 0, 1}));
    const auto c = enumerate_spectrum<double>(v({1, 2, 3}), 1e-10);
    EXPECT_EQ(c.indices(), (std::vector<int>{1, 2, 3}));
}

TEST(PairSpectra, WorkedExamples) {
    const auto a = pair_spectra<double>(enumerate_spectrum<double>(v({1, 3})), v({2, 4}), 1e-10);
    EXPECT_EQ(a.shift, Shift::RightPositive);
    EXPECT_EQ(a.mus.at(1), 2);
    EXPECT_EQ(a.mus.at(2), 4);
    const auto b = pair_spectra<double>(enumerate_spectrum<double>(v({-2, 1})), v({-3, 2}), 1e-10);
    EXPECT_EQ(b.shift, Shift::RightPositive);
    EXPECT_EQ(code_of<double>([] {
                  (void)pair_spectra<double>(enumerate_spectrum<double>(v({1, 3})), v({1.5, 2}), 1e-10);
              }),
              ErrorCode::NotInterlacing);
}
