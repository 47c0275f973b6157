#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fokas_heat/quadrature.hpp"
#include "fokas_heat/transforms.hpp"

using namespace fokas_heat;

namespace {

ExpPolynomial poly(double coef, int power, double rate) { return {{{coef, power, rate}}}; }

// Truncated Gauss-Legendre transform of p over [lo, hi] at complex k.
cplx numeric_transform(const ExpPolynomial& p, double lo, double hi, cplx k) {
    auto re = [&](double x) { return (std::exp(-I * k * x) * p(x)).real(); };
    auto im = [&](double x) { return (std::exp(-I * k * x) * p(x)).imag(); };
    return {integrate_interval(re, lo, hi, 400, 32), integrate_interval(im, lo, hi, 400, 32)};
}

}  // namespace

TEST(HalfLine, ExponentialAtZero) {
    const auto f = halfline_transform(poly(1, 0, 1), HalfLine::Left);
    EXPECT_NEAR(std::abs(f(0.0) - 1.0), 0.0, 1e-15);
}

TEST(HalfLine, LeftNarrowPeak) {
    const auto f = halfline_transform(poly(1, 2, 625), HalfLine::Left);
    for (cplx k : {cplx{3.0, 0.5}, cplx{-40.0, 10.0}, cplx{100.0, 0.0}}) {
        const cplx closed = 2.0 / std::pow(625.0 - I * k, 3);
        EXPECT_LT(std::abs(f(k) - closed), 1e-14 * std::abs(closed));
        const cplx num = numeric_transform(poly(1, 2, 625), -0.1, 0.0, k);
        EXPECT_LT(std::abs(f(k) - num), 1e-9 * std::abs(closed));
    }
}

TEST(HalfLine, RightNarrowPeak) {
    const auto f = halfline_transform(poly(1, 2, -900), HalfLine::Right);
    for (cplx k : {cplx{3.0, -0.5}, cplx{-40.0, -10.0}, cplx{100.0, 0.0}}) {
        const cplx closed = 2.0 / std::pow(900.0 + I * k, 3);
        EXPECT_LT(std::abs(f(k) - closed), 1e-14 * std::abs(closed));
        const cplx num = numeric_transform(poly(1, 2, -900), 0.0, 0.1, k);
        EXPECT_LT(std::abs(f(k) - num), 1e-9 * std::abs(closed));
    }
}

TEST(HalfLine, ShiftedEndpointMatchesQuadrature) {
    const auto p = poly(1, 1, 2.0);
    const auto f = halfline_transform(p, HalfLine::Left, -1.0);
    const cplx k{1.5, 0.7};
    EXPECT_LT(std::abs(f(k) - numeric_transform(p, -25.0, -1.0, k)), 1e-11);
}

TEST(HalfLine, WrongDecaySignThrows) {
    EXPECT_THROW(halfline_transform(poly(1, 0, -1), HalfLine::Left), Error);
    EXPECT_THROW(halfline_transform(poly(1, 0, 1), HalfLine::Right), Error);
}

TEST(HalfLine, EvaluationOutsideValidityThrows) {
    const auto f = halfline_transform(poly(1, 0, 1), HalfLine::Left);
    EXPECT_EQ(f.validity(), Validity::UpperHalfPlane);
    try {
        f(cplx{0.0, -2.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TransformValidity);
    }
}

TEST(HalfLine, ConjugateSymmetryForRealData) {
    // Real data: F(-conj k) = conj F(k).
    const auto f = halfline_transform(poly(0.7, 3, 4.0), HalfLine::Left);
    for (cplx k : {cplx{2.0, 0.0}, cplx{-5.0, 1.0}, cplx{0.3, 7.0}})
        EXPECT_LT(std::abs(f(-std::conj(k)) - std::conj(f(k))), 1e-14 * std::abs(f(k)));
}

TEST(Interval, UnitProfile) {
    const double b = 1.3;
    const auto f = interval_transform(SampledInterval{[](double) { return 1.0; }, 0.0, b, 64});
    for (cplx k : {cplx{2.0, 0.0}, cplx{-3.0, 1.5}, cplx{0.5, -4.0}}) {
        const cplx exact = (1.0 - std::exp(-I * k * b)) / (I * k);
        EXPECT_LT(std::abs(f(k) - exact), 1e-13 * std::max(1.0, std::abs(exact)));
    }
    EXPECT_NEAR(f(0.0).real(), b, 1e-14);
}

TEST(Interval, SineAtZero) {
    const auto f = interval_transform(SampledInterval{[](double x) { return std::sin(std::numbers::pi * x); }, 0, 1, 64});
    EXPECT_NEAR(f(0.0).real(), 2.0 / std::numbers::pi, 1e-14);
    EXPECT_NEAR(f(0.0).imag(), 0.0, 1e-15);
}

TEST(Interval, LargeImaginaryKStaysAccurate) {
    const auto f = interval_transform(SampledInterval{[](double) { return 1.0; }, -1.0, 0.0, 64});
    const cplx k{5.0, 40.0};
    const cplx exact = (std::exp(I * k) - 1.0) / (I * k);
    EXPECT_LT(std::abs(f(k) - exact), 1e-12 * std::abs(exact));
}

TEST(Interval, ConjugateSymmetry) {
    const auto f = interval_transform(SampledInterval{[](double x) { return x * x - 0.3; }, -1.0, 0.5, 64});
    for (cplx k : {cplx{1.0, 2.0}, cplx{-7.0, -0.5}})
        EXPECT_LT(std::abs(f(-std::conj(k)) - std::conj(f(k))), 1e-13);
}

TEST(TimeTransform, ZeroOmegaLimit) { EXPECT_NEAR(std::abs(time_transform_constant(1.0, 0.0, 2.0) - 2.0), 0.0, 1e-15); }

TEST(TimeTransform, DirectSubstitution) {
    const double g = 0.37;
    EXPECT_NEAR(std::abs(time_transform_constant(g, 1.0, 1.0) - g * (std::numbers::e - 1.0)), 0.0, 1e-15);
}

TEST(TimeTransform, SeriesBranchNearZero) {
    // (e^z - 1)/z = 1 + z/2 + z^2/6 + ...
    const double w = 1e-9;
    const double expected = 1.0 + w / 2.0 + w * w / 6.0;
    EXPECT_NEAR(time_transform_constant(1.0, w, 1.0).real(), expected, 1e-16);
    EXPECT_NEAR(time_transform_constant(1.0, w, 1.0).real(), 1.0 + 5e-10, 1e-16);
}

TEST(TimeTransform, BranchesAgreeAtSwitch) {
    const cplx z{0.99e-4, 0.3e-5};
    EXPECT_LT(std::abs(time_transform_constant(1.0, z, 1.0) - (std::exp(z) - 1.0) / z), 1e-12);
}

TEST(Erf, ReferenceValues) {
    EXPECT_EQ(erf_real(0.0), 0.0);
    EXPECT_EQ(erf_real(10.0), 1.0);
    EXPECT_NEAR(erf_real(1.0), 0.8427007929497149, 1e-16);
}

TEST(Erf, IsOdd) {
    for (double z : {0.1, 0.5, 1.7, 3.2, 5.9, 8.0}) EXPECT_EQ(erf_real(-z), -erf_real(z));
}

TEST(Erf, MatchesDefiningIntegral) {
    const double z = 1.0;
    const double q = 2.0 / std::sqrt(std::numbers::pi) *
                     integrate_interval([](double y) { return std::exp(-y * y); }, 0.0, z, 4, 32);
    EXPECT_NEAR(erf_real(z), q, 1e-15);
}
