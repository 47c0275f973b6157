#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fokas_heat/contours.hpp"

using namespace fokas_heat;

namespace {

const double kPi = std::numbers::pi;

// Fixed-order rule over every panel, no adaptivity.
template <class F>
cplx fixed_order(const SpectralContour& c, F&& f, std::size_t order) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < c.panels.size(); ++i)
        for (const auto& q : c.panel_nodes(i, order)) s += q.w * f(q.k);
    return s;
}

}  // namespace

TEST(BuildContour, UpperNodesStayAboveTheArc) {
    const auto c = build_contour(ContourHalf::Upper, 1.0, 0.1, 1.0, true, 1.0);
    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& q : c.nodes) {
        EXPECT_GT(q.k.imag(), 0.0);
        min_abs = std::min(min_abs, std::abs(q.k));
    }
    EXPECT_GE(min_abs, 1.0 - 1e-12);
    EXPECT_DOUBLE_EQ(c.arc_radius, 1.0);
}

TEST(BuildContour, LowerIsTheMirrorImage) {
    const auto up = build_contour(ContourHalf::Upper, 1.0, 0.1, 1.0, true, 1.0);
    const auto lo = build_contour(ContourHalf::Lower, 1.0, 0.1, 1.0, true, 1.0);
    ASSERT_EQ(up.nodes.size(), lo.nodes.size());
    for (std::size_t i = 0; i < up.nodes.size(); ++i) {
        EXPECT_EQ(lo.nodes[i].k, std::conj(up.nodes[i].k));
        EXPECT_EQ(lo.nodes[i].w, -std::conj(up.nodes[i].w));
    }
}

TEST(BuildContour, TruncationRadiusFormula) {
    const double R = truncation_radius(0.02, 0.02, kPi / 8.0);
    EXPECT_NEAR(R, std::sqrt(std::log(1e16) / (0.02 * 0.02 * 0.02 * std::cos(kPi / 4.0))), 1e-9 * R);
    // The Gaussian factor is at the requested level there.
    EXPECT_NEAR(std::exp(-std::pow(0.02 * R, 2) * 0.02 * std::cos(kPi / 4.0)), 1e-16, 1e-24);
}

TEST(BuildContour, ArcRadiusIsClampedByDiffusionLength) {
    EXPECT_DOUBLE_EQ(effective_arc_radius(2.0, 1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(effective_arc_radius(0.5, 1.0, 1.0), 0.5);
}

TEST(BuildContour, TooManyPanelsReportsTimeTooSmall) {
    ContourOptions opt;
    opt.max_panels = 10;
    try {
        build_contour(ContourHalf::Upper, 1.0, 1e-6, 1e4, true, 1.0, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TimeTooSmall);
    }
}

TEST(Integrate, ZeroIntegrand) {
    const auto c = build_contour(ContourHalf::Upper, 1.0, 1.0, 1.0, true, 1.0);
    EXPECT_EQ(integrate(c, [](cplx) { return cplx{}; }, 1e-12), cplx{});
}

TEST(Integrate, GaussianMatchesRealLine) {
    // x = 1, t = 1: sqrt(pi) e^{-1/4}.
    const double exact = std::sqrt(kPi) * std::exp(-0.25);
    for (bool avoid : {false, true}) {
        const auto c = build_contour(ContourHalf::Upper, 1.0, 1.0, 1.0, avoid, 1.0);
        const cplx v = integrate(c, [](cplx k) { return std::exp(I * k - k * k); }, 1e-13);
        EXPECT_NEAR(v.real(), exact, 1e-10);
        EXPECT_NEAR(v.imag(), 0.0, 1e-10);
    }
}

TEST(Integrate, PoleAtOriginIsIndependentOfArcRadius) {
    // Passing above the pole of e^{-k^2 t}/k gives -i pi.
    auto f = [](cplx k) { return std::exp(-0.1 * k * k) / k; };
    for (double r : {0.5, 1.0, 2.0}) {
        const auto c = build_contour(ContourHalf::Upper, 1.0, 0.1, 1.0, true, r);
        EXPECT_DOUBLE_EQ(c.arc_radius, r);
        const cplx v = integrate(c, f, 1e-13);
        EXPECT_NEAR(v.real(), 0.0, 1e-10) << "r=" << r;
        EXPECT_NEAR(v.imag(), -kPi, 1e-10) << "r=" << r;
    }
}

TEST(Integrate, NodeDoublingConvergesGeometrically) {
    const auto c = build_contour(ContourHalf::Upper, 1.0, 1.0, 1.0, true, 1.0);
    auto f = [](cplx k) { return std::exp(I * k - k * k); };
    const double exact = std::sqrt(kPi) * std::exp(-0.25);
    double prev = std::abs(fixed_order(c, f, 2) - exact);
    for (std::size_t n : {4, 8, 16}) {
        const double err = std::abs(fixed_order(c, f, n) - exact);
        EXPECT_LT(err, 0.1 * prev + 1e-14) << "order " << n;
        prev = err;
    }
    EXPECT_LT(prev, 1e-12);
}

TEST(Integrate, MirrorSymmetry) {
    // f(conj k) = conj f(k)  implies  lower = -conj(upper).
    auto f = [](cplx k) { return std::exp(-k * k) * std::cos(0.7 * k) * (1.0 + k * k); };
    const auto up = build_contour(ContourHalf::Upper, 1.0, 1.0, 1.0, true, 1.0);
    const auto lo = build_contour(ContourHalf::Lower, 1.0, 1.0, 1.0, true, 1.0);
    const cplx a = integrate(up, f, 1e-13), b = integrate(lo, f, 1e-13);
    EXPECT_LT(std::abs(b + std::conj(a)), 1e-12);
}

TEST(Integrate, NonFiniteIntegrandIsReported) {
    const auto c = build_contour(ContourHalf::Upper, 1.0, 1.0, 1.0, true, 1.0);
    try {
        integrate(c, [](cplx) { return cplx{std::nan(""), 0.0}; }, 1e-12);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NaNInIntegrand);
    }
}

TEST(Integrate, UnresolvableIntegrandReportsNoConvergence) {
    const auto c = build_contour(ContourHalf::Real, 1.0, 1.0, 1.0, false, 1.0);
    ContourOptions opt;
    opt.max_order = 32;
    try {
        integrate(c, [](cplx k) { return std::exp(I * 500.0 * k - k * k); }, 1e-14, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    }
}
