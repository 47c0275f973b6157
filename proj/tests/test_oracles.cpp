#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fokas_heat/oracles.hpp"
#include "fokas_heat/solve.hpp"

using namespace fokas_heat;

namespace {

const double kPi = std::numbers::pi;

ExpPolynomial poly(double coef, int power, double rate) { return {{{coef, power, rate}}}; }

double max_diff_on(const FDField& a, const FDField& b, std::size_t ti, const std::vector<double>& xs) {
    double d = 0.0;
    for (double x : xs) d = std::max(d, std::abs(a.at(x, ti) - b.at(x, ti)));
    return d;
}

}  // namespace

TEST(CrankNicolson, EquilibriumStaysConstant) {
    const auto c = two_semi_infinite(1.0, 2.0, {}, {}, 0.4, 0.4);
    const auto fd = crank_nicolson(c, make_fd_grid(c, 0.05, 0.01, 1.0), {0.1, 1.0});
    for (const auto& row : fd.u)
        for (double v : row) EXPECT_NEAR(v, 0.4, 1e-12);
}

TEST(CrankNicolson, ReachesTheSteadyState) {
    const auto c = two_finite(1, 2, 1, 1, {}, {}, 0, 1);
    const auto fd = crank_nicolson(c, make_fd_grid(c, 0.02, 0.5, 1e3), {1e3});
    const auto s = steady_state(c);
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) EXPECT_NEAR(fd.at(x, 0), s(x), 1e-6);
}

TEST(CrankNicolson, SecondOrderSelfConvergence) {
    const auto c = two_finite(1.0, 2.0, 1.0, 1.0, sampled([](double x) { return std::sin(kPi * x); }, -1, 0),
                              sampled([](double x) { return x; }, 0, 1), 0.0, 1.0);
    const std::vector<double> xs{-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75};
    std::vector<FDField> runs;
    for (double h : {0.04, 0.02, 0.01}) runs.push_back(crank_nicolson(c, make_fd_grid(c, h, h, 0.2), {0.2}));
    const double p = observed_order(max_diff_on(runs[0], runs[1], 0, xs), max_diff_on(runs[1], runs[2], 0, xs));
    EXPECT_NEAR(p, 2.0, 0.2);
}

TEST(CrankNicolson, AgreesWithTheSpectralSolution) {
    const auto c = three_infinite(1.0, 0.5, 2.0, 1.0, poly(1, 0, 2), {}, {});
    const auto f = solve(c);
    const auto fd = crank_nicolson(c, make_fd_grid(c, 2e-3, 2e-3, 0.5), {0.1, 0.5});
    for (std::size_t ti = 0; ti < 2; ++ti)
        for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) EXPECT_NEAR(fd.at(x, ti), f.evaluate(x, fd.times[ti]).u, 1e-4);
}

TEST(CrankNicolson, ArtificialEndTooCloseIsReported) {
    const auto c = two_semi_infinite(1.0, 1.0, poly(1, 0, 1), {});
    auto g = make_fd_grid(c, 0.05, 0.01, 0.01);
    try {
        crank_nicolson(c, g, {4.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TruncationTooTight);
    }
}

TEST(CrankNicolson, RejectsNonPositiveTimes) { 
    const auto c = two_finite(1, 1, 1, 1, {}, {}, 0, 0);
    EXPECT_THROW(crank_nicolson(c, make_fd_grid(c, 0.1, 0.1, 1.0), {0.0}), Error);
}

TEST(ObservedOrder, Log2OfRatio) { EXPECT_DOUBLE_EQ(observed_order(4e-4, 1e-4), 2.0); }

TEST(ClassicalSeries, SingleModeDecaysExactly) {
    // Equal sigma, a = b = 1: u0 = sin(pi (x + 1) / 2) is the first mode.
    auto mode = [](double x) { return std::sin(kPi * (x + 1.0) / 2.0); };
    const auto c = two_finite(1.0, 1.0, 1.0, 1.0, sampled(mode, -1, 0), sampled(mode, 0, 1), 0.0, 0.0);
    const auto s = classical_series_two_finite(c, 20);
    const double t = 0.3, decay = std::exp(-kPi * kPi / 4.0 * t);
    for (double x : {-0.6, 0.0, 0.4}) EXPECT_NEAR(s(x, t), decay * mode(x), 1e-12);
}

TEST(ClassicalSeries, RequiresTwoFinite) {
    EXPECT_THROW(classical_series_two_finite(two_semi_infinite(1, 1), 5), Error);
}

TEST(CosineSeries, SingleModeDecaysExactly) {
    const double L = 3.0, sigma = 0.7;
    auto u0 = [&](double x) { return 1.0 + std::cos(2.0 * kPi * (x + 1.0) / L); };
    const CosineSeries s(u0, -1.0, 2.0, sigma, 10);
    const double t = 0.2, k = 2.0 * kPi / L;
    for (double x : {-1.0, 0.3, 2.0})
        EXPECT_NEAR(s(x, t), 1.0 + std::exp(-sigma * sigma * k * k * t) * std::cos(k * (x + 1.0)), 1e-13);
}

TEST(HeatKernel, ConstantStaysConstant) {
    for (double t : {0.01, 1.0}) EXPECT_NEAR(heat_kernel_whole_line([](double) { return 1.0; }, 0.5, 0.3, t), 1.0, 1e-13);
}

TEST(HeatKernel, GaussianSpreadsWithVariance2SigmaSquaredT) {
    const double s0 = 0.05, sigma = 0.8;
    auto u0 = [&](double y) { return std::exp(-y * y / (2.0 * s0 * s0)); };
    for (double t : {0.01, 0.1}) {
        const double var = s0 * s0 + 2.0 * sigma * sigma * t;
        for (double x : {0.0, 0.1, 0.3}) {
            const double exact = s0 / std::sqrt(var) * std::exp(-x * x / (2.0 * var));
            EXPECT_NEAR(heat_kernel_whole_line(u0, sigma, x, t, s0), exact, 1e-12);
        }
    }
}

TEST(HeatKernel, NarrowPeakMatchesEqualSigmaSolver) {
    const auto c = two_semi_infinite(0.02, 0.02, poly(1, 2, 625), {});
    const auto f = solve(c);
    for (double t : {0.005, 0.02})
        for (double x : {-0.01, -0.002, 0.0, 0.004}) EXPECT_NEAR(f.evaluate(x, t).u, heat_kernel_whole_line(c, x, t), 1e-8);
}

TEST(HeatKernel, RequiresEqualSigma) { EXPECT_THROW(heat_kernel_whole_line(two_semi_infinite(1, 2), 0.0, 1.0), Error); }
