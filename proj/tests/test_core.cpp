#include <gtest/gtest.h>

#include "fokas_heat/core.hpp"

using namespace fokas_heat;

namespace {

ExpPolynomial poly(double coef, int power, double rate) { return {{{coef, power, rate}}}; }

bool has_code(const ValidationResult& r, ErrorCode code) {
    for (const auto& v : r.violations)
        if (v.code == code) return true;
    return false;
}

}  // namespace

TEST(Validate, NarrowPeakSetupIsValid) {
    const auto c = two_semi_infinite(0.02, 0.06, poly(1, 2, 625), poly(1, 2, -900));
    EXPECT_TRUE(validate(c).ok()) << validate(c).summary();
}

TEST(Validate, RobinEndOnTwoFiniteIsUnsupported) {
    auto c = two_finite(1, 2, 1, 1, {}, {}, 0, 1);
    c.left_end = BoundaryOperator{1.0, 1.0, 0.0};
    EXPECT_TRUE(has_code(validate(c), ErrorCode::UnsupportedBoundaryOperator));
}

TEST(Validate, GapBetweenLayers) {
    auto c = two_semi_infinite(1, 1);
    c.layers[1].extent = {0.5, kInf};
    EXPECT_TRUE(has_code(validate(c), ErrorCode::NonAbuttingLayers));
}

TEST(Validate, NonPositiveSigma) {
    EXPECT_TRUE(has_code(validate(two_semi_infinite(0.0, 1.0)), ErrorCode::NonPositiveSigma));
    EXPECT_TRUE(has_code(validate(two_semi_infinite(1.0, -2.0)), ErrorCode::NonPositiveSigma));
}

TEST(Validate, GrowingDataOnHalfLine) {
    EXPECT_TRUE(has_code(validate(two_semi_infinite(1, 1, poly(1, 0, -1))), ErrorCode::WrongDecaySign));
    EXPECT_TRUE(has_code(validate(two_semi_infinite(1, 1, {}, poly(1, 0, 1))), ErrorCode::WrongDecaySign));
}

TEST(Validate, ThreeFiniteNeedsHomogeneousNeumann) {
    auto c = three_finite(1, 1, 1, 1, 1, 2, {}, {}, {});
    EXPECT_TRUE(validate(c).ok());
    c.right_end = BoundaryOperator::neumann(1.0);
    EXPECT_TRUE(has_code(validate(c), ErrorCode::UnsupportedBoundaryOperator));
    c.right_end = BoundaryOperator::dirichlet(0.0);
    EXPECT_TRUE(has_code(validate(c), ErrorCode::UnsupportedBoundaryOperator));
}

TEST(Validate, ThreeInfiniteRejectsFarFieldValues) {
    auto c = three_infinite(1, 1, 1, 1, poly(1, 0, 1), {}, {});
    EXPECT_TRUE(validate(c).ok());
    c.gamma_right = 1.0;
    EXPECT_FALSE(validate(c).ok());
}

TEST(Validate, SampledDataMustCoverItsLayer) {
    auto c = two_finite(1, 1, 1, 1, sampled([](double) { return 1.0; }, -1, 0),
                        sampled([](double) { return 1.0; }, 0, 0.5), 0, 0);
    EXPECT_TRUE(has_code(validate(c), ErrorCode::DomainMismatch));
}

TEST(Validate, IsIdempotent) {
    const auto c = two_finite(1, 2, 1, 1, {}, {}, 0, 1);
    const auto& v = validated(c);
    EXPECT_EQ(validate(v).ok(), validate(c).ok());
    EXPECT_EQ(&v, &c);
}

TEST(Validate, ValidatedThrowsFirstViolation) {
    try {
        validated(two_semi_infinite(-1, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveSigma);
    }
}

TEST(Config, LayerOfSendsInterfacesLeft) {
    const auto c = three_finite(1, 1, 1, 1, 1, 2, {}, {}, {});
    EXPECT_EQ(c.layer_of(-1.0), 0u);
    EXPECT_EQ(c.layer_of(0.0), 0u);
    EXPECT_EQ(c.layer_of(0.5), 1u);
    EXPECT_EQ(c.layer_of(1.0), 1u);
    EXPECT_EQ(c.layer_of(2.0), 2u);
    EXPECT_FALSE(c.layer_of(2.5));
}

TEST(Config, InitialValueAddsFarField) {
    const auto c = two_semi_infinite(1, 3, poly(2, 0, 1), {}, 0.25, 1.0);
    EXPECT_DOUBLE_EQ(c.initial_value(-1.0), 0.25 + 2.0 * std::exp(-1.0));
    EXPECT_DOUBLE_EQ(c.initial_value(1.0), 1.0);
}

TEST(Shift, MovesUserLayersToFixedPositions) {
    ProblemConfig user = two_finite(1, 2, 1, 1, {poly(1, 1, 0)}, sampled([](double x) { return x * x; }, 0, 1), 0, 0);
    // User coordinates put the rod on (2,4).
    user = shifted(user, 3.0);
    std::vector<Interval> extents;
    for (const auto& L : user.layers) extents.push_back(L.extent);
    const double s = canonical_shift(Geometry::TwoFinite, extents);
    EXPECT_DOUBLE_EQ(s, -3.0);
    const auto back = shifted(user, s);
    EXPECT_TRUE(validate(back).ok()) << validate(back).summary();
    EXPECT_NEAR(back.initial_value(-0.5), -0.5, 1e-14);
    EXPECT_NEAR(back.initial_value(0.5), 0.25, 1e-14);
}

TEST(Shift, ThreeInfiniteCentresTheSlab) {
    const std::vector<Interval> ext{{-kInf, 1.0}, {1.0, 3.0}, {3.0, kInf}};
    EXPECT_DOUBLE_EQ(canonical_shift(Geometry::ThreeInfinite, ext), -2.0);
}
