#pragma once

// Solutions on the whole line: two semi-infinite layers with far-field
// values, and three layers with a finite middle slab.

#include <memory>

#include "fokas_heat/kernel_terms.hpp"
#include "fokas_heat/solution.hpp"

namespace fokas_heat {

/// Error-function step carrying the far-field jump.  `left_sign` is the sign
/// in front of erf on the left side (+1 is the one that tends to gamma_left).
inline double far_field_step(const ProblemConfig& c, std::size_t layer, double x, double t, double left_sign) {
    const double sl = c.sigma(0), sr = c.sigma(1);
    const double gl = c.gamma_left, gr = c.gamma_right;
    if (layer == 0) return gl + sr * (gr - gl) / (sl + sr) * (1.0 + left_sign * erf_real(x / (2.0 * sl * std::sqrt(t))));
    return gr + sl * (gl - gr) / (sl + sr) * (1.0 - erf_real(x / (2.0 * sr * std::sqrt(t))));
}

inline FormulaSet two_semi_infinite_formulas(const ProblemConfig& c, bool corrected) {
    auto f = printed_two_semi_infinite(c.sigma(0), c.sigma(1));
    if (corrected) apply_corrections(f, c.sigma(0), c.sigma(1));
    return f;
}

inline FormulaSet three_infinite_formulas(const ProblemConfig& c, Variant v, bool corrected) {
    const double a = c.layer(1).extent.hi;
    auto f = printed_three_infinite(c.sigma(0), c.sigma(1), c.sigma(2), a, v == Variant::Full);
    if (corrected) apply_corrections(f, c.sigma(0), c.sigma(2), a);
    return f;
}

/// Two semi-infinite layers.  The stored transforms are those of the
/// deviations u0 - gamma; the far-field jump enters through the erf step.
inline SolutionField solve_two_semi_infinite(const ProblemConfig& c, SolverOptions opt = {}) {
    validated(c);
    if (c.geometry != Geometry::TwoSemiInfinite)
        throw Error(ErrorCode::DomainMismatch, "solve_two_semi_infinite needs a two_semi_infinite config");
    auto model = make_spectral_model(c);
    std::shared_ptr<const KernelProvider> k;
    double sign = 1.0;
    if (opt.path == FormulaPath::Transcribed) {
        auto f = two_semi_infinite_formulas(c, opt.corrected);
        sign = f.left_erf_sign;
        k = std::make_shared<TableKernels>(std::move(model), std::move(f), opt.keep_data_pole);
    } else {
        k = std::make_shared<LinearSolveKernels>(std::move(model), opt.keep_data_pole);
    }
    SolutionField field(c, std::move(k), opt);
    field.extra = [c, sign](std::size_t layer, double x, double t) { return far_field_step(c, layer, x, t, sign); };
    return field;
}

/// Three layers (-inf,-a), (-a,a), (a,inf) with zero far-field values.  The
/// restricted variant only admits initial data in the left layer.
inline SolutionField solve_three_infinite(const ProblemConfig& c, SolverOptions opt = {}) {
    validated(c);
    if (c.geometry != Geometry::ThreeInfinite)
        throw Error(ErrorCode::DomainMismatch, "solve_three_infinite needs a three_infinite config");
    if (opt.variant == Variant::Restricted && (!c.initial[1].is_zero() || !c.initial[2].is_zero()))
        throw Error(ErrorCode::DomainMismatch, "restricted variant needs zero middle and right initial data");
    auto model = make_spectral_model(c);
    std::shared_ptr<const KernelProvider> k;
    if (opt.path == FormulaPath::Transcribed)
        k = std::make_shared<TableKernels>(std::move(model), three_infinite_formulas(c, opt.variant, opt.corrected),
                                           opt.keep_data_pole);
    else
        k = std::make_shared<LinearSolveKernels>(std::move(model), opt.keep_data_pole);
    return SolutionField(c, std::move(k), opt);
}

inline SolutionSample eval_two_semi_infinite(const SolutionField& f, double x, double t) { return f.evaluate(x, t); }
inline SolutionSample eval_three_infinite(const SolutionField& f, double x, double t) { return f.evaluate(x, t); }

}  // namespace fokas_heat
