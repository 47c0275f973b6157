#pragma once

// Solutions on bounded composite rods: two layers with Dirichlet ends and
// three layers with insulated ends, plus the denominators and steady states.

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "fokas_heat/kernel_terms.hpp"
#include "fokas_heat/solution.hpp"

namespace fokas_heat {

enum class DeltaWhich { Left, Middle, Right };

/// One denominator of a finite geometry in exponential-sum form.
struct DeltaFn {
    Geometry geometry = Geometry::TwoFinite;
    DeltaWhich which = DeltaWhich::Left;
    ExpSum sum;

    cplx operator()(cplx k) const { return sum(k).value(); }
};

inline cplx delta_eval(const DeltaFn& d, cplx k) { return d(k); }

/// Left denominator for (-a,0),(0,b); the right one is the same function of
/// k sr / sl.
inline DeltaFn two_finite_delta(double sl, double sr, double a, double b, DeltaWhich which = DeltaWhich::Left) {
    ExpSum s = delta_two_finite(sl, sr, a, b);
    if (which == DeltaWhich::Right) s = s.rescaled(sr / sl);
    return {Geometry::TwoFinite, which, std::move(s)};
}

/// Real form of the left denominator on the real axis,
///   sl sin(k p) cos(k a) + sr sin(k a) cos(k p),   p = b sl / sr,
/// with Delta_L(k) e^{-ik(a+p)} = 4 pi i times this.
inline double two_finite_delta_real(double sl, double sr, double a, double b, double k) {
    const double p = b * sl / sr;
    return sl * std::sin(k * p) * std::cos(k * a) + sr * std::sin(k * a) * std::cos(k * p);
}

/// Denominators of the three-layer insulated rod as printed.
inline DeltaFn three_finite_delta(double sl, double sm, double sr, double a, double b, double c, DeltaWhich which) {
    switch (which) {
    case DeltaWhich::Left: return {Geometry::ThreeFinite, which, delta_three_finite_left(sl, sm, sr, a, b, c)};
    case DeltaWhich::Middle: return {Geometry::ThreeFinite, which, delta_three_finite_middle(sl, sm, sr, a, b, c)};
    case DeltaWhich::Right: return {Geometry::ThreeFinite, which, delta_three_finite_right(sl, sm, sr, a, b, c)};
    }
    return {};
}

inline FormulaSet two_finite_formulas(const ProblemConfig& c, bool corrected) {
    const double a = -c.layer(0).extent.lo, b = c.layer(1).extent.hi;
    auto f = printed_two_finite(c.sigma(0), c.sigma(1), a, b);
    if (corrected) apply_corrections(f, c.sigma(0), c.sigma(1), a, b);
    return f;
}

/// Printed three-layer tables.  No term-level corrections exist for them:
/// their denominators do not vanish at the eigenvalues of the rod.
inline FormulaSet three_finite_formulas(const ProblemConfig& c, Variant v) {
    const double a = -c.layer(0).extent.lo, b = c.layer(1).extent.hi, cc = c.layer(2).extent.hi;
    return printed_three_finite(c.sigma(0), c.sigma(1), c.sigma(2), a, b, cc, v == Variant::Full);
}

/// Two layers (-a,0),(0,b) with constant Dirichlet data at both ends.
inline SolutionField solve_two_finite(const ProblemConfig& c, SolverOptions opt = {}) {
    validated(c);
    if (c.geometry != Geometry::TwoFinite)
        throw Error(ErrorCode::DomainMismatch, "solve_two_finite needs a two_finite config");
    auto model = make_spectral_model(c);
    std::shared_ptr<const KernelProvider> k;
    if (opt.path == FormulaPath::Transcribed)
        k = std::make_shared<TableKernels>(std::move(model), two_finite_formulas(c, opt.corrected), opt.keep_data_pole);
    else
        k = std::make_shared<LinearSolveKernels>(std::move(model), opt.keep_data_pole);
    return SolutionField(c, std::move(k), opt);
}

/// Three layers (-a,0),(0,b),(b,c) with insulated ends.  The printed tables
/// are used only when asked for uncorrected; otherwise the kernels come
/// from the global-relation solve.
inline SolutionField solve_three_finite(const ProblemConfig& c, SolverOptions opt = {}) {
    validated(c);
    if (c.geometry != Geometry::ThreeFinite)
        throw Error(ErrorCode::DomainMismatch, "solve_three_finite needs a three_finite config");
    if (opt.variant == Variant::Restricted && (!c.initial[1].is_zero() || !c.initial[2].is_zero()))
        throw Error(ErrorCode::DomainMismatch, "restricted variant needs zero middle and right initial data");
    auto model = make_spectral_model(c);
    std::shared_ptr<const KernelProvider> k;
    if (opt.path == FormulaPath::Transcribed && !opt.corrected) {
        k = std::make_shared<TableKernels>(std::move(model), three_finite_formulas(c, opt.variant), opt.keep_data_pole);
    } else {
        opt.path = FormulaPath::LinearSolve;
        k = std::make_shared<LinearSolveKernels>(std::move(model), opt.keep_data_pole);
    }
    return SolutionField(c, std::move(k), opt);
}

inline SolutionSample eval_two_finite_dirichlet(const SolutionField& f, double x, double t) { return f.evaluate(x, t); }
inline SolutionSample eval_three_finite(const SolutionField& f, double x, double t) { return f.evaluate(x, t); }

/// Long-time limit.  Two finite layers: u = intercept + slope * x per layer.
/// Two semi-infinite layers: the weighted average.  Insulated rods: the
/// mean of the initial heat.  Three infinite layers: zero.
struct SteadyState {
    Geometry geometry = Geometry::TwoFinite;
    double intercept = 0.0;
    double slope_left = 0.0;
    double slope_right = 0.0;

    double operator()(double x) const { return intercept + (x < 0.0 ? slope_left : slope_right) * x; }

    std::string describe() const {
        std::ostringstream os;
        os.precision(12);
        if (geometry == Geometry::TwoFinite) {
            os << intercept << " + " << slope_left << "*x | " << intercept << " + " << slope_right << "*x";
        } else {
            os << intercept;
        }
        return os.str();
    }
};

namespace detail {

inline double layer_integral(const TransformSource& src, double lo, double hi) {
    return integrate_interval([&](double x) { return src(x); }, lo, hi, 16, 32);
}

}  // namespace detail

inline SteadyState steady_state(const ProblemConfig& c) {
    validated(c);
    SteadyState s;
    s.geometry = c.geometry;
    switch (c.geometry) {
    case Geometry::TwoFinite: {
        const double sl = c.sigma(0), sr = c.sigma(1);
        const double a = -c.layer(0).extent.lo, b = c.layer(1).extent.hi;
        const double gl = c.left_end->dirichlet_value(), gr = c.right_end->dirichlet_value();
        const double den = b * sl * sl + a * sr * sr;
        s.intercept = (b * gl * sl * sl + a * gr * sr * sr) / den;
        s.slope_left = sr * sr * (gr - gl) / den;
        s.slope_right = sl * sl * (gr - gl) / den;
        break;
    }
    case Geometry::TwoSemiInfinite:
        s.intercept = (c.gamma_left * c.sigma(0) + c.gamma_right * c.sigma(1)) / (c.sigma(0) + c.sigma(1));
        break;
    case Geometry::ThreeFinite: {
        double heat = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            heat += detail::layer_integral(c.initial[i], c.layer(i).extent.lo, c.layer(i).extent.hi);
        s.intercept = heat / (c.layer(2).extent.hi - c.layer(0).extent.lo);
        break;
    }
    case Geometry::ThreeInfinite: break;
    }
    return s;
}

}  // namespace fokas_heat
