#pragma once

#include "fokas_heat/solver_finite.hpp"
#include "fokas_heat/solver_semi_infinite.hpp"

namespace fokas_heat {

/// Builds the evaluator for any validated configuration.
inline SolutionField solve(const ProblemConfig& c, const SolverOptions& opt = {}) {
    switch (c.geometry) {
    case Geometry::TwoSemiInfinite: return solve_two_semi_infinite(c, opt);
    case Geometry::TwoFinite: return solve_two_finite(c, opt);
    case Geometry::ThreeInfinite: return solve_three_infinite(c, opt);
    case Geometry::ThreeFinite: return solve_three_finite(c, opt);
    }
    throw Error(ErrorCode::DomainMismatch, "unknown geometry");
}

/// Positions of the interfaces.
inline std::vector<double> interfaces(const ProblemConfig& c) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < c.layers.size(); ++i) out.push_back(c.layers[i].extent.hi);
    return out;
}

}  // namespace fokas_heat
