#pragma once

// Global-relation linear solve at a single spectral node.
//
// Layer m on (l, r) with wavenumber kappa satisfies
//   e^{w t} u_m^(kappa,t) = u_m0^(kappa)
//       + e^{-i kappa r} (F(r) + i kappa s_m^2 U(r)) - e^{-i kappa l} (F(l) + i kappa s_m^2 U(l)),
// where U and F are time transforms of the temperature and of the flux
// s^2 u_x at a point, both functions of w = (s_m kappa)^2 only.  For a node k
// of target layer j every layer is sampled at kappa = +-s_j k / s_m so all
// relations share w = (s_j k)^2.  Dropping the unknown left-hand sides
// (their contour integrals vanish) leaves a square system for the interface
// and end unknowns.  Half-lines keep only the sign whose kappa lies in their
// half-plane of analyticity.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fokas_heat/core.hpp"
#include "fokas_heat/error.hpp"
#include "fokas_heat/scaled_complex.hpp"
#include "fokas_heat/transforms.hpp"

namespace fokas_heat {

struct LayerModel {
    double sigma = 1.0;
    double lo = -kInf;
    double hi = kInf;
    TransformFn u0;
};

enum class EndKind { Open, Dirichlet, Neumann };

struct EndModel {
    EndKind kind = EndKind::Open;
    double value = 0.0;  // prescribed u for Dirichlet, zero flux for Neumann
};

/// Layers plus end conditions; interfaces are the shared layer endpoints.
struct SpectralModel {
    std::vector<LayerModel> layers;
    EndModel left;
    EndModel right;

    /// Points carrying time transforms: finite ends and interfaces.
    struct Point {
        double x;
        EndKind end;       // Open for interfaces
        int u_index = -1;  // column of U, or -1 if known
        int f_index = -1;  // column of F, or -1 if known
        int data_slot = -1;
    };

    std::vector<Point> points() const {
        std::vector<Point> pts;
        if (std::isfinite(layers.front().lo)) pts.push_back({layers.front().lo, left.kind});
        for (std::size_t i = 0; i + 1 < layers.size(); ++i) pts.push_back({layers[i].hi, EndKind::Open});
        if (std::isfinite(layers.back().hi)) pts.push_back({layers.back().hi, right.kind});
        int col = 0;
        int data = static_cast<int>(2 * layers.size());
        for (auto& p : pts) {
            if (p.end == EndKind::Dirichlet) {
                p.f_index = col++;
                p.data_slot = data++;
            } else if (p.end == EndKind::Neumann) {
                p.u_index = col++;
            } else {
                p.u_index = col++;
                p.f_index = col++;
            }
        }
        return pts;
    }

    std::size_t slot_count() const {
        std::size_t n = 2 * layers.size();
        if (left.kind == EndKind::Dirichlet && std::isfinite(layers.front().lo)) ++n;
        if (right.kind == EndKind::Dirichlet && std::isfinite(layers.back().hi)) ++n;
        return n;
    }

    double end_value(const Point& p) const {
        return (p.x == layers.front().lo) ? left.value : right.value;
    }
};

/// Source slot: the initial-data transform of `layer` at `kappa`, or a
/// boundary-data time transform.
struct SlotArg {
    bool data = false;
    std::size_t layer = 0;
    int sign = 1;
    cplx kappa{};
    bool active = false;
    double data_value = 0.0;
};

/// Solved unknowns at one node, linear in the source slots:
/// U[p][s], F[p][s] are the time transforms at point p per unit of slot s.
struct InterfaceUnknowns {
    cplx k{};
    cplx omega{};
    std::vector<SpectralModel::Point> points;
    std::vector<SlotArg> slots;
    std::vector<std::vector<ScaledComplex>> U;
    std::vector<std::vector<ScaledComplex>> F;
};

namespace detail {

/// Dense complex solve with partial pivoting, multiple right-hand sides.
/// Returns false when a pivot is negligible.
inline bool dense_solve(std::vector<std::vector<cplx>>& A, std::vector<std::vector<cplx>>& B) {
    const std::size_t n = A.size();
    const std::size_t m = B.empty() ? 0 : B[0].size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-13) return false;
        std::swap(A[piv], A[c]);
        std::swap(B[piv], B[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const cplx f = A[r][c] / A[c][c];
            if (f == cplx{0.0, 0.0}) continue;
            for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
            for (std::size_t j = 0; j < m; ++j) B[r][j] -= f * B[c][j];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = B[c][j];
            for (std::size_t q = c + 1; q < n; ++q) s -= A[c][q] * B[q][j];
            B[c][j] = s / A[c][c];
        }
    }
    return true;
}

}  // namespace detail

/// Global relations at node k for target layer j: one row per retained
/// (layer, sign), columns are the unknown U/F transforms, right-hand sides
/// are per source slot.
struct RelationSystem {
    std::vector<std::vector<ScaledComplex>> A;
    std::vector<std::vector<ScaledComplex>> B;
    std::vector<SpectralModel::Point> points;
    std::vector<SlotArg> slots;
    std::size_t unknowns = 0;
};

inline RelationSystem build_relations(const SpectralModel& model, std::size_t j, cplx k) {
    RelationSystem sys;
    const double sj = model.layers[j].sigma;
    sys.points = model.points();
    const std::size_t n_slots = model.slot_count();
    sys.slots.resize(n_slots);
    for (const auto& p : sys.points) {
        if (p.u_index >= 0) ++sys.unknowns;
        if (p.f_index >= 0) ++sys.unknowns;
        if (p.data_slot >= 0) {
            auto& s = sys.slots[p.data_slot];
            s.data = true;
            s.active = true;
            s.data_value = model.end_value(p);
        }
    }
    for (std::size_t m = 0; m < model.layers.size(); ++m) {
        const auto& L = model.layers[m];
        const cplx base = sj * k / L.sigma;
        for (int sign : {1, -1}) {
            const cplx kappa = static_cast<double>(sign) * base;
            if (std::isinf(L.lo) && !(kappa.imag() > 0.0)) continue;
            if (std::isinf(L.hi) && !(kappa.imag() < 0.0)) continue;
            const std::size_t slot = 2 * m + (sign > 0 ? 0 : 1);
            sys.slots[slot] = {false, m, sign, kappa, true, 0.0};
            std::vector<ScaledComplex> row(sys.unknowns);
            std::vector<ScaledComplex> rhs(n_slots);
            rhs[slot] = ScaledComplex(cplx{-1.0, 0.0});
            for (const auto& p : sys.points) {
                double eps = 0.0;
                if (p.x == L.hi) eps = 1.0;
                else if (p.x == L.lo) eps = -1.0;
                else continue;
                const ScaledComplex e = ScaledComplex::exp(-I * kappa * p.x) * cplx{eps, 0.0};
                const cplx ikss = I * kappa * L.sigma * L.sigma;
                if (p.f_index >= 0) row[p.f_index] += e;
                if (p.u_index >= 0) row[p.u_index] += e * ikss;
                if (p.data_slot >= 0) rhs[p.data_slot] += e * (-ikss);
            }
            sys.A.push_back(std::move(row));
            sys.B.push_back(std::move(rhs));
        }
    }
    if (sys.A.size() != sys.unknowns) {
        throw Error(ErrorCode::SingularNode, "global relations do not close: " + std::to_string(sys.A.size()) +
                                                 " relations for " + std::to_string(sys.unknowns) + " unknowns");
    }
    return sys;
}

/// Solves the global relations at node k for target layer j.
inline InterfaceUnknowns solve_node(const SpectralModel& model, std::size_t j, cplx k) {
    InterfaceUnknowns out;
    out.k = k;
    const double sj = model.layers[j].sigma;
    out.omega = sj * sj * k * k;
    auto sys = build_relations(model, j, k);
    out.points = sys.points;
    out.slots = sys.slots;
    const std::size_t n_slots = out.slots.size();
    const std::size_t n_unknowns = sys.unknowns;
    auto& A = sys.A;
    auto& B = sys.B;

    // Row then column equilibration in log space.
    const std::size_t n = n_unknowns;
    std::vector<double> row_scale(n, -kInf), col_scale(n, -kInf);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) row_scale[r] = std::max(row_scale[r], A[r][c].log_abs());
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) col_scale[c] = std::max(col_scale[c], A[r][c].log_abs() - row_scale[r]);
    double rhs_scale = -kInf;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n_slots; ++s) rhs_scale = std::max(rhs_scale, B[r][s].log_abs() - row_scale[r]);
    if (!std::isfinite(rhs_scale)) rhs_scale = 0.0;

    std::vector<std::vector<cplx>> M(n, std::vector<cplx>(n));
    std::vector<std::vector<cplx>> Z(n, std::vector<cplx>(n_slots));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            auto v = A[r][c];
            v.log_scale -= row_scale[r] + col_scale[c];
            M[r][c] = v.value();
        }
        for (std::size_t s = 0; s < n_slots; ++s) {
            auto v = B[r][s];
            v.log_scale -= row_scale[r] + rhs_scale;
            Z[r][s] = v.value();
        }
    }
    if (!detail::dense_solve(M, Z)) {
        throw Error(ErrorCode::SingularNode, "global relations are singular at k=(" + std::to_string(k.real()) + "," +
                                                 std::to_string(k.imag()) + ")");
    }

    const std::size_t P = out.points.size();
    out.U.assign(P, std::vector<ScaledComplex>(n_slots));
    out.F.assign(P, std::vector<ScaledComplex>(n_slots));
    for (std::size_t p = 0; p < P; ++p) {
        const auto& pt = out.points[p];
        for (std::size_t s = 0; s < n_slots; ++s) {
            if (pt.u_index >= 0) {
                out.U[p][s] = ScaledComplex(Z[pt.u_index][s], rhs_scale - col_scale[pt.u_index]);
            }
            if (pt.f_index >= 0) {
                out.F[p][s] = ScaledComplex(Z[pt.f_index][s], rhs_scale - col_scale[pt.f_index]);
            }
        }
        if (pt.data_slot >= 0) out.U[p][pt.data_slot] = ScaledComplex(cplx{1.0, 0.0});
    }
    return out;
}

/// Per-slot kernel of the boundary term of layer j at node k:
///   upper half (left end l):  -(1/2pi) e^{-ikl} (F(l) + ik s_j^2 U(l))
///   lower half (right end r): -(1/2pi) e^{-ikr} (F(r) + ik s_j^2 U(r))
/// The full integrand is e^{ikx - w t} times the sum of kernel * slot value.
inline std::vector<ScaledComplex> boundary_kernel(const SpectralModel& model, std::size_t j,
                                                  const InterfaceUnknowns& u, bool upper) {
    const auto& L = model.layers[j];
    const double end = upper ? L.lo : L.hi;
    std::vector<ScaledComplex> K(u.slots.size());
    if (std::isinf(end)) return K;
    std::size_t p = 0;
    while (p < u.points.size() && u.points[p].x != end) ++p;
    const ScaledComplex e = ScaledComplex::exp(-I * u.k * end) * cplx{-0.5 / std::numbers::pi, 0.0};
    const cplx ikss = I * u.k * L.sigma * L.sigma;
    for (std::size_t s = 0; s < u.slots.size(); ++s) {
        ScaledComplex v = u.F[p][s] + u.U[p][s] * ikss;
        K[s] = v * e;
    }
    return K;
}

}  // namespace fokas_heat
