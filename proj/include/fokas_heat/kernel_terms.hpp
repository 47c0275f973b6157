#pragma once

// Closed-form solution formulas as term tables.
//
// Each term is  coef * k^p * N(k) / D(k) * source(k) * e^{ikx - w t}
// integrated along one route of one layer.  N and D are exponential sums.
// Tables are written exactly as printed; corrections are separate entries
// that rewrite labelled terms, so both readings stay available.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>
#include <utility>

#include "fokas_heat/scaled_complex.hpp"
#include "fokas_heat/solution.hpp"

namespace fokas_heat {

enum class SourceKind { Initial, DataLeft, DataRight };

struct TermSource {
    SourceKind kind = SourceKind::Initial;
    std::size_t layer = 0;
    double scale = 1.0;          // initial transform evaluated at scale * k
    bool constant_arg = false;   // printed argument lacks k: evaluated at `scale`
};

struct KernelTerm {
    std::string label;
    Route route = Route::Real;
    cplx coef{1.0, 0.0};
    int k_power = 0;
    ExpSum numerator;
    ExpSum denominator;  // empty means 1
    TermSource source;
};

struct Correction {
    std::string id;
    std::string description;
    std::function<void(struct FormulaSet&)> apply;
};

struct FormulaSet {
    std::string name;
    std::vector<std::vector<KernelTerm>> layers;
    /// Two semi-infinite layers: sign in front of erf for the left layer.
    double left_erf_sign = 1.0;
    std::vector<std::string> applied;

    KernelTerm& term(std::size_t layer, const std::string& label) {
        for (auto& t : layers.at(layer))
            if (t.label == label) return t;
        throw Error(ErrorCode::DomainMismatch, "no term '" + label + "' in " + name);
    }
};

namespace terms {

inline ExpSum E(double shift) { return ExpSum{{cplx{1.0, 0.0}, shift}}; }
inline ExpSum C(cplx c) { return ExpSum{{c, 0.0}}; }

inline ExpSum operator+(const ExpSum& a, const ExpSum& b) {
    ExpSum out = a;
    for (const auto& t : b.terms) out.terms.push_back(t);
    return out;
}
inline ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    ExpSum out;
    for (const auto& s : a.terms)
        for (const auto& t : b.terms) out.terms.push_back({s.coef * t.coef, s.shift + t.shift});
    return out;
}
inline ExpSum operator*(cplx c, const ExpSum& a) { return C(c) * a; }
inline ExpSum operator*(double c, const ExpSum& a) { return C(c) * a; }
inline ExpSum operator-(const ExpSum& a) { return -1.0 * a; }
inline ExpSum operator-(const ExpSum& a, const ExpSum& b) { return a + (-b); }

inline TermSource u0(std::size_t layer, double scale) { return {SourceKind::Initial, layer, scale, false}; }
inline TermSource data_left() { return {SourceKind::DataLeft, 0, 1.0, false}; }
inline TermSource data_right() { return {SourceKind::DataRight, 0, 1.0, false}; }

inline KernelTerm real_term(std::size_t layer, cplx coef) {
    return {"real", Route::Real, coef, 0, E(0.0), {}, u0(layer, 1.0)};
}

inline KernelTerm term(std::string label, Route route, ExpSum num, ExpSum den, TermSource src, int k_power = 0,
                       cplx coef = 1.0) {
    return {std::move(label), route, coef, k_power, std::move(num), std::move(den), src};
}

}  // namespace terms

// ---------------------------------------------------------------------------
// Denominators.

/// Two finite layers (-a,0), (0,b): sum form.
inline ExpSum delta_two_finite(double sl, double sr, double a, double b) {
    using namespace terms;
    const double p = b * sl / sr;
    return std::numbers::pi * ((sl + sr) * E(2 * a + 2 * p) + (sr - sl) * E(2 * a) + (sl - sr) * E(2 * p) +
                               C(-(sl + sr)));
}

/// Same, product form i pi (e^{2iak}+1)(e^{2ipk}+1)(sl tan(pk) + sr tan(ak)).
inline cplx delta_two_finite_product(double sl, double sr, double a, double b, cplx k) {
    const double p = b * sl / sr;
    return I * std::numbers::pi * (std::exp(2.0 * I * a * k) + 1.0) * (std::exp(2.0 * I * p * k) + 1.0) *
           (sl * std::tan(p * k) + sr * std::tan(a * k));
}

/// Three layers, middle (-a,a): left and right denominators.
inline ExpSum delta_three_infinite_left(double sl, double sm, double sr, double a) {
    using namespace terms;
    return std::numbers::pi * ((sl - sm) * (sm - sr) * E(0.0) + (sl + sm) * (sm + sr) * E(4 * a * sl / sm));
}
inline ExpSum delta_three_infinite_right(double sl, double sm, double sr, double a) {
    using namespace terms;
    return std::numbers::pi * ((sl + sm) * (sm + sr) * E(0.0) + (sl - sm) * (sm - sr) * E(4 * a * sr / sm));
}

/// Three finite layers (-a,0), (0,b), (b,c) with insulated ends.
inline ExpSum delta_three_finite_left(double sl, double sm, double sr, double a, double b, double c) {
    using namespace terms;
    const double pp = (sl + sm) * (sm + sr), pm = (sl + sm) * (sm - sr);
    const double mp = (sl - sm) * (sm + sr), mm = (sl - sm) * (sm - sr);
    return std::numbers::pi *
           (mm * E(2 * b * sl / sr) + mm * E(2 * (c * sl / sr + b * sl / sm + a)) + pm * E(2 * sl * (c / sr + b / sm)) -
            pm * E(2 * (b * sl / sr + a)) + mp * E(2 * c * sl / sr) - mp * E(2 * (a + b * sl / sr + b * sl / sm)) +
            pp * E(2 * b * (sl / sr + sl / sm)) - pp * E(2 * (c * sl / sr + a)));
}
inline ExpSum delta_three_finite_middle(double sl, double sm, double sr, double a, double b, double c) {
    using namespace terms;
    const double pp = (sl + sm) * (sm + sr), pm = (sl + sm) * (sm - sr);
    const double mp = (sl - sm) * (sm + sr), mm = (sl - sm) * (sm - sr);
    return std::numbers::pi *
           (mm * E(a * sm / sl + b + c * sm / sr) - mm * E(2 * b * sm / sr) + pm * E(2 * sm * (b / sr + a / sl)) -
            pm * E(2 * (c * sm / sr + b)) + mp * E(2 * (a * sm / sl + b * sm / sr + b)) - mp * E(2 * c * sm / sr) -
            pp * E(2 * b * (sm / sr + 1)) + pp * E(2 * sm * (c / sr + a / sl)));
}
inline ExpSum delta_three_finite_right(double sl, double sm, double sr, double a, double b, double c) {
    using namespace terms;
    const double pp = (sl + sm) * (sm + sr), pm = (sl + sm) * (sm - sr);
    const double mp = (sl - sm) * (sm + sr), mm = (sl - sm) * (sm - sr);
    return std::numbers::pi *
           (mm * E(2 * b) + mm * E(2 * (a * sr / sl + b * sr / sm + c)) + pm * E(2 * (b * sr / sm + c)) -
            pm * E(2 * (a * sr / sl + b)) + mp * E(2 * c) - mp * E(2 * (a / sl + b + b * sr / sm)) +
            pp * E(2 * b * (1 + sr / sm)) - pp * E(2 * (a * sr / sl + c)));
}

// ---------------------------------------------------------------------------
// Printed tables.

inline FormulaSet printed_two_semi_infinite(double sl, double sr) {
    using namespace terms;
    FormulaSet f;
    f.name = "two_semi_infinite";
    const double pi = std::numbers::pi;
    f.layers.resize(2);
    f.layers[0] = {real_term(0, 0.5 / pi),
                   term("vL(-k)", Route::Lower, C((sr - sl) / (2 * pi * (sl + sr))), {}, u0(0, -1.0)),
                   term("vR", Route::Lower, C(-sl / (pi * (sl + sr))), {}, u0(1, sl / sr))};
    f.layers[1] = {real_term(1, 0.5 / pi),
                   term("vR(-k)", Route::Upper, C((sr - sl) / (2 * pi * (sl + sr))), {}, u0(1, -1.0)),
                   term("vL", Route::Upper, C(sr / (pi * (sl + sr))), {}, u0(0, sr / sl))};
    f.left_erf_sign = -1.0;  // printed 1 - erf(x / (2 sl sqrt t))
    return f;
}

inline FormulaSet printed_two_finite(double sl, double sr, double a, double b) {
    using namespace terms;
    FormulaSet f;
    f.name = "two_finite";
    const double p = b * sl / sr, q = a * sr / sl;
    const ExpSum dl = delta_two_finite(sl, sr, a, b);
    const ExpSum dr = dl.rescaled(sr / sl);
    const cplx i = I;
    f.layers.resize(2);
    auto& L = f.layers[0];
    L.push_back(real_term(0, 1.0));
    L.push_back(term("fR", Route::Lower, -2.0 * i * sl * sl * sr * E(2 * a + p), dl, data_right(), 1));
    L.push_back(term("fL", Route::Lower, i * sl * sl * (sl + sr) * E(a) + (-i * sl * sl * (sl - sr)) * E(a + 2 * p), dl,
                     data_left(), 1));
    L.push_back(term("uL(k)", Route::Lower, 0.5 * (C(-(sl + sr)) + (sl - sr) * E(2 * p)), dl, u0(0, 1.0)));
    L.push_back(term("uL(-k)", Route::Lower, 0.5 * ((sl + sr) * E(2 * a) + (sr - sl) * E(2 * a + 2 * p)), dl, u0(0, -1.0)));
    L.push_back(term("uR(k)", Route::Lower, -sl * E(2 * a + 2 * p), dl, u0(1, sl / sr)));
    L.push_back(term("uR(-k)", Route::Lower, sl * E(2 * a), dl, u0(1, -sl / sr)));
    L.push_back(term("fL+", Route::Upper, i * sl * sl * (sl + sr) * E(a) + (-i * sl * sl * (sl - sr)) * E(a + 2 * p), dl,
                     data_left(), 1));
    L.push_back(term("fR+", Route::Upper, -2.0 * i * sl * sl * sr * (1 + sl * sr) * E(2 * a + p), dl, data_right(), 1));
    L.push_back(term("uL(k)+", Route::Upper, 0.5 * ((sl - sr) * E(2 * a) + (-(sl + sr)) * E(2 * a + 2 * p)), dl, u0(0, 1.0)));
    L.push_back(term("uL(-k)+", Route::Upper, 0.5 * ((sl + sr) * E(2 * a) + (sr - sl) * E(2 * a + 2 * p)), dl, u0(0, -1.0)));
    L.push_back(term("uR(k)+", Route::Upper, -sl * E(2 * a + 2 * p), dl, u0(1, sl / sr)));
    L.push_back(term("uR(-k)+", Route::Upper, sl * E(2 * a), dl, u0(1, -sl / sr)));

    auto& R = f.layers[1];
    R.push_back(real_term(1, 1.0));
    R.push_back(term("fL", Route::Lower, 2.0 * i * sl * sr * sr * E(q), dr, data_left(), 1));
    R.push_back(term("fR", Route::Lower, (-i * sr * sr * (sl - sr)) * E(b) + (-i * sr * sr) * E(b + 2 * q), dr, data_right(), 1));
    R.push_back(term("uL(k)", Route::Lower, -sr * E(0), dr, u0(0, sr / sl)));
    R.push_back(term("uL(-k)", Route::Lower, sr * E(2 * q), dr, u0(0, -sr / sl)));
    R.push_back(term("uR(k)", Route::Lower, 0.5 * ((-(sl - sr)) * E(2 * b) + (-(sl + sr)) * E(2 * b + 2 * q)), dr, u0(1, 1.0)));
    R.push_back(term("uR(-k)", Route::Lower, 0.5 * ((sl - sr) * E(0) + (sl + sr) * E(2 * q)), dr, u0(1, -1.0)));
    R.push_back(term("fL+", Route::Upper, 2.0 * i * sl * sr * sr * E(q), dr, data_left(), 1));
    R.push_back(term("fR+", Route::Upper, (-i * sr * (sl - sr)) * E(b) + (-i * sr * sr * (sl + sr)) * E(b + 2 * q), dr,
                     data_right(), 1));
    R.push_back(term("uL(k)+", Route::Upper, -sr * E(0), dr, u0(0, sr / sl)));
    R.push_back(term("uL(-k)+", Route::Upper, sr * E(2 * q), dr, u0(0, -sr / sl)));
    R.push_back(term("uR(k)+", Route::Upper, 0.5 * (C(-(sl + sr)) + (sr - sl) * E(2 * q)), dr, u0(1, 1.0)));
    R.push_back(term("uR(-k)+", Route::Upper, 0.5 * ((sl - sr) * E(0) + (sl + sr) * E(2 * q)), dr, u0(1, -1.0)));
    return f;
}

/// Three layers with semi-infinite outer layers.  The restricted table keeps
/// only left initial data; the full table adds middle and right data, with
/// the right layer obtained from the left by a -> -a, L <-> R and a change of
/// contour carrying `orientation`.
inline FormulaSet printed_three_infinite(double sl, double sm, double sr, double a, bool full, double orientation = -1.0) {
    using namespace terms;
    FormulaSet f;
    f.name = full ? "three_infinite_full" : "three_infinite_restricted";
    const double pi = std::numbers::pi;
    f.layers.resize(3);

    // Left layer in terms of (sl, sm, sr, a) and the outer-layer indices; the
    // right layer reuses it with the substitution.
    auto left_terms = [&](double l, double m, double r, double aa, std::size_t self, std::size_t other, Route route,
                          double sign) {
        const ExpSum dl = delta_three_infinite_left(l, m, r, aa);
        std::vector<KernelTerm> out;
        out.push_back(real_term(self, 0.5 / pi));
        out.push_back(term("uL(-k)", route,
                           sign * (-0.5) * E(2 * aa) * ((l + m) * (m - r) * E(0.0) + (l - m) * (m + r) * E(4 * aa * l / m)),
                           dl, u0(self, -1.0)));
        if (full) {
            out.push_back(term("uM(k)", route, sign * (-l * (m + r)) * E(aa + 3 * aa * l / m), dl, u0(1, l / m)));
            out.push_back(term("uM(-k)", route, sign * (l * (r - m)) * E(aa + aa * l / m), dl, u0(1, -l / m)));
            out.push_back(term("uR(k)", route, sign * (-2 * l * m) * E(aa + aa * l / r + 2 * aa * l / m), dl, u0(other, l / r)));
        }
        return out;
    };
    f.layers[0] = left_terms(sl, sm, sr, a, 0, 2, Route::Lower, 1.0);

    const ExpSum dlm = delta_three_infinite_left(sl, sm, sr, a).rescaled(sm / sl);
    const ExpSum drm = delta_three_infinite_right(sl, sm, sr, a).rescaled(sm / sr);
    auto& M = f.layers[1];
    if (full) M.push_back(real_term(1, 0.5));
    M.push_back(term("uL(-k)", Route::Lower, -sm * (sm - sr) * E(a + a * sm / sl), dlm, u0(0, -sm / sl)));
    M.push_back(term("uL(k)", Route::Upper, sm * (sm + sr) * E(a - a * sm / sl), drm, u0(0, sm / sl)));
    if (full) {
        M.push_back(term("uM(k)", Route::Lower, 0.5 * (sl - sm) * (sm - sr) * E(0.0), dlm, u0(1, 1.0)));
        M.push_back(term("uR(k)", Route::Lower, -sm * (sl + sm) * E(3 * a + a * sm / sr), dlm, u0(2, sm / sr)));
        M.push_back(term("uM(-k)", Route::Lower, -0.5 * (sl + sm) * (sm - sr) * E(2 * a), dlm, u0(1, -1.0)));
        M.push_back(term("uM(k)+", Route::Upper, 0.5 * (sm - sl) * (sm + sr) * E(2 * a), drm, u0(1, 1.0)));
        M.push_back(term("uM(-k)+", Route::Upper, 0.5 * (sm - sl) * (sm - sr) * E(4 * a), drm, u0(1, -1.0)));
        M.push_back(term("uR(-k)+", Route::Upper, sm * (sm - sl) * E(3 * a - a * sm / sr), drm, u0(2, -sm / sr)));
    }

    if (full) {
        f.layers[2] = left_terms(sr, sm, sl, -a, 2, 0, Route::Upper, orientation);
    } else {
        const ExpSum dr = delta_three_infinite_right(sl, sm, sr, a);
        f.layers[2] = {term("uL(k)", Route::Upper, 2 * sm * sr * E(-a - a * sr / sl + 2 * a * sr / sm), dr, u0(0, sr / sl))};
    }
    return f;
}

/// Three finite layers with insulated ends.
inline FormulaSet printed_three_finite(double sl, double sm, double sr, double a, double b, double c, bool full) {
    using namespace terms;
    FormulaSet f;
    f.name = full ? "three_finite_full" : "three_finite_restricted";
    const double pi = std::numbers::pi;
    f.layers.resize(3);

    // Left layer.
    const ExpSum dl = delta_three_finite_left(sl, sm, sr, a, b, c);
    const double mm = (sl - sm) * (sm - sr), pm = (sl + sm) * (sm - sr), mp = (sl - sm) * (sm + sr),
                 pp = (sl + sm) * (sm + sr);
    const ExpSum b1 = mm * E(2 * b * sl / sr) + pm * E(2 * sl * (c / sr + b / sm)) + mp * E(2 * c * sl / sr) +
                      pp * E(2 * b * sl * (1 / sr + 1 / sm));
    const ExpSum b2 = mm * E(2 * sl * (c / sr + b / sm)) + pm * E(2 * b * sl / sr) + mp * E(2 * b * sl * (1 / sr + 1 / sm)) +
                      pp * E(2 * c * sl / sr);
    auto& L = f.layers[0];
    L.push_back(real_term(0, 0.5 / pi));
    L.push_back(term("uL(k)", Route::Lower, 0.5 * b1, dl, u0(0, 1.0)));
    L.push_back(term("uL(-k)", Route::Lower, 0.5 * E(2 * a) * b1, dl, u0(0, -1.0)));
    L.push_back(term("uL(k)+", Route::Upper, 0.5 * E(2 * a) * b2, dl, u0(0, 1.0)));
    L.push_back(term("uL(-k)+", Route::Upper, 0.5 * E(2 * a) * b1, dl, u0(0, -1.0)));
    if (full) {
        for (Route route : {Route::Lower, Route::Upper}) {
            const std::string s = route == Route::Upper ? "+" : "";
            L.push_back(term("uM(k)" + s, route,
                             -sl * E(2 * a + b * sl / sm) * ((sm - sr) * E(2 * b * sl / sr) + (sm + sr) * E(2 * c * sl / sr)), dl,
                             u0(1, sl / sm)));
            L.push_back(term("uM(-k)" + s, route,
                             -sl * E(2 * a + b * sl / sm) * ((sm - sr) * E(2 * c * sl / sr) + (sm + sr) * E(2 * b * sl / sr)), dl,
                             u0(1, -sl / sm)));
            L.push_back(term("uR(k)" + s, route, 2 * sl * sm * E(2 * a + 2 * c * sl / sr + b * sl / sr + b * sl / sm), dl,
                             u0(2, sl / sr)));
            L.push_back(term("uR(-k)" + s, route, 2 * sl * sm * E(2 * a + b * sl / sr + b * sl / sm), dl, u0(2, -sl / sr)));
        }
    }

    // Middle layer.
    const ExpSum dm = delta_three_finite_middle(sl, sm, sr, a, b, c);
    const ExpSum P = (sm - sr) * E(2 * c * sm / sr) + (sm + sr) * E(2 * b * sm / sr);
    const ExpSum Q = (sm - sr) * E(2 * b * sm / sr) + (sm + sr) * E(2 * c * sm / sr);
    const ExpSum A = (sm - sl) * E(0.0) + (sl + sm) * E(2 * a * sm / sl);
    const ExpSum A2 = (sm + sl) * E(0.0) + (sm - sl) * E(2 * a * sm / sl);
    auto& M = f.layers[1];
    if (full) M.push_back(real_term(1, 0.5 / pi));
    M.push_back(term("uL(k)", Route::Lower, -sm * E(b) * P, dm, u0(0, sm / sl)));
    if (full) {
        M.push_back(term("uL(-k)", Route::Lower, -sm * E(b + 2 * a * sm / sl) * P, dm, u0(0, -sm / sl)));
    } else {
        // Printed argument is the constant -sm/sl.
        auto t = term("uL(-k)", Route::Lower, -sm * E(b + 2 * a * sm / sl) * P, dm, u0(0, -sm / sl));
        t.source.constant_arg = true;
        M.push_back(t);
    }
    M.push_back(term("uL(k)+", Route::Upper, -sm * E(b) * P, dm, u0(0, sm / sl)));
    M.push_back(term("uL(-k)+", Route::Upper, -sm * E(b + 2 * a * sm / sl) * P, dm, u0(0, -sm / sl)));
    if (full) {
        M.push_back(term("uM(k)", Route::Lower, -0.5 * A * Q, dm, u0(1, 1.0)));
        M.push_back(term("uM(-k)", Route::Lower, -0.5 * A * P, dm, u0(1, -1.0)));
        M.push_back(term("uR(k)", Route::Lower, -sm * E(sm / sr * (b + 2 * c)) * A, dm, u0(2, sm / sr)));
        M.push_back(term("uR(-k)", Route::Lower, -sm * E(b * sm / sr) * A, dm, u0(2, -sm / sr)));
        M.push_back(term("uM(k)+", Route::Upper, -0.5 * E(2 * b) * A2 * P, dm, u0(1, 1.0)));
        M.push_back(term("uM(-k)+", Route::Upper, -0.5 * A * P, dm, u0(1, -1.0)));
        M.push_back(term("uR(k)+", Route::Upper, -sm * E(b * sm / sr + 2 * c * sm / sr) * A, dm, u0(2, sm / sr)));
        M.push_back(term("uR(-k)+", Route::Upper, -sm * E(b * sm / sr) * A, dm, u0(2, -sm / sr)));
    }

    // Right layer.
    const ExpSum dr = delta_three_finite_right(sl, sm, sr, a, b, c);
    auto& R = f.layers[2];
    if (full) R.push_back(real_term(2, 0.5 / pi));
    R.push_back(term("uL(k)", Route::Lower, -2 * sm * sr * E(b + b * sr / sm), dr, u0(0, sr / sl)));
    R.push_back(term("uL(-k)", Route::Lower, -2 * sm * sr * E(b + b * sr / sm + 2 * a * sr / sl), dr, u0(0, -sr / sl)));
    R.push_back(term("uL(k)+", Route::Upper, 2 * sm * sr * E(b + b * sr / sm), dr, u0(0, sr / sl)));
    R.push_back(term("uL(-k)+", Route::Upper, 2 * sm * sr * E(b + b * sr / sm + 2 * a * sr / sl), dr, u0(0, -sr / sl)));
    if (full) {
        const ExpSum G = (sl + sm) * E(0.0) + (sm - sl) * E(2 * a * sr / sl);
        const ExpSum H = (sm - sl) * E(0.0) + (sm + sl) * E(2 * a * sr / sl);
        const ExpSum J = (sl - sm) * E(0.0) + (-(sl + sm)) * E(2 * a * sr / sl);
        // Printed "(sl + sm + e^{2iak sr/sl})" without the (sm - sl) factor.
        const ExpSum Gp = (sl + sm) * E(0.0) + E(2 * a * sr / sl);
        const ExpSum Hp = (sm - sl) * E(0.0) + (sl + sm) * E(2 * a * sr / sl);
        R.push_back(term("uM(k)", Route::Lower, E(b + b * sr / sm) * G, dr, u0(1, sr / sm)));
        R.push_back(term("uM(-k)", Route::Lower, E(b) * H, dr, u0(1, -sr / sm)));
        R.push_back(term("uR(k)", Route::Lower,
                         0.5 * E(2 * b) * ((sr - sm) * J + (-(sm + sr)) * E(2 * b * sr / sm) * G), dr, u0(2, 1.0)));
        R.push_back(term("uR(-k)", Route::Lower,
                         0.5 * ((sr + sm) * J + (-(sr - sm)) * E(2 * b * sr / sm) * G), dr, u0(2, -1.0)));
        R.push_back(term("uM(k)+", Route::Upper, -sr * E(b + 2 * b * sr / sm) * G, dr, u0(1, sr / sm)));
        R.push_back(term("uM(-k)+", Route::Upper, sr * E(b) * H, dr, u0(1, -sr / sm)));
        R.push_back(term("uR(k)+", Route::Upper,
                         0.5 * E(2 * c) * ((sr - sm) * E(2 * b * sr / sm) * Gp + (sm + sr) * Hp), dr, u0(2, 1.0)));
        // Printed with no operator between the two products; read as a sum.
        R.push_back(term("uR(-k)+", Route::Upper, 0.5 * ((sr - sm) * E(2 * b * sr / sm) * Gp + (sm + sr) * Hp), dr,
                         u0(2, -1.0)));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Corrections localised by comparing each term with the global-relation
// solve at the same node (see compare_slots below).

inline std::vector<Correction> corrections_for(const std::string& name, double sl, double sr, double a, double b) {
    using namespace terms;
    const double pi = std::numbers::pi;
    const cplx i = I;
    std::vector<Correction> out;
    auto real_norm = [pi](std::size_t layer) {
        return [pi, layer](FormulaSet& f) {
            for (auto& t : f.layers[layer])
                if (t.route == Route::Real) t.coef = 0.5 / pi;
        };
    };
    if (name == "two_semi_infinite") {
        out.push_back({"erf-sign", "left step term is 1 + erf(x/(2 sl sqrt t)), not 1 - erf",
                       [](FormulaSet& f) { f.left_erf_sign = 1.0; }});
    } else if (name == "two_finite") {
        const double p = b * sl / sr, q = a * sr / sl;
        out.push_back({"real-axis-norm", "real-axis terms carry 1/(2 pi)", [real_norm](FormulaSet& f) {
                           real_norm(0)(f);
                           real_norm(1)(f);
                       }});
        out.push_back({"left-fR-upper-factor", "drop the extra (1 + sl sr) factor in the upper fR term of the left layer",
                       [=](FormulaSet& f) { f.term(0, "fR+").numerator = -2.0 * i * sl * sl * sr * E(2 * a + p); }});
        out.push_back({"right-fR-lower-factor", "second lower fR coefficient of the right layer needs (sl + sr)",
                       [=](FormulaSet& f) {
                           f.term(1, "fR").numerator =
                               (-i * sr * sr * (sl - sr)) * E(b) + (-i * sr * sr * (sl + sr)) * E(b + 2 * q);
                       }});
        out.push_back({"right-fR-upper-power", "first upper fR coefficient of the right layer is -i sr^2 (sl - sr)",
                       [=](FormulaSet& f) {
                           f.term(1, "fR+").numerator =
                               (-i * sr * sr * (sl - sr)) * E(b) + (-i * sr * sr * (sl + sr)) * E(b + 2 * q);
                       }});
        out.push_back({"right-uR-swap", "lower and upper uR(k) numerators of the right layer are interchanged",
                       [](FormulaSet& f) { std::swap(f.term(1, "uR(k)").numerator, f.term(1, "uR(k)+").numerator); }});
    } else if (name == "three_infinite_full") {
        out.push_back({"middle-real-norm", "middle real-axis term carries 1/(2 pi), not 1/2", real_norm(1)});
        out.push_back({"middle-upper-swap", "upper uM(k) and uM(-k) terms of the middle layer take each other's argument",
                       [](FormulaSet& f) {
                           std::swap(f.term(1, "uM(k)+").source.scale, f.term(1, "uM(-k)+").source.scale);
                       }});
    }
    return out;
}

/// Applies every known correction for the table, recording the ids.
inline void apply_corrections(FormulaSet& f, double sl, double sr, double a = 0.0, double b = 0.0) {
    for (const auto& c : corrections_for(f.name, sl, sr, a, b)) {
        c.apply(f);
        f.applied.push_back(c.id);
    }
}

// ---------------------------------------------------------------------------
// Evaluation.

/// Kernels from a term table.
class TableKernels final : public KernelProvider {
public:
    TableKernels(SpectralModel model, FormulaSet formulas, bool keep_pole)
        : model_(std::move(model)), f_(std::move(formulas)), keep_pole_(keep_pole) {}

    ScaledComplex kernel(const KernelTerm& tm, cplx k) const {
        ScaledComplex v = tm.numerator(k) * tm.coef;
        if (tm.k_power) v *= std::pow(k, tm.k_power);
        if (!tm.denominator.terms.empty()) {
            const ScaledComplex d = tm.denominator(k);
            if (d.is_zero()) throw Error(ErrorCode::SingularNode, "denominator vanishes on the contour");
            v /= d;
        }
        return v;
    }

    ScaledComplex integrand(std::size_t j, Route route, cplx k, double t) const override {
        const auto& L = model_.layers[j];
        const cplx omega = L.sigma * L.sigma * k * k;
        const ScaledComplex damp = ScaledComplex::exp(-omega * t);
        ScaledComplex sum;
        for (const auto& tm : f_.layers[j]) {
            if (tm.route != route) continue;
            ScaledComplex src;
            if (tm.source.kind == SourceKind::Initial) {
                const auto& u0 = model_.layers.at(tm.source.layer).u0;
                if (u0.identically_zero()) continue;
                src = u0.eval_scaled(tm.source.constant_arg ? cplx{tm.source.scale, 0.0} : tm.source.scale * k) * damp;
            } else {
                const auto& end = tm.source.kind == SourceKind::DataLeft ? model_.left : model_.right;
                if (end.value == 0.0) continue;
                src = ScaledComplex(damped_data_transform(end.value, omega, t, keep_pole_));
            }
            sum += kernel(tm, k) * src;
        }
        return sum;
    }

    bool has_route(std::size_t j, Route route) const override {
        for (const auto& tm : f_.layers[j]) {
            if (tm.route != route) continue;
            if (tm.source.kind == SourceKind::Initial) {
                if (!model_.layers.at(tm.source.layer).u0.identically_zero()) return true;
            } else {
                const auto& end = tm.source.kind == SourceKind::DataLeft ? model_.left : model_.right;
                if (end.value != 0.0) return true;
            }
        }
        return false;
    }

    double shift_scale(std::size_t j) const override {
        double s = 0.0;
        for (const auto& tm : f_.layers[j]) s = std::max(s, tm.numerator.max_abs_shift() + tm.denominator.max_abs_shift());
        return s;
    }

    const FormulaSet& formulas() const { return f_; }
    const SpectralModel& model() const { return model_; }

private:
    SpectralModel model_;
    FormulaSet f_;
    bool keep_pole_;
};

/// Per-source-slot kernels of a table and of the linear solve at one node,
/// for localising transcription errors.  Slot numbering follows
/// spectral_system.hpp; table terms whose argument does not map to a slot
/// are reported under slot -1.
struct SlotComparison {
    int slot;
    std::string labels;
    cplx table;
    cplx solved;
};

inline std::vector<SlotComparison> compare_slots(const SpectralModel& model, const FormulaSet& f, std::size_t j,
                                                 Route route, cplx k) {
    const auto u = solve_node(model, j, k);
    const auto K = boundary_kernel(model, j, u, route == Route::Upper);
    std::vector<SlotComparison> out(K.size());
    for (std::size_t s = 0; s < K.size(); ++s) out[s] = {static_cast<int>(s), "", {}, K[s].value()};
    const double sj = model.layers[j].sigma;
    const auto pts = model.points();
    TableKernels tk(model, f, false);
    for (const auto& tm : f.layers[j]) {
        if (tm.route != route) continue;
        int slot = -1;
        if (tm.source.kind == SourceKind::Initial && !tm.source.constant_arg) {
            const double want = sj / model.layers[tm.source.layer].sigma;
            if (std::abs(std::abs(tm.source.scale) - want) < 1e-12 * want)
                slot = static_cast<int>(2 * tm.source.layer + (tm.source.scale > 0 ? 0 : 1));
        } else if (tm.source.kind != SourceKind::Initial) {
            const double x = tm.source.kind == SourceKind::DataLeft ? model.layers.front().lo : model.layers.back().hi;
            for (const auto& p : pts)
                if (p.x == x) slot = p.data_slot;
        }
        const cplx v = tk.kernel(tm, k).value();
        if (slot < 0) {
            out.push_back({-1, tm.label, v, {}});
            continue;
        }
        out[slot].table += v;
        out[slot].labels += (out[slot].labels.empty() ? "" : ",") + tm.label;
    }
    return out;
}

}  // namespace fokas_heat
