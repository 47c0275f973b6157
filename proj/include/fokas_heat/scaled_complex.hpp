#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

namespace fokas_heat {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

/// Complex number stored as mantissa * exp(log_scale).
///
/// Contour integrands multiply factors such as e^{ik(x+2a)}, 1/Delta(k) and
/// finite-interval transforms whose magnitudes individually over- or
/// underflow on long rays while their product is O(1).
struct ScaledComplex {
    cplx mantissa{0.0, 0.0};
    double log_scale = 0.0;

    ScaledComplex() = default;
    ScaledComplex(cplx m, double s = 0.0) : mantissa(m), log_scale(s) { normalize(); }

    /// e^{z} without forming it.
    static ScaledComplex exp(cplx z) { return ScaledComplex(std::polar(1.0, z.imag()), z.real()); }

    bool is_zero() const { return mantissa == cplx{0.0, 0.0}; }

    cplx value() const {
        if (is_zero()) return {0.0, 0.0};
        if (log_scale < -745.0) return {0.0, 0.0};
        return mantissa * std::exp(log_scale);
    }

    /// log|z|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mantissa)) + log_scale;
    }

    void normalize() {
        const double m = std::abs(mantissa);
        if (m == 0.0 || !std::isfinite(m)) return;
        if (m > 1e64 || m < 1e-64) {
            const double l = std::log(m);
            mantissa /= m;
            log_scale += l;
        }
    }

    ScaledComplex& operator*=(const ScaledComplex& o) {
        mantissa *= o.mantissa;
        log_scale += o.log_scale;
        normalize();
        return *this;
    }
    ScaledComplex& operator/=(const ScaledComplex& o) {
        mantissa /= o.mantissa;
        log_scale -= o.log_scale;
        normalize();
        return *this;
    }
    ScaledComplex& operator*=(cplx c) {
        mantissa *= c;
        normalize();
        return *this;
    }
    ScaledComplex& operator+=(const ScaledComplex& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        if (log_scale >= o.log_scale) {
            mantissa += o.mantissa * std::exp(o.log_scale - log_scale);
        } else {
            mantissa = mantissa * std::exp(log_scale - o.log_scale) + o.mantissa;
            log_scale = o.log_scale;
        }
        normalize();
        return *this;
    }

    friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) { return a *= b; }
    friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) { return a /= b; }
    friend ScaledComplex operator*(ScaledComplex a, cplx c) { return a *= c; }
    friend ScaledComplex operator*(cplx c, ScaledComplex a) { return a *= c; }
    friend ScaledComplex operator+(ScaledComplex a, const ScaledComplex& b) { return a += b; }
};

/// Exponential sum  sum_j c_j e^{i k p_j}  with real shifts p_j.
struct ExpSum {
    struct Term {
        cplx coef;
        double shift;
    };
    std::vector<Term> terms;

    ExpSum() = default;
    ExpSum(std::initializer_list<Term> t) : terms(t) {}

    ExpSum& add(cplx coef, double shift) {
        terms.push_back({coef, shift});
        return *this;
    }

    /// Evaluated with the dominant exponential factored out.
    ScaledComplex operator()(cplx k) const {
        if (terms.empty()) return {};
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& t : terms) top = std::max(top, (I * k * t.shift).real());
        cplx sum{0.0, 0.0};
        for (const auto& t : terms) {
            if (t.coef == cplx{0.0, 0.0}) continue;
            sum += t.coef * std::exp(I * k * t.shift - top);
        }
        return ScaledComplex(sum, top);
    }

    /// Same sum with every shift multiplied by `scale` (argument k -> scale k).
    ExpSum rescaled(double scale) const {
        ExpSum out;
        out.terms.reserve(terms.size());
        for (const auto& t : terms) out.terms.push_back({t.coef, t.shift * scale});
        return out;
    }

    double max_abs_shift() const {
        double m = 0.0;
        for (const auto& t : terms) m = std::max(m, std::abs(t.shift));
        return m;
    }
};

}  // namespace fokas_heat
