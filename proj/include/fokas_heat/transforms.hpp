#pragma once

// Spatial Fourier transforms of initial data at complex wavenumber, plus the
// scalar time transform and error function used by the solution formulas.

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fokas_heat/error.hpp"
#include "fokas_heat/quadrature.hpp"
#include "fokas_heat/scaled_complex.hpp"

namespace fokas_heat {

/// One term  coef * x^power * e^{rate x}.
struct ExpPolyTerm {
    cplx coef{0.0, 0.0};
    int power = 0;
    cplx rate{0.0, 0.0};
};

/// Finite sum of ExpPolyTerm; closed-form transforms on half-lines.
/// Real profiles need conjugate pairs for complex rates; evaluation keeps
/// the real part.
struct ExpPolynomial {
    std::vector<ExpPolyTerm> terms;

    /// p(y + s) as an ExpPolynomial in y.
    ExpPolynomial shifted(double s) const {
        ExpPolynomial out;
        for (const auto& t : terms) {
            const cplx scale = t.coef * std::exp(t.rate * s);
            double binom = 1.0;
            for (int j = 0; j <= t.power; ++j) {
                if (j > 0) binom = binom * (t.power - j + 1) / j;
                const cplx c = scale * binom * std::pow(s, t.power - j);
                if (c != cplx{0.0, 0.0}) out.terms.push_back({c, j, t.rate});
            }
        }
        return out;
    }

    ExpPolynomial scaled(double factor) const {
        ExpPolynomial out = *this;
        for (auto& t : out.terms) t.coef *= factor;
        return out;
    }

    double operator()(double x) const {
        cplx sum{0.0, 0.0};
        for (const auto& t : terms) sum += t.coef * std::pow(x, t.power) * std::exp(t.rate * x);
        return sum.real();
    }

    /// Derivative, used to check initial interface conditions.
    double derivative(double x) const {
        cplx sum{0.0, 0.0};
        for (const auto& t : terms) {
            cplx d = t.rate * std::pow(x, t.power);
            if (t.power > 0) d += static_cast<double>(t.power) * std::pow(x, t.power - 1);
            sum += t.coef * d * std::exp(t.rate * x);
        }
        return sum.real();
    }
};

/// Profile on a finite interval, transformed by Gauss-Legendre quadrature.
struct SampledInterval {
    std::function<double(double)> profile;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t base_order = 64;
};

/// Initial data for one layer.
struct TransformSource {
    std::variant<ExpPolynomial, SampledInterval> data;

    static TransformSource zero() { return {ExpPolynomial{}}; }

    bool is_zero() const {
        if (const auto* p = std::get_if<ExpPolynomial>(&data)) return p->terms.empty();
        return false;
    }
    bool is_exp_polynomial() const { return std::holds_alternative<ExpPolynomial>(data); }

    double operator()(double x) const {
        if (const auto* p = std::get_if<ExpPolynomial>(&data)) return (*p)(x);
        return std::get<SampledInterval>(data).profile(x);
    }
};

enum class HalfLine { Left, Right };  // (-inf, 0) or (0, inf)

enum class Validity { Entire, UpperHalfPlane, LowerHalfPlane };

inline std::string_view to_string(Validity v) {
    switch (v) {
    case Validity::Entire: return "entire";
    case Validity::UpperHalfPlane: return "closed upper half-plane";
    case Validity::LowerHalfPlane: return "closed lower half-plane";
    }
    return "?";
}

/// Evaluable transform  k -> integral of e^{-ikx} u0(x) dx.
class TransformFn {
public:
    TransformFn() : impl_(Zero{}), validity_(Validity::Entire) {}

    Validity validity() const { return validity_; }
    bool identically_zero() const { return std::holds_alternative<Zero>(impl_); }

    bool admits(cplx k) const {
        const double slack = 1e-12 * std::max(1.0, std::abs(k));
        switch (validity_) {
        case Validity::Entire: return true;
        case Validity::UpperHalfPlane: return k.imag() >= -slack;
        case Validity::LowerHalfPlane: return k.imag() <= slack;
        }
        return false;
    }

    ScaledComplex eval_scaled(cplx k) const {
        if (!admits(k)) {
            throw Error(ErrorCode::TransformValidity,
                        "transform evaluated at k=(" + std::to_string(k.real()) + "," +
                            std::to_string(k.imag()) + ") outside " + std::string(to_string(validity_)));
        }
        return std::visit([&](const auto& impl) { return eval_impl(impl, k); }, impl_);
    }

    cplx operator()(cplx k) const { return eval_scaled(k).value(); }

    /// Upper bound on |x| over the support of a finite-interval transform
    /// (0 for half-line data); sets the oscillation scale of e^{-ikx}.
    double support_scale() const {
        if (const auto* q = std::get_if<Interval>(&impl_)) return std::max(std::abs(q->lo), std::abs(q->hi));
        return 0.0;
    }

    // Construction goes through halfline_transform / interval_transform.
    struct HalfLineClosedForm {
        std::vector<ExpPolyTerm> terms;  // in y = x - endpoint
        HalfLine side;
        double endpoint = 0.0;
    };
    struct Interval {
        std::function<double(double)> profile;
        double lo;
        double hi;
        std::size_t base_order;
        int extra_doublings = 0;
        struct Rung {
            std::once_flag once;
            std::vector<double> x;
            std::vector<double> wf;  // weight * profile
        };
        std::shared_ptr<std::array<Rung, 12>> rungs = std::make_shared<std::array<Rung, 12>>();

        std::size_t rung_index(cplx k) const {
            const double need = 0.5 * std::abs(k) * (hi - lo) + 32.0;
            std::size_t idx = 0;
            double n = static_cast<double>(base_order);
            while (n < need && idx + 1 < rungs->size()) {
                n *= 2.0;
                ++idx;
            }
            idx += static_cast<std::size_t>(extra_doublings);
            if (idx >= rungs->size() || n < need) {
                throw Error(ErrorCode::QuadratureOrderTooLow,
                            "interval transform needs more than " +
                                std::to_string(base_order << (rungs->size() - 1)) + " nodes at |k|=" +
                                std::to_string(std::abs(k)));
            }
            return idx;
        }

        const Rung& rung(std::size_t idx) const {
            Rung& r = (*rungs)[idx];
            std::call_once(r.once, [&] {
                const auto& rule = gauss_legendre(base_order << idx);
                const double mid = 0.5 * (lo + hi);
                const double half = 0.5 * (hi - lo);
                r.x.resize(rule.order());
                r.wf.resize(rule.order());
                for (std::size_t j = 0; j < rule.order(); ++j) {
                    r.x[j] = mid + half * rule.nodes[j];
                    r.wf[j] = half * rule.weights[j] * profile(r.x[j]);
                }
            });
            return r;
        }

        /// Sum at a given rung, plus the L1 magnitude of its terms.
        std::pair<ScaledComplex, double> sum_at(const Rung& r, cplx k) const {
            // |e^{-ikx}| = e^{Im(k) x}, largest at an endpoint.
            const double top = std::max(k.imag() * lo, k.imag() * hi);
            cplx s{0.0, 0.0};
            double l1 = 0.0;
            for (std::size_t j = 0; j < r.x.size(); ++j) {
                const cplx term = r.wf[j] * std::exp(-I * k * r.x[j] - top);
                s += term;
                l1 += std::abs(term);
            }
            return {ScaledComplex(s, top), l1};
        }
    };
    struct Zero {};

    using Impl = std::variant<Zero, HalfLineClosedForm, Interval>;

    TransformFn(Impl impl, Validity v) : impl_(std::move(impl)), validity_(v) {}

    const Impl& impl() const { return impl_; }

private:
    static ScaledComplex eval_impl(const Zero&, cplx) { return {}; }

    static ScaledComplex eval_impl(const HalfLineClosedForm& f, cplx k) {
        cplx sum{0.0, 0.0};
        for (const auto& t : f.terms) {
            double fact = 1.0;
            for (int j = 2; j <= t.power; ++j) fact *= j;
            // (-inf,0): (-1)^m m!/(rate-ik)^{m+1};  (0,inf): m!/(ik-rate)^{m+1}
            const cplx base = (f.side == HalfLine::Left) ? (t.rate - I * k) : (I * k - t.rate);
            double sign = 1.0;
            if (f.side == HalfLine::Left && (t.power % 2 == 1)) sign = -1.0;
            sum += t.coef * sign * fact / std::pow(base, t.power + 1);
        }
        if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
            throw Error(ErrorCode::TransformValidity, "half-line transform evaluated at its pole");
        }
        if (f.endpoint == 0.0) return ScaledComplex(sum);
        return ScaledComplex(sum) * ScaledComplex::exp(-I * k * f.endpoint);
    }

    static ScaledComplex eval_impl(const Interval& q, cplx k) {
        return q.sum_at(q.rung(q.rung_index(k)), k).first;
    }

    Impl impl_;
    Validity validity_;
};

/// Closed-form transform of ExpPolynomial data on (-inf, endpoint) or
/// (endpoint, inf).  The data are given in the global coordinate x.
inline TransformFn halfline_transform(const ExpPolynomial& src, HalfLine side, double endpoint = 0.0) {
    for (const auto& t : src.terms) {
        if (t.power < 0) throw Error(ErrorCode::WrongDecaySign, "negative power in ExpPolynomial term");
        const bool decays = (side == HalfLine::Left) ? t.rate.real() > 0.0 : t.rate.real() < 0.0;
        if (!decays) {
            throw Error(ErrorCode::WrongDecaySign,
                        std::string("ExpPolynomial rate ") + std::to_string(t.rate.real()) +
                            (side == HalfLine::Left ? " must have positive real part on (-inf,0)"
                                                    : " must have negative real part on (0,inf)"));
        }
    }
    if (src.terms.empty()) return {};
    auto local = endpoint == 0.0 ? src : src.shifted(endpoint);
    return TransformFn(TransformFn::HalfLineClosedForm{std::move(local.terms), side, endpoint},
                       side == HalfLine::Left ? Validity::UpperHalfPlane : Validity::LowerHalfPlane);
}

/// Gauss-Legendre transform of a profile on a finite interval.
///
/// The node count grows with |k| (about |k| L / 2 + 32 nodes); at
/// construction the rule is checked against its doubled order at |k| up to
/// `k_max` and bumped until the two agree to `tol` relative to the L1 size of
/// the quadrature sum.
inline TransformFn interval_transform(const SampledInterval& src, double k_max = 64.0, double tol = 1e-12) {
    if (!(src.hi > src.lo) || !std::isfinite(src.lo) || !std::isfinite(src.hi)) {
        throw Error(ErrorCode::DomainMismatch, "interval transform needs a finite interval with lo < hi");
    }
    TransformFn::Interval q{src.profile, src.lo, src.hi, std::max<std::size_t>(src.base_order, 8), 0, {}};
    q.rungs = std::make_shared<std::array<TransformFn::Interval::Rung, 12>>();
    const std::array<cplx, 5> probes{cplx{0.0, 0.0}, cplx{k_max, 0.0}, cplx{0.0, k_max}, cplx{0.0, -k_max},
                                     std::polar(k_max, 0.39269908169872414)};
    for (const auto& k : probes) {
        for (;;) {
            const std::size_t idx = q.rung_index(k);
            if (idx + 1 >= q.rungs->size()) {
                throw Error(ErrorCode::QuadratureOrderTooLow, "interval transform did not settle under doubling");
            }
            const auto [coarse, l1] = q.sum_at(q.rung(idx), k);
            const auto [fine, l1f] = q.sum_at(q.rung(idx + 1), k);
            // Both sums share the same log scale.
            const double diff = std::abs(coarse.mantissa - fine.mantissa);
            if (diff <= tol * std::max({l1, l1f, 1e-300})) break;
            ++q.extra_doublings;
        }
    }
    return TransformFn(std::move(q), Validity::Entire);
}

/// Transform of a layer's initial data over (lo, hi); either end may be
/// infinite.  ExpPolynomial data on a finite layer go through quadrature.
inline TransformFn make_transform(const TransformSource& src, double lo, double hi, double k_max = 64.0) {
    if (src.is_zero()) return {};
    const bool left_inf = std::isinf(lo);
    const bool right_inf = std::isinf(hi);
    if (left_inf && right_inf) throw Error(ErrorCode::DomainMismatch, "layer must have at least one finite end");
    if (left_inf || right_inf) {
        const auto* p = std::get_if<ExpPolynomial>(&src.data);
        if (!p) throw Error(ErrorCode::DomainMismatch, "sampled initial data is only allowed on finite layers");
        return left_inf ? halfline_transform(*p, HalfLine::Left, hi) : halfline_transform(*p, HalfLine::Right, lo);
    }
    if (const auto* p = std::get_if<ExpPolynomial>(&src.data)) {
        return interval_transform(SampledInterval{[q = *p](double x) { return q(x); }, lo, hi, 64}, k_max);
    }
    const auto& s = std::get<SampledInterval>(src.data);
    if (std::abs(s.lo - lo) > 1e-12 * std::max(1.0, std::abs(lo)) ||
        std::abs(s.hi - hi) > 1e-12 * std::max(1.0, std::abs(hi))) {
        throw Error(ErrorCode::DomainMismatch, "sampled initial data interval does not match its layer");
    }
    return interval_transform(s, k_max);
}

/// value * (e^{omega t} - 1) / omega, with a Taylor branch near omega t = 0.
inline cplx time_transform_constant(double value, cplx omega, double t) {
    const cplx z = omega * t;
    if (std::abs(z) < 1e-4) {
        return value * t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    }
    return value * (std::exp(z) - 1.0) / omega;
}

/// Error function; saturates to +-1 for |z| > 6.
inline double erf_real(double z) {
    if (z > 6.0) return 1.0;
    if (z < -6.0) return -1.0;
    return std::erf(z);
}

}  // namespace fokas_heat
