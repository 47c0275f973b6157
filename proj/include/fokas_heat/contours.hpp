#pragma once

// Deformed spectral contours and their quadrature.
//
// Upper contours run left to right: in along arg k = pi - theta, over the
// origin on an arc through i*r, out along arg k = theta.  Lower contours are
// the mirror image traversed right to left, so an integral over the real
// line equals minus the integral over the lower contour.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fokas_heat/error.hpp"
#include "fokas_heat/quadrature.hpp"
#include "fokas_heat/scaled_complex.hpp"

namespace fokas_heat {

enum class ContourHalf { Upper, Lower, Real };

struct ContourOptions {
    double theta = std::numbers::pi / 8.0;  // angle of the rays from the real axis
    double radius = 1.0;                    // arc radius before clamping
    double tolerance = 1e-10;               // relative to the data scale
    double decay = 1e-16;                   // Gaussian factor at the truncation radius
    std::size_t min_order = 16;
    std::size_t max_order = 256;
    std::size_t max_panels = 20000;
};

struct QuadNode {
    cplx k;
    cplx w;
};

/// Straight segment z0 -> z1, or arc of radius rho from angle phi0 to phi1.
struct Panel {
    bool arc = false;
    cplx z0{}, z1{};
    double rho = 0.0, phi0 = 0.0, phi1 = 0.0;

    cplx at(double s) const {  // s in [-1, 1]
        if (!arc) return 0.5 * (z0 + z1) + 0.5 * s * (z1 - z0);
        return std::polar(rho, 0.5 * (phi0 + phi1) + 0.5 * s * (phi1 - phi0));
    }
    cplx jacobian(double s) const {
        if (!arc) return 0.5 * (z1 - z0);
        const double phi = 0.5 * (phi0 + phi1) + 0.5 * s * (phi1 - phi0);
        return I * std::polar(rho, phi) * (0.5 * (phi1 - phi0));
    }
    double length() const { return arc ? rho * std::abs(phi1 - phi0) : std::abs(z1 - z0); }

    std::vector<QuadNode> nodes(std::size_t order) const {
        const auto& rule = gauss_legendre(order);
        std::vector<QuadNode> out(order);
        for (std::size_t j = 0; j < order; ++j) {
            out[j] = {at(rule.nodes[j]), rule.weights[j] * jacobian(rule.nodes[j])};
        }
        return out;
    }
};

struct SpectralContour {
    ContourHalf half = ContourHalf::Upper;
    std::vector<Panel> panels;  // upper orientation; lower halves are mirrored
    double truncation_radius = 0.0;
    double arc_radius = 0.0;
    std::vector<QuadNode> nodes;  // base-order nodes, already mirrored

    bool mirrored() const { return half == ContourHalf::Lower; }

    double length() const {
        double s = 0.0;
        for (const auto& p : panels) s += p.length();
        return s;
    }

    /// Nodes of one panel with the mirror applied: k -> conj(k), w -> -conj(w).
    std::vector<QuadNode> panel_nodes(std::size_t i, std::size_t order) const {
        auto out = panels[i].nodes(order);
        if (mirrored()) {
            for (auto& n : out) {
                n.k = std::conj(n.k);
                n.w = -std::conj(n.w);
            }
        }
        return out;
    }
};

/// Radius beyond which exp(-(sigma R)^2 t cos(2 theta)) is below `decay`.
inline double truncation_radius(double sigma, double t, double theta = std::numbers::pi / 8.0,
                                 double decay = 1e-16) {
    return std::sqrt(-std::log(decay) / (sigma * sigma * t * std::cos(2.0 * theta)));
}

/// Arc radius actually used: the arc crosses the sector where the Gaussian
/// grows like exp((sigma r)^2 t), so r is capped at 1/(sigma sqrt(t)).
inline double effective_arc_radius(double r, double sigma, double t) {
    return std::min(r, 1.0 / (sigma * std::sqrt(t)));
}

namespace detail {

/// Breakpoints on [a, b] (a >= 0): geometric grading from `first` up to
/// width `h`, then uniform.
inline std::vector<double> graded_breaks(double a, double b, double first, double h) {
    std::vector<double> br{a};
    double w = std::min(first, h);
    double s = a;
    while (s + 1e-12 * std::max(1.0, b) < b) {
        s = std::min(b, s + w);
        if (b - s < 0.25 * w) s = b;
        br.push_back(s);
        w = std::min(2.0 * w, h);
    }
    return br;
}

inline void add_ray(std::vector<Panel>& out, double angle, double r0, double r1, double first, double h,
                    bool inward) {
    const auto br = graded_breaks(r0, r1, first, h);
    const cplx dir = std::polar(1.0, angle);
    std::vector<Panel> ray;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) ray.push_back({false, br[i] * dir, br[i + 1] * dir});
    if (inward) {
        std::reverse(ray.begin(), ray.end());
        for (auto& p : ray) std::swap(p.z0, p.z1);
    }
    out.insert(out.end(), ray.begin(), ray.end());
}

}  // namespace detail

/// Builds the truncated contour for one half of the spectral plane.
///
/// `x_scale` bounds |x - endpoint| for the exponentials e^{ik(x - endpoint)}
/// the contour will carry and sets the panel width.  `feature` is the
/// smallest wavenumber scale near the origin (for grading the first panels).
inline SpectralContour build_contour(ContourHalf half, double sigma, double t, double x_scale, bool avoid_origin,
                                     double r, const ContourOptions& opt = {}, double feature = 0.0) {
    if (!(t > 0.0)) throw Error(ErrorCode::TimeTooSmall, "contour needs t > 0");
    SpectralContour c;
    c.half = half;
    const double R = truncation_radius(sigma, t, opt.theta, opt.decay);
    const double reff = avoid_origin ? effective_arc_radius(r, sigma, t) : 0.0;
    c.truncation_radius = R;
    c.arc_radius = reff;
    if (reff >= 0.5 * R) {
        throw Error(ErrorCode::TruncationTooTight, "arc radius is comparable to the truncation radius");
    }
    const double wiggle = (half == ContourHalf::Real) ? 1.0 : std::cos(opt.theta);
    double h = std::min((R - reff) / 8.0, 4.0 * std::numbers::pi / (x_scale * wiggle + 1e-300));
    h = std::max(h, (R - reff) / static_cast<double>(opt.max_panels));
    const double first = feature > 0.0 ? std::min(h, std::max(feature, 1e-6 * R)) : h;

    if (half == ContourHalf::Real) {
        detail::add_ray(c.panels, std::numbers::pi, 0.0, R, first, h, true);
        detail::add_ray(c.panels, 0.0, 0.0, R, first, h, false);
    } else {
        const double th = opt.theta;
        detail::add_ray(c.panels, std::numbers::pi - th, reff, R, first, h, true);
        if (avoid_origin) {
            const double span = std::numbers::pi - 2.0 * th;
            const std::size_t n_arc =
                std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(reff * span / std::min(h, reff))));
            for (std::size_t i = 0; i < n_arc; ++i) {
                const double p0 = std::numbers::pi - th - span * static_cast<double>(i) / n_arc;
                const double p1 = std::numbers::pi - th - span * static_cast<double>(i + 1) / n_arc;
                Panel p;
                p.arc = true;
                p.rho = reff;
                p.phi0 = p0;
                p.phi1 = p1;
                c.panels.push_back(p);
            }
        }
        detail::add_ray(c.panels, th, reff, R, first, h, false);
    }
    if (c.panels.size() > opt.max_panels) {
        const double ratio = static_cast<double>(c.panels.size()) / static_cast<double>(opt.max_panels);
        throw Error(ErrorCode::TimeTooSmall, "contour needs " + std::to_string(c.panels.size()) +
                                                 " panels; smallest admissible t is about " +
                                                 std::to_string(t * ratio * ratio));
    }
    for (std::size_t i = 0; i < c.panels.size(); ++i) {
        const auto pn = c.panel_nodes(i, opt.min_order);
        c.nodes.insert(c.nodes.end(), pn.begin(), pn.end());
    }
    return c;
}

namespace detail {

inline void check_finite(cplx v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorCode::NaNInIntegrand, "integrand is not finite on the contour");
    }
}

}  // namespace detail

/// Adaptive integral: per-panel Gauss-Legendre order doubling until two
/// successive orders agree to the panel's share of `abs_tol`.
template <class F>
cplx integrate(const SpectralContour& c, F&& f, double abs_tol, const ContourOptions& opt = {}) {
    const double total = c.length();
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < c.panels.size(); ++i) {
        const double share = abs_tol * c.panels[i].length() / total;
        auto panel_sum = [&](std::size_t n) {
            cplx s{0.0, 0.0};
            for (const auto& q : c.panel_nodes(i, n)) {
                const cplx v = f(q.k);
                detail::check_finite(v);
                s += q.w * v;
            }
            return s;
        };
        std::size_t n = opt.min_order;
        cplx prev = panel_sum(n);
        for (;;) {
            if (2 * n > opt.max_order) {
                throw Error(ErrorCode::NoConvergence, "panel " + std::to_string(i) + " did not converge by order " +
                                                          std::to_string(n));
            }
            const cplx next = panel_sum(2 * n);
            if (std::abs(next - prev) <= share) {
                sum += next;
                break;
            }
            prev = next;
            n *= 2;
        }
    }
    return sum;
}

/// Quadrature nodes with an x-independent integrand factor folded into the
/// weights.  sum(x) returns  integral of G(k) e^{ikx} dk.
struct NodeSet {
    std::vector<cplx> k;
    std::vector<cplx> mantissa;
    std::vector<double> log_scale;

    std::size_t size() const { return k.size(); }

    cplx sum(double x) const {
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < k.size(); ++i) {
            const double re = log_scale[i] - k[i].imag() * x;
            if (re < -745.0) continue;
            s += mantissa[i] * std::exp(cplx{re, k[i].real() * x});
        }
        return s;
    }

    void append(const NodeSet& o) {
        k.insert(k.end(), o.k.begin(), o.k.end());
        mantissa.insert(mantissa.end(), o.mantissa.begin(), o.mantissa.end());
        log_scale.insert(log_scale.end(), o.log_scale.begin(), o.log_scale.end());
    }
};

/// Builds a NodeSet for  integral of G(k) e^{ikx} dk  accurate to `abs_tol`
/// for every x in `test_x`; per-panel orders adapt as in integrate().
template <class G>
NodeSet build_node_set(const SpectralContour& c, G&& g, const std::vector<double>& test_x, double abs_tol,
                       const ContourOptions& opt = {}) {
    const double total = c.length();
    NodeSet out;
    for (std::size_t i = 0; i < c.panels.size(); ++i) {
        const double share = abs_tol * c.panels[i].length() / total;
        auto make = [&](std::size_t n) {
            NodeSet ns;
            for (const auto& q : c.panel_nodes(i, n)) {
                ScaledComplex v = g(q.k);
                detail::check_finite(v.mantissa);
                if (std::isnan(v.log_scale)) throw Error(ErrorCode::NaNInIntegrand, "integrand scale is NaN");
                v *= q.w;
                ns.k.push_back(q.k);
                ns.mantissa.push_back(v.mantissa);
                ns.log_scale.push_back(v.log_scale);
            }
            return ns;
        };
        std::size_t n = opt.min_order;
        NodeSet prev = make(n);
        for (;;) {
            if (2 * n > opt.max_order) {
                throw Error(ErrorCode::NoConvergence, "panel " + std::to_string(i) + " of " +
                                                          std::to_string(c.panels.size()) +
                                                          " did not converge by order " + std::to_string(n));
            }
            NodeSet next = make(2 * n);
            bool ok = true;
            for (double x : test_x) {
                const cplx d = next.sum(x) - prev.sum(x);
                detail::check_finite(d);
                if (std::abs(d) > share) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                out.append(next);
                break;
            }
            prev = std::move(next);
            n *= 2;
        }
    }
    return out;
}

}  // namespace fokas_heat
