#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fokas_heat/error.hpp"
#include "fokas_heat/transforms.hpp"

namespace fokas_heat {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// One homogeneous layer; sigma is the square root of the diffusivity.
struct LayerSpec {
    double sigma = 1.0;
    Interval extent;
};

enum class Geometry { TwoSemiInfinite, TwoFinite, ThreeInfinite, ThreeFinite };

inline std::string_view to_string(Geometry g) {
    switch (g) {
    case Geometry::TwoSemiInfinite: return "two_semi_infinite";
    case Geometry::TwoFinite: return "two_finite";
    case Geometry::ThreeInfinite: return "three_infinite";
    case Geometry::ThreeFinite: return "three_finite";
    }
    return "?";
}

/// value_coef * u + flux_coef * u_x = data at one end.  Only constant data.
struct BoundaryOperator {
    double value_coef = 1.0;
    double flux_coef = 0.0;
    double data = 0.0;

    static BoundaryOperator dirichlet(double v) { return {1.0, 0.0, v}; }
    static BoundaryOperator neumann(double v = 0.0) { return {0.0, 1.0, v}; }

    bool is_dirichlet() const { return flux_coef == 0.0 && value_coef != 0.0; }
    bool is_neumann() const { return value_coef == 0.0 && flux_coef != 0.0; }
    /// Prescribed value u(end) for a Dirichlet end.
    double dirichlet_value() const { return data / value_coef; }
};

/// A composite-medium heat problem in fixed coordinates:
///   two_semi_infinite  (-inf,0) (0,inf)
///   two_finite         (-a,0) (0,b)
///   three_infinite     (-inf,-a) (-a,a) (a,inf)
///   three_finite       (-a,0) (0,b) (b,c)
///
/// For two_semi_infinite the initial data are the deviations u0 - gamma on
/// each side; the far-field values are gamma_left and gamma_right.
struct ProblemConfig {
    Geometry geometry = Geometry::TwoSemiInfinite;
    std::vector<LayerSpec> layers;
    std::vector<TransformSource> initial;
    double gamma_left = 0.0;
    double gamma_right = 0.0;
    std::optional<BoundaryOperator> left_end;
    std::optional<BoundaryOperator> right_end;

    std::size_t layer_count() const { return layers.size(); }
    const LayerSpec& layer(std::size_t i) const { return layers.at(i); }
    double sigma(std::size_t i) const { return layers.at(i).sigma; }

    /// Index of the layer containing x; interface points go to the left layer.
    std::optional<std::size_t> layer_of(double x) const {
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (layers[i].extent.contains(x)) return i;
        }
        return std::nullopt;
    }

    /// Initial temperature (including far-field offsets) at x.
    double initial_value(double x) const {
        const auto i = layer_of(x);
        if (!i) return 0.0;
        double v = initial[*i](x);
        if (geometry == Geometry::TwoSemiInfinite) v += (*i == 0 ? gamma_left : gamma_right);
        return v;
    }
};

// Factories in the fixed coordinates.

inline ProblemConfig two_semi_infinite(double sigma_l, double sigma_r, ExpPolynomial dev_l = {},
                                       ExpPolynomial dev_r = {}, double gamma_l = 0.0, double gamma_r = 0.0) {
    ProblemConfig c;
    c.geometry = Geometry::TwoSemiInfinite;
    c.layers = {{sigma_l, {-kInf, 0.0}}, {sigma_r, {0.0, kInf}}};
    c.initial = {{std::move(dev_l)}, {std::move(dev_r)}};
    c.gamma_left = gamma_l;
    c.gamma_right = gamma_r;
    return c;
}

inline ProblemConfig two_finite(double sigma_l, double sigma_r, double a, double b, TransformSource u0_l,
                                TransformSource u0_r, double f_l, double f_r) {
    ProblemConfig c;
    c.geometry = Geometry::TwoFinite;
    c.layers = {{sigma_l, {-a, 0.0}}, {sigma_r, {0.0, b}}};
    c.initial = {std::move(u0_l), std::move(u0_r)};
    c.left_end = BoundaryOperator::dirichlet(f_l);
    c.right_end = BoundaryOperator::dirichlet(f_r);
    return c;
}

inline ProblemConfig three_infinite(double sigma_l, double sigma_m, double sigma_r, double a, ExpPolynomial u0_l,
                                    TransformSource u0_m, ExpPolynomial u0_r) {
    ProblemConfig c;
    c.geometry = Geometry::ThreeInfinite;
    c.layers = {{sigma_l, {-kInf, -a}}, {sigma_m, {-a, a}}, {sigma_r, {a, kInf}}};
    c.initial = {{std::move(u0_l)}, std::move(u0_m), {std::move(u0_r)}};
    return c;
}

inline ProblemConfig three_finite(double sigma_l, double sigma_m, double sigma_r, double a, double b, double c_end,
                                  TransformSource u0_l, TransformSource u0_m, TransformSource u0_r) {
    ProblemConfig c;
    c.geometry = Geometry::ThreeFinite;
    c.layers = {{sigma_l, {-a, 0.0}}, {sigma_m, {0.0, b}}, {sigma_r, {b, c_end}}};
    c.initial = {std::move(u0_l), std::move(u0_m), std::move(u0_r)};
    c.left_end = BoundaryOperator::neumann();
    c.right_end = BoundaryOperator::neumann();
    return c;
}

/// Sampled profile on [lo, hi].
inline TransformSource sampled(std::function<double(double)> f, double lo, double hi) {
    return {SampledInterval{std::move(f), lo, hi, 64}};
}

struct Violation {
    ErrorCode code;
    std::string field;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }

    std::string summary() const {
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += std::string(to_string(v.code)) + " (" + v.field + "): " + v.message;
        }
        return s;
    }
};

namespace detail {

inline bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); }

inline void check_exp_poly_decay(const TransformSource& src, std::size_t i, const Interval& ext,
                                 std::vector<Violation>& out) {
    const std::string field = "layers[" + std::to_string(i) + "].initial";
    if (ext.finite()) return;
    const auto* p = std::get_if<ExpPolynomial>(&src.data);
    if (!p) {
        out.push_back({ErrorCode::DomainMismatch, field, "semi-infinite layers need exp_poly initial data"});
        return;
    }
    for (const auto& t : p->terms) {
        const bool left = std::isinf(ext.lo);
        if (t.power < 0 || (left ? t.rate.real() <= 0.0 : t.rate.real() >= 0.0)) {
            out.push_back({ErrorCode::WrongDecaySign, field,
                           left ? "rates on a left half-line need positive real part"
                                : "rates on a right half-line need negative real part"});
            return;
        }
    }
}

}  // namespace detail

/// Checks every invariant of the configuration and reports all violations.
inline ValidationResult validate(const ProblemConfig& c) {
    ValidationResult r;
    auto& out = r.violations;
    const std::size_t expected = (c.geometry == Geometry::ThreeInfinite || c.geometry == Geometry::ThreeFinite) ? 3 : 2;
    if (c.layers.size() != expected) {
        out.push_back({ErrorCode::DomainMismatch, "layers",
                       std::string(to_string(c.geometry)) + " needs " + std::to_string(expected) + " layers"});
        return r;
    }
    if (c.initial.size() != c.layers.size()) {
        out.push_back({ErrorCode::DomainMismatch, "initial", "one initial datum per layer is required"});
        return r;
    }
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        const auto& L = c.layers[i];
        if (!(L.sigma > 0.0) || !std::isfinite(L.sigma)) {
            out.push_back({ErrorCode::NonPositiveSigma, "layers[" + std::to_string(i) + "].sigma",
                           "sigma must be positive and finite"});
        }
        if (!(L.extent.hi > L.extent.lo)) {
            out.push_back({ErrorCode::NonAbuttingLayers, "layers[" + std::to_string(i) + "].extent",
                           "extent must be nonempty"});
        }
    }
    for (std::size_t i = 0; i + 1 < c.layers.size(); ++i) {
        if (!detail::near(c.layers[i].extent.hi, c.layers[i + 1].extent.lo)) {
            out.push_back({ErrorCode::NonAbuttingLayers, "layers[" + std::to_string(i + 1) + "].extent",
                           "layer does not start where the previous one ends"});
        }
    }
    if (!out.empty()) return r;

    const auto& ls = c.layers;
    auto want = [&](bool cond, const std::string& msg) {
        if (!cond) out.push_back({ErrorCode::DomainMismatch, "layers", msg});
    };
    const bool left_inf = std::isinf(ls.front().extent.lo);
    const bool right_inf = std::isinf(ls.back().extent.hi);
    switch (c.geometry) {
    case Geometry::TwoSemiInfinite:
        want(left_inf && right_inf && detail::near(ls[0].extent.hi, 0.0), "interface must sit at x=0");
        break;
    case Geometry::TwoFinite:
        want(!left_inf && !right_inf && detail::near(ls[0].extent.hi, 0.0), "layers must be (-a,0) and (0,b)");
        break;
    case Geometry::ThreeInfinite:
        want(left_inf && right_inf && detail::near(ls[0].extent.hi, -ls[1].extent.hi),
             "middle layer must be (-a,a)");
        break;
    case Geometry::ThreeFinite:
        want(!left_inf && !right_inf && detail::near(ls[0].extent.hi, 0.0), "layers must be (-a,0),(0,b),(b,c)");
        break;
    }

    const bool finite_ends = c.geometry == Geometry::TwoFinite || c.geometry == Geometry::ThreeFinite;
    if (finite_ends) {
        if (!c.left_end || !c.right_end) {
            out.push_back({ErrorCode::UnsupportedBoundaryOperator, "bc", "finite geometries need both end conditions"});
        } else {
            for (const auto& [op, name] : {std::pair{*c.left_end, "bc.left"}, std::pair{*c.right_end, "bc.right"}}) {
                if (c.geometry == Geometry::TwoFinite && !op.is_dirichlet()) {
                    out.push_back({ErrorCode::UnsupportedBoundaryOperator, name,
                                   "two_finite supports Dirichlet ends only"});
                }
                if (c.geometry == Geometry::ThreeFinite && (!op.is_neumann() || op.data != 0.0)) {
                    out.push_back({ErrorCode::UnsupportedBoundaryOperator, name,
                                   "three_finite supports homogeneous Neumann ends only"});
                }
            }
        }
    } else {
        if (c.left_end || c.right_end) {
            out.push_back({ErrorCode::UnsupportedBoundaryOperator, "bc", "infinite geometries take no end conditions"});
        }
    }
    if (c.geometry != Geometry::TwoSemiInfinite && (c.gamma_left != 0.0 || c.gamma_right != 0.0)) {
        out.push_back({ErrorCode::DomainMismatch, "gamma",
                       "far-field values are only used by two_semi_infinite (three_infinite needs zero)"});
    }
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        detail::check_exp_poly_decay(c.initial[i], i, c.layers[i].extent, out);
        if (const auto* s = std::get_if<SampledInterval>(&c.initial[i].data)) {
            if (!detail::near(s->lo, c.layers[i].extent.lo) || !detail::near(s->hi, c.layers[i].extent.hi)) {
                out.push_back({ErrorCode::DomainMismatch, "layers[" + std::to_string(i) + "].initial",
                               "sampled interval must match the layer extent"});
            }
        }
    }
    return r;
}

/// Returns the configuration unchanged or throws the first violation.
inline const ProblemConfig& validated(const ProblemConfig& c) {
    const auto r = validate(c);
    if (!r.ok()) throw Error(r.violations.front().code, r.violations.front().field + ": " + r.summary());
    return c;
}

/// Shift to apply to user coordinates (x_fixed = x_user + shift) so that the
/// layers land on the fixed interface positions.
inline double canonical_shift(Geometry g, const std::vector<Interval>& user_extents) {
    if (user_extents.empty()) return 0.0;
    switch (g) {
    case Geometry::TwoSemiInfinite:
    case Geometry::TwoFinite:
    case Geometry::ThreeFinite: return -user_extents.front().hi;
    case Geometry::ThreeInfinite:
        if (user_extents.size() > 1) return -0.5 * (user_extents[1].lo + user_extents[1].hi);
        return 0.0;
    }
    return 0.0;
}

/// Moves a configuration given in user coordinates by `shift`.
inline ProblemConfig shifted(const ProblemConfig& c, double shift) {
    ProblemConfig out = c;
    for (auto& L : out.layers) {
        L.extent.lo += shift;
        L.extent.hi += shift;
    }
    for (auto& src : out.initial) {
        if (auto* p = std::get_if<ExpPolynomial>(&src.data)) {
            *p = p->shifted(-shift);
        } else {
            auto& s = std::get<SampledInterval>(src.data);
            s = SampledInterval{[f = s.profile, shift](double x) { return f(x - shift); }, s.lo + shift, s.hi + shift,
                                s.base_order};
        }
    }
    return out;
}

/// One evaluated point.
struct SolutionSample {
    double x = 0.0;
    double t = 0.0;
    double u = 0.0;
    std::size_t layer_index = 0;
};

}  // namespace fokas_heat
