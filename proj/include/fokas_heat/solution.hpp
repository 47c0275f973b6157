#pragma once

// Shared evaluator for every geometry.  A kernel provider supplies the
// x-independent part G(k) of each spectral integral; the evaluator builds
// cached node sets per (t, layer) and sums G(k) e^{ikx} at any x.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "fokas_heat/contours.hpp"
#include "fokas_heat/core.hpp"
#include "fokas_heat/spectral_system.hpp"
#include "fokas_heat/transforms.hpp"

namespace fokas_heat {

/// Which representation produces the spectral integrands.
enum class FormulaPath { Transcribed, LinearSolve };

/// Three-layer formulas exist for zero middle/right initial data and for
/// general data.
enum class Variant { Restricted, Full };

struct SolverOptions {
    ContourOptions contour;
    FormulaPath path = FormulaPath::Transcribed;
    Variant variant = Variant::Full;
    /// Use the exact (e^{wt}-1)/w boundary time transform instead of dropping
    /// its 1/w part (which integrates to zero).
    bool keep_data_pole = false;
    /// Apply the term-level fixes to the printed formulas.
    bool corrected = true;
};

enum class Route { Upper, Lower, Real };

/// Produces G(k) for each route of each layer; the integrand is G(k) e^{ikx}.
class KernelProvider {
public:
    virtual ~KernelProvider() = default;
    virtual ScaledComplex integrand(std::size_t layer, Route route, cplx k, double t) const = 0;
    /// Whether the route carries any term for the layer.
    virtual bool has_route(std::size_t layer, Route route) const = 0;
    /// Extra oscillation length carried by G(k) beyond e^{ikx}.
    virtual double shift_scale(std::size_t layer) const = 0;
};

/// Damped time transform of constant boundary data: e^{-wt} f^(w,t).
inline cplx damped_data_transform(double value, cplx omega, double t, bool keep_pole) {
    if (keep_pole) return time_transform_constant(value, omega, t) * std::exp(-omega * t);
    // f (1 - e^{-wt}) / w minus the f/w part, which integrates to zero.
    return -value * std::exp(-omega * t) / omega;
}

/// Builds the spectral model of a validated configuration.
inline SpectralModel make_spectral_model(const ProblemConfig& c, double k_max = 64.0) {
    SpectralModel m;
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        const auto& L = c.layers[i];
        m.layers.push_back({L.sigma, L.extent.lo, L.extent.hi, make_transform(c.initial[i], L.extent.lo, L.extent.hi, k_max)});
    }
    auto end = [](const std::optional<BoundaryOperator>& op) {
        if (!op) return EndModel{};
        if (op->is_dirichlet()) return EndModel{EndKind::Dirichlet, op->dirichlet_value()};
        return EndModel{EndKind::Neumann, 0.0};
    };
    m.left = end(c.left_end);
    m.right = end(c.right_end);
    return m;
}

/// Kernels from the global-relation solve.
class LinearSolveKernels final : public KernelProvider {
public:
    LinearSolveKernels(SpectralModel model, bool keep_pole) : model_(std::move(model)), keep_pole_(keep_pole) {}

    ScaledComplex integrand(std::size_t j, Route route, cplx k, double t) const override {
        const auto& L = model_.layers[j];
        const cplx omega = L.sigma * L.sigma * k * k;
        const ScaledComplex damp = ScaledComplex::exp(-omega * t);
        if (route == Route::Real) {
            if (L.u0.identically_zero()) return {};
            return L.u0.eval_scaled(k) * damp * cplx{0.5 / std::numbers::pi, 0.0};
        }
        const auto u = solve_node(model_, j, k);
        const auto K = boundary_kernel(model_, j, u, route == Route::Upper);
        ScaledComplex sum;
        for (std::size_t s = 0; s < K.size(); ++s) {
            const auto& slot = u.slots[s];
            if (!slot.active || K[s].is_zero()) continue;
            if (slot.data) {
                if (slot.data_value == 0.0) continue;
                sum += K[s] * damped_data_transform(slot.data_value, omega, t, keep_pole_);
            } else {
                const auto& src = model_.layers[slot.layer].u0;
                if (src.identically_zero()) continue;
                sum += K[s] * src.eval_scaled(slot.kappa) * damp;
            }
        }
        return sum;
    }

    bool has_route(std::size_t j, Route route) const override {
        const auto& L = model_.layers[j];
        if (route == Route::Real) return !L.u0.identically_zero();
        return std::isfinite(route == Route::Upper ? L.lo : L.hi);
    }

    double shift_scale(std::size_t) const override {
        double s = 0.0;
        double smax = 0.0, smin = kInf;
        for (const auto& L : model_.layers) {
            smax = std::max(smax, L.sigma);
            smin = std::min(smin, L.sigma);
        }
        for (const auto& L : model_.layers)
            if (std::isfinite(L.lo) && std::isfinite(L.hi)) s += 2.0 * (L.hi - L.lo);
        for (const auto& L : model_.layers) s = std::max(s, 2.0 * std::max(std::abs(std::isfinite(L.lo) ? L.lo : 0.0), std::abs(std::isfinite(L.hi) ? L.hi : 0.0)));
        return s * smax / smin;
    }

    const SpectralModel& model() const { return model_; }

private:
    SpectralModel model_;
    bool keep_pole_;
};

namespace detail {

/// Largest |u0| sampled over a layer (half-lines sampled out to where the
/// slowest exponential has decayed).
inline double sample_scale(const TransformSource& src, const Interval& ext, double* reach = nullptr) {
    if (src.is_zero()) return 0.0;
    double lo = ext.lo, hi = ext.hi;
    double extent = 0.0;
    if (!ext.finite()) {
        const auto& p = std::get<ExpPolynomial>(src.data);
        double slow = kInf;
        int pmax = 0;
        for (const auto& t : p.terms) {
            slow = std::min(slow, std::abs(t.rate.real()));
            pmax = std::max(pmax, t.power);
        }
        extent = (40.0 + 4.0 * pmax) / slow;
        if (std::isinf(lo)) lo = hi - extent;
        else hi = lo + extent;
    }
    if (reach) *reach = extent;
    double m = 0.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(src(lo + (hi - lo) * i / n)));
    return m;
}

}  // namespace detail

/// Immutable evaluator mapping (x, t) to temperature.  Node sets are cached
/// per (t, layer); evaluate() is safe to call concurrently.
class SolutionField {
public:
    SolutionField(ProblemConfig config, std::shared_ptr<const KernelProvider> kernels, SolverOptions opt)
        : config_(std::move(config)), kernels_(std::move(kernels)), opt_(opt) {
        double scale = std::max(std::abs(config_.gamma_left), std::abs(config_.gamma_right));
        min_rate_ = kInf;
        data_reach_.assign(config_.layers.size(), 0.0);
        for (std::size_t i = 0; i < config_.layers.size(); ++i) {
            scale = std::max(scale, detail::sample_scale(config_.initial[i], config_.layers[i].extent, &data_reach_[i]));
            if (const auto* p = std::get_if<ExpPolynomial>(&config_.initial[i].data)) {
                if (!config_.layers[i].extent.finite())
                    for (const auto& t : p->terms) min_rate_ = std::min(min_rate_, std::abs(t.rate.real()));
            }
        }
        for (const auto& e : {config_.left_end, config_.right_end})
            if (e) scale = std::max(scale, std::abs(e->data / (e->value_coef != 0.0 ? e->value_coef : 1.0)));
        data_scale_ = scale > 0.0 ? scale : 1.0;
    }

    const ProblemConfig& config() const { return config_; }
    const SolverOptions& options() const { return opt_; }
    double data_scale() const { return data_scale_; }

    /// Closed-form part added to the spectral integrals (the error-function
    /// step for distinct far-field values); zero elsewhere.
    std::function<double(std::size_t, double, double)> extra;

    SolutionSample evaluate(double x, double t) const {
        const auto layer = config_.layer_of(x);
        if (!layer) throw Error(ErrorCode::DomainMismatch, "x=" + std::to_string(x) + " lies outside every layer");
        if (!(t > 0.0)) throw Error(ErrorCode::TimeTooSmall, "evaluation needs t > 0");
        const auto& cache = nodes_for(*layer, t, x);
        double u = 0.0;
        for (const auto& ns : cache.sets) u += ns.sum(x).real();
        if (extra) u += extra(*layer, x, t);
        return {x, t, u, *layer};
    }

    /// Evaluates on a grid at one time, reusing the node sets.
    std::vector<SolutionSample> evaluate_grid(const std::vector<double>& xs, double t) const {
        if (!xs.empty()) {
            for (std::size_t i = 0; i < config_.layers.size(); ++i) {
                double lo = kInf, hi = -kInf;
                for (double x : xs) {
                    if (config_.layer_of(x) == i) {
                        lo = std::min(lo, x);
                        hi = std::max(hi, x);
                    }
                }
                if (lo <= hi) {
                    nodes_for(i, t, lo);
                    nodes_for(i, t, hi);
                }
            }
        }
        std::vector<SolutionSample> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(evaluate(x, t));
        return out;
    }

    /// Integral along one route with an explicit arc radius, bypassing the
    /// cache (used for contour-independence checks).
    cplx route_integral(std::size_t layer, Route route, double x, double t, double radius) const {
        auto opt = opt_.contour;
        opt.radius = radius;
        const auto win = window(layer, t, x);
        const auto ns = build_route(layer, route, t, win, opt);
        return ns.sum(x);
    }

private:
    struct Window {
        double lo, hi;
    };
    struct Cache {
        Window win;
        std::vector<NodeSet> sets;
    };

    Window window(std::size_t j, double t, double x) const {
        const auto& ext = config_.layers[j].extent;
        if (ext.finite()) return {ext.lo, ext.hi};
        const double sigma = config_.layers[j].sigma;
        double reach = 0.0;
        for (double r : data_reach_) reach = std::max(reach, r);
        const double w = std::max(reach, 12.0 * sigma * std::sqrt(t));
        Window win = std::isinf(ext.lo) ? Window{ext.hi - w, ext.hi} : Window{ext.lo, ext.lo + w};
        win.lo = std::min(win.lo, x);
        win.hi = std::max(win.hi, x);
        return win;
    }

    NodeSet build_route(std::size_t j, Route route, double t, Window win, const ContourOptions& opt) const {
        if (!kernels_->has_route(j, route)) return {};
        const auto& L = config_.layers[j];
        const double end = route == Route::Upper ? L.extent.lo : L.extent.hi;
        double xs;
        if (route == Route::Real) xs = std::max(std::abs(win.lo), std::abs(win.hi));
        else if (route == Route::Upper) xs = win.hi - (std::isfinite(end) ? end : win.lo);
        else xs = (std::isfinite(end) ? end : win.hi) - win.lo;
        xs += kernels_->shift_scale(j);
        const ContourHalf half = route == Route::Upper ? ContourHalf::Upper
                                 : route == Route::Lower ? ContourHalf::Lower
                                                         : ContourHalf::Real;
        double feature = effective_arc_radius(opt.radius, L.sigma, t);
        if (std::isfinite(min_rate_)) feature = std::min(feature, 0.5 * min_rate_);
        const auto contour = build_contour(half, L.sigma, t, xs, true, opt.radius, opt, feature);
        const std::vector<double> test{win.lo, 0.5 * (win.lo + win.hi), win.hi};
        const double tol = opt.tolerance * data_scale_;
        return build_node_set(
            contour, [&](cplx k) { return kernels_->integrand(j, route, k, t); }, test, tol, opt);
    }

    const Cache& nodes_for(std::size_t j, double t, double x) const {
        std::lock_guard lock(state_->mutex);
        auto& cache_ = state_->cache;
        auto key = std::make_pair(t, j);
        auto it = cache_.find(key);
        if (it != cache_.end() && x >= it->second.win.lo && x <= it->second.win.hi) return it->second;
        Window win = window(j, t, x);
        if (it != cache_.end()) {
            // Grow the window so nearby requests reuse the rebuild.
            const double w = win.hi - win.lo;
            win.lo = std::min(win.lo, it->second.win.lo);
            win.hi = std::max(win.hi, it->second.win.hi);
            if (x < it->second.win.lo) win.lo = std::min(win.lo, x - 0.5 * w);
            if (x > it->second.win.hi) win.hi = std::max(win.hi, x + 0.5 * w);
            const auto& ext = config_.layers[j].extent;
            win.lo = std::max(win.lo, ext.lo);
            win.hi = std::min(win.hi, ext.hi);
        }
        if (cache_.size() > 64) cache_.clear();
        Cache c{win, {}};
        for (Route r : {Route::Real, Route::Upper, Route::Lower}) c.sets.push_back(build_route(j, r, t, win, opt_.contour));
        cache_[key] = std::move(c);
        return cache_[key];
    }

    ProblemConfig config_;
    std::shared_ptr<const KernelProvider> kernels_;
    SolverOptions opt_;
    double data_scale_ = 1.0;
    double min_rate_ = kInf;
    std::vector<double> data_reach_;
    // Shared by copies; node sets depend only on the immutable members.
    struct State {
        std::mutex mutex;
        std::map<std::pair<double, std::size_t>, Cache> cache;
    };
    std::shared_ptr<State> state_ = std::make_shared<State>();
};

}  // namespace fokas_heat
