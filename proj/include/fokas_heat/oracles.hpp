#pragma once

// Reference solvers used to check the spectral evaluators: Crank-Nicolson
// finite differences on the composite rod, the classical eigenfunction
// series for two Dirichlet layers, the cosine series of a uniform insulated
// rod and whole-line heat-kernel quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "fokas_heat/core.hpp"
#include "fokas_heat/error.hpp"
#include "fokas_heat/quadrature.hpp"
#include "fokas_heat/solver_finite.hpp"

namespace fokas_heat {

// ---------------------------------------------------------------------------
// Finite differences.

/// Uniform nodes per layer; layer i has `cells[i]` cells and the interface
/// nodes are shared.  Semi-infinite layers are cut at `lo` / `hi`.
struct FDGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> cells;
    double dt = 1e-3;
    /// Implicit Euler half steps replacing the first Crank-Nicolson step.
    int rannacher_steps = 4;
    /// Largest |u - far value| tolerated next to an artificial end, relative
    /// to the data scale.
    double truncation_tol = 1e-9;
};

/// Grid with spacing about `h` everywhere.  Semi-infinite layers are cut
/// where the data have decayed, plus ten diffusion lengths at `t_end`.
inline FDGrid make_fd_grid(const ProblemConfig& c, double h, double dt, double t_end) {
    validated(c);
    FDGrid g;
    g.dt = dt;
    std::vector<double> ends;
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        const auto& ext = c.layer(i).extent;
        double reach = 0.0;
        detail::sample_scale(c.initial[i], ext, &reach);
        const double cut = reach + 10.0 * c.sigma(i) * std::sqrt(t_end);
        double lo = ext.lo, hi = ext.hi;
        if (std::isinf(lo)) lo = hi - cut;
        if (std::isinf(hi)) hi = lo + cut;
        if (i == 0) g.lo = lo;
        if (i + 1 == c.layers.size()) g.hi = hi;
        g.cells.push_back(std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((hi - lo) / h))));
    }
    return g;
}

/// Field history on the grid nodes.
struct FDField {
    std::vector<double> x;
    std::vector<double> times;
    std::vector<std::vector<double>> u;  // u[time][node]

    /// Piecewise-linear interpolation at time index `ti`.
    double at(double xq, std::size_t ti) const {
        const auto it = std::lower_bound(x.begin(), x.end(), xq);
        if (it == x.begin()) return u[ti].front();
        if (it == x.end()) return u[ti].back();
        const std::size_t j = static_cast<std::size_t>(it - x.begin());
        const double w = (xq - x[j - 1]) / (x[j] - x[j - 1]);
        return (1.0 - w) * u[ti][j - 1] + w * u[ti][j];
    }
};

namespace detail {

struct FDSystem {
    std::vector<double> x;
    std::vector<double> sigma2;    // per node, for interior rows
    std::vector<bool> algebraic;   // end and interface rows
    std::vector<double> rhs;       // algebraic right-hand sides
    std::vector<std::size_t> interfaces;
    std::vector<std::size_t> layer_first;  // first node of each layer
    std::vector<double> h;                 // spacing per layer
    bool left_cut = false, right_cut = false;
    double left_far = 0.0, right_far = 0.0;
};

inline FDSystem build_fd_system(const ProblemConfig& c, const FDGrid& g) {
    FDSystem s;
    const std::size_t L = c.layers.size();
    if (g.cells.size() != L) throw Error(ErrorCode::DomainMismatch, "grid needs one cell count per layer");
    for (std::size_t i = 0; i < L; ++i) {
        const double lo = i == 0 ? g.lo : c.layer(i).extent.lo;
        const double hi = i + 1 == L ? g.hi : c.layer(i).extent.hi;
        if (!(hi > lo)) throw Error(ErrorCode::DomainMismatch, "grid truncation lies inside the first or last layer");
        const std::size_t n = g.cells[i];
        const double h = (hi - lo) / static_cast<double>(n);
        s.h.push_back(h);
        s.layer_first.push_back(s.x.size());
        for (std::size_t j = (i == 0 ? 0 : 1); j <= n; ++j) {
            s.x.push_back(j == n ? hi : lo + h * static_cast<double>(j));
            s.sigma2.push_back(c.sigma(i) * c.sigma(i));
        }
        if (i + 1 < L) s.interfaces.push_back(s.x.size() - 1);
    }
    const std::size_t N = s.x.size();
    s.algebraic.assign(N, false);
    s.rhs.assign(N, 0.0);
    s.algebraic.front() = s.algebraic.back() = true;
    for (auto p : s.interfaces) s.algebraic[p] = true;
    s.left_cut = std::isinf(c.layers.front().extent.lo);
    s.right_cut = std::isinf(c.layers.back().extent.hi);
    s.left_far = c.gamma_left;
    s.right_far = c.gamma_right;
    if (s.left_cut) s.rhs.front() = s.left_far;
    else if (c.left_end->is_dirichlet()) s.rhs.front() = c.left_end->dirichlet_value();
    if (s.right_cut) s.rhs.back() = s.right_far;
    else if (c.right_end->is_dirichlet()) s.rhs.back() = c.right_end->dirichlet_value();
    return s;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

/// Second-order one-sided derivative rows for the constraints.
inline void constraint_rows(const ProblemConfig& c, const FDSystem& s, Triplets& T) {
    const std::size_t N = s.x.size();
    const bool left_dirichlet = s.left_cut || c.left_end->is_dirichlet();
    const bool right_dirichlet = s.right_cut || c.right_end->is_dirichlet();
    if (left_dirichlet) {
        T.emplace_back(0, 0, 1.0);
    } else {  // u_x = 0
        const double h = s.h.front();
        T.emplace_back(0, 0, -3.0 / (2.0 * h));
        T.emplace_back(0, 1, 4.0 / (2.0 * h));
        T.emplace_back(0, 2, -1.0 / (2.0 * h));
    }
    if (right_dirichlet) {
        T.emplace_back(N - 1, N - 1, 1.0);
    } else {
        const double h = s.h.back();
        T.emplace_back(N - 1, N - 1, 3.0 / (2.0 * h));
        T.emplace_back(N - 1, N - 2, -4.0 / (2.0 * h));
        T.emplace_back(N - 1, N - 3, 1.0 / (2.0 * h));
    }
    for (std::size_t i = 0; i < s.interfaces.size(); ++i) {
        // sl^2 u_x(0-) - sr^2 u_x(0+) = 0, scaled by the left spacing.
        const std::size_t p = s.interfaces[i];
        const double hl = s.h[i], hr = s.h[i + 1];
        const double kl = c.sigma(i) * c.sigma(i) / (2.0 * hl), kr = c.sigma(i + 1) * c.sigma(i + 1) / (2.0 * hr);
        T.emplace_back(p, p, 3.0 * kl + 3.0 * kr);
        T.emplace_back(p, p - 1, -4.0 * kl);
        T.emplace_back(p, p - 2, kl);
        T.emplace_back(p, p + 1, -4.0 * kr);
        T.emplace_back(p, p + 2, kr);
    }
}

/// Row i of the semi-discrete operator sigma^2 u_xx (interior nodes only).
inline void laplacian_row(const FDSystem& s, std::size_t i, double scale, Triplets& T) {
    const double hl = s.x[i] - s.x[i - 1], hr = s.x[i + 1] - s.x[i];
    const double k = s.sigma2[i] * scale;
    T.emplace_back(i, i - 1, k * 2.0 / (hl * (hl + hr)));
    T.emplace_back(i, i, -k * 2.0 / (hl * hr));
    T.emplace_back(i, i + 1, k * 2.0 / (hr * (hl + hr)));
}

/// theta-scheme step matrices: A u^{n+1} = B u^n + rhs.
struct Stepper {
    Eigen::SparseMatrix<double> B;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

inline std::unique_ptr<Stepper> make_stepper(const ProblemConfig& c, const FDSystem& s, double dt, double theta) {
    const std::size_t N = s.x.size();
    Triplets TA, TB;
    constraint_rows(c, s, TA);
    for (std::size_t i = 1; i + 1 < N; ++i) {
        if (s.algebraic[i]) continue;
        TA.emplace_back(i, i, 1.0);
        TB.emplace_back(i, i, 1.0);
        laplacian_row(s, i, -theta * dt, TA);
        if (theta < 1.0) laplacian_row(s, i, (1.0 - theta) * dt, TB);
    }
    auto st = std::make_unique<Stepper>();
    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(TA.begin(), TA.end());
    st->B.resize(N, N);
    st->B.setFromTriplets(TB.begin(), TB.end());
    st->lu.analyzePattern(A);
    st->lu.factorize(A);
    if (st->lu.info() != Eigen::Success) throw Error(ErrorCode::SingularNode, "finite-difference matrix is singular");
    return st;
}

}  // namespace detail

/// Crank-Nicolson with implicit-Euler startup.  Returns the field at each
/// requested time (sorted, positive).  Throws TruncationTooTight if the
/// solution reaches an artificial end.
inline FDField crank_nicolson(const ProblemConfig& c, const FDGrid& g, std::vector<double> times) {
    validated(c);
    std::sort(times.begin(), times.end());
    const auto s = detail::build_fd_system(c, g);
    const std::size_t N = s.x.size();
    Eigen::VectorXd u(N), rhs = Eigen::VectorXd::Zero(N);
    for (std::size_t i = 0; i < N; ++i) u[i] = c.initial_value(s.x[i]);
    // Interface and end nodes take the constraint values from the start.
    for (std::size_t i = 0; i < N; ++i)
        if (s.algebraic[i]) rhs[i] = s.rhs[i];

    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(u[i]));
    scale = std::max({scale, std::abs(s.rhs.front()), std::abs(s.rhs.back())});
    if (scale == 0.0) scale = 1.0;

    std::map<std::pair<double, double>, std::unique_ptr<detail::Stepper>> steppers;
    auto step = [&](double dt, double theta) {
        auto key = std::make_pair(dt, theta);
        auto it = steppers.find(key);
        if (it == steppers.end()) it = steppers.emplace(key, detail::make_stepper(c, s, dt, theta)).first;
        Eigen::VectorXd b = it->second->B * u + rhs;
        u = it->second->lu.solve(b);
    };
    auto monitor = [&] {
        const std::size_t w = std::min<std::size_t>(5, N / 4);
        for (std::size_t i = 1; i <= w; ++i) {
            if (s.left_cut && std::abs(u[i] - s.left_far) > g.truncation_tol * scale)
                throw Error(ErrorCode::TruncationTooTight, "solution reaches the left artificial boundary");
            if (s.right_cut && std::abs(u[N - 1 - i] - s.right_far) > g.truncation_tol * scale)
                throw Error(ErrorCode::TruncationTooTight, "solution reaches the right artificial boundary");
        }
    };

    FDField out;
    out.x = s.x;
    double t = 0.0;
    bool started = false;
    for (double target : times) {
        if (!(target > t)) {
            if (target == t && started) {
                out.times.push_back(target);
                out.u.emplace_back(u.data(), u.data() + N);
                continue;
            }
            throw Error(ErrorCode::TimeTooSmall, "finite-difference output times must be positive");
        }
        const double span = target - t;
        const auto n = static_cast<std::size_t>(std::ceil(span / g.dt - 1e-9));
        const double dt = span / static_cast<double>(n);
        std::size_t k = 0;
        if (!started && g.rannacher_steps > 0) {
            const double sub = dt / 2.0;
            const int pairs = (g.rannacher_steps + 1) / 2;
            for (int q = 0; q < pairs && k < n; ++q, ++k) {
                step(sub, 1.0);
                step(sub, 1.0);
            }
        }
        started = true;
        for (; k < n; ++k) step(dt, 0.5);
        t = target;
        monitor();
        out.times.push_back(target);
        out.u.emplace_back(u.data(), u.data() + N);
    }
    return out;
}

/// Observed order from three solutions on grids refined by 2: values are
/// compared at the coarse nodes.
inline double observed_order(double coarse_fine_diff, double fine_finest_diff) {
    return std::log2(coarse_fine_diff / fine_finest_diff);
}

// ---------------------------------------------------------------------------
// Classical series for two Dirichlet layers.

/// First n positive roots of sl sin(kp) cos(ka) + sr sin(ka) cos(kp).
/// Sign changes are bracketed on a grid four times finer than
/// pi / (2 (a + p)) and refined by bisection.
inline std::vector<double> two_finite_eigenvalues(double sl, double sr, double a, double b, std::size_t n) {
    const double p = b * sl / sr;
    const double width = std::numbers::pi / (2.0 * (a + p)) / 4.0;
    auto f = [&](double k) { return two_finite_delta_real(sl, sr, a, b, k); };
    std::vector<double> roots;
    double lo = 1e-9 * width, flo = f(lo);
    for (std::size_t guard = 0; roots.size() < n; ++guard) {
        if (guard > 400 * (n + 10)) throw Error(ErrorCode::RootBracketFailure, "no sign change found");
        const double hi = lo + width, fhi = f(hi);
        if (fhi == 0.0) {
            roots.push_back(hi);
        } else if ((flo < 0.0) != (fhi < 0.0) && flo != 0.0) {
            double x0 = lo, x1 = hi, f0 = flo;
            for (int it = 0; it < 200 && x1 - x0 > 4e-16 * x1; ++it) {
                const double m = 0.5 * (x0 + x1), fm = f(m);
                if ((fm < 0.0) == (f0 < 0.0)) {
                    x0 = m;
                    f0 = fm;
                } else {
                    x1 = m;
                }
            }
            roots.push_back(0.5 * (x0 + x1));
        }
        lo = hi;
        flo = fhi;
    }
    return roots;
}

/// Eigenfunction expansion about the steady state:
///   u = steady + sum c_n e^{-(sl k_n)^2 t} X_n(x),
///   X_n = A sin(k_n (x + a)) on (-a,0), B sin(k_n sl (b - x)/sr) on (0,b),
/// with (A, B) = (sin k_n p, sin k_n a) from continuity, or (sr cos k_n p,
/// -sl cos k_n a) from the flux condition when both sines vanish.
class ClassicalSeries {
public:
    ClassicalSeries(const ProblemConfig& c, std::size_t n_modes) : steady_(steady_state(c)) {
        validated(c);
        if (c.geometry != Geometry::TwoFinite)
            throw Error(ErrorCode::DomainMismatch, "the classical series needs a two_finite config");
        sl_ = c.sigma(0);
        sr_ = c.sigma(1);
        a_ = -c.layer(0).extent.lo;
        b_ = c.layer(1).extent.hi;
        k_ = two_finite_eigenvalues(sl_, sr_, a_, b_, n_modes);
        for (double k : k_) {
            const double p = b_ * sl_ / sr_;
            const double a1 = std::sin(k * p), b1 = std::sin(k * a_);
            const double a2 = sr_ * std::cos(k * p), b2 = -sl_ * std::cos(k * a_);
            if (std::hypot(a1, b1) >= std::hypot(a2, b2) / std::max(sl_, sr_)) amp_.push_back({a1, b1});
            else amp_.push_back({a2, b2});
            const std::size_t n = amp_.size() - 1;
            auto mode = [&](double, double x) { return this->mode(n, x); };
            auto w0 = [&](double x) { return c.initial_value(x) - steady_(x); };
            const std::size_t panels = 8 + static_cast<std::size_t>(2.0 * k * std::max(a_, b_ * sl_ / sr_));
            double num = 0.0, den = 0.0;
            num += integrate_interval([&](double x) { return w0(x) * mode(k, x); }, -a_, 0.0, panels, 32);
            num += integrate_interval([&](double x) { return w0(x) * mode(k, x); }, 0.0, b_, panels, 32);
            den += integrate_interval([&](double x) { return mode(k, x) * mode(k, x); }, -a_, 0.0, panels, 32);
            den += integrate_interval([&](double x) { return mode(k, x) * mode(k, x); }, 0.0, b_, panels, 32);
            coef_.push_back(num / den);
        }
    }

    const std::vector<double>& eigenvalues() const { return k_; }

    double operator()(double x, double t) const {
        double u = steady_(x);
        for (std::size_t n = 0; n < k_.size(); ++n) u += coef_[n] * std::exp(-sl_ * sl_ * k_[n] * k_[n] * t) * mode(n, x);
        return u;
    }

private:
    double mode(std::size_t n, double x) const {
        const double k = k_[n];
        if (x <= 0.0) return amp_[n].first * std::sin(k * (x + a_));
        return amp_[n].second * std::sin(k * sl_ * (b_ - x) / sr_);
    }

    SteadyState steady_;
    double sl_ = 1, sr_ = 1, a_ = 1, b_ = 1;
    std::vector<double> k_, coef_;
    std::vector<std::pair<double, double>> amp_;
};

inline ClassicalSeries classical_series_two_finite(const ProblemConfig& c, std::size_t n_modes) {
    return ClassicalSeries(c, n_modes);
}

// ---------------------------------------------------------------------------
// Uniform insulated rod.

class CosineSeries {
public:
    CosineSeries(std::function<double(double)> u0, double lo, double hi, double sigma, std::size_t n_modes)
        : lo_(lo), len_(hi - lo), sigma_(sigma) {
        const std::size_t panels = 16 + 2 * n_modes;
        for (std::size_t n = 0; n <= n_modes; ++n) {
            const double k = std::numbers::pi * static_cast<double>(n) / len_;
            const double w = n == 0 ? 1.0 / len_ : 2.0 / len_;
            coef_.push_back(w * integrate_interval([&](double x) { return u0(x) * std::cos(k * (x - lo)); }, lo, hi,
                                                   panels, 32));
        }
    }

    double operator()(double x, double t) const {
        double u = 0.0;
        for (std::size_t n = 0; n < coef_.size(); ++n) {
            const double k = std::numbers::pi * static_cast<double>(n) / len_;
            u += coef_[n] * std::exp(-sigma_ * sigma_ * k * k * t) * std::cos(k * (x - lo_));
        }
        return u;
    }

private:
    double lo_, len_, sigma_;
    std::vector<double> coef_;
};

// ---------------------------------------------------------------------------
// Whole line.

/// (4 pi s^2 t)^{-1/2} integral of e^{-(x-y)^2/(4 s^2 t)} u0(y) dy over the
/// window where the kernel exceeds 1e-16, split at the breakpoints.
/// `feature` is the smallest length scale of u0.
inline double heat_kernel_whole_line(const std::function<double(double)>& u0, double sigma, double x, double t,
                                     double feature = kInf, const std::vector<double>& breaks = {0.0}) {
    const double ell = sigma * std::sqrt(t);
    const double W = 2.0 * ell * std::sqrt(-std::log(1e-17));
    std::vector<double> pts{x - W, x + W};
    for (double b : breaks)
        if (b > x - W && b < x + W) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    const double h = 0.5 * std::min(ell, feature);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / h));
        sum += integrate_interval(
            [&](double y) { return std::exp(-(x - y) * (x - y) / (4.0 * ell * ell)) * u0(y); }, lo, hi,
            std::max<std::size_t>(panels, 1), 32);
    }
    return sum / std::sqrt(4.0 * std::numbers::pi * ell * ell);
}

/// Whole-line oracle for a two_semi_infinite config with equal sigma.
inline double heat_kernel_whole_line(const ProblemConfig& c, double x, double t) {
    validated(c);
    if (c.geometry != Geometry::TwoSemiInfinite || std::abs(c.sigma(0) - c.sigma(1)) > 1e-14 * c.sigma(0))
        throw Error(ErrorCode::DomainMismatch, "whole-line oracle needs two semi-infinite layers with equal sigma");
    double feature = kInf;
    for (const auto& src : c.initial)
        if (const auto* p = std::get_if<ExpPolynomial>(&src.data))
            for (const auto& term : p->terms) feature = std::min(feature, 1.0 / std::abs(term.rate.real()));
    return heat_kernel_whole_line([&](double y) { return c.initial_value(y); }, c.sigma(0), x, t, feature);
}

}  // namespace fokas_heat
