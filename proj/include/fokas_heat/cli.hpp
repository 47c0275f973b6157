#pragma once

// Command logic behind the `fokas_heat` tool: grid evaluation to CSV, the
// oracle check suite, and the steady-state report.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "fokas_heat/config.hpp"
#include "fokas_heat/oracles.hpp"
#include "fokas_heat/solve.hpp"

namespace fokas_heat::cli {

enum ExitCode { Ok = 0, VerifyFailed = 1, ConfigFailure = 2, NumericalFailure = 3 };

/// Worker count: FOKAS_HEAT_THREADS if set and positive, else the hardware.
inline unsigned thread_count() {
    if (const char* env = std::getenv("FOKAS_HEAT_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Evaluates every (x, t) pair, time-major.  Node sets for each time are
/// built serially from the extreme points of each layer; the points are then
/// shared out between the workers.
inline std::vector<SolutionSample> evaluate_points(const SolutionField& field, const std::vector<double>& xs,
                                                   const std::vector<double>& ts, unsigned threads) {
    const auto& c = field.config();
    std::vector<SolutionSample> out(xs.size() * ts.size());
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        const double t = ts[ti];
        for (std::size_t i = 0; i < c.layers.size(); ++i) {
            double lo = kInf, hi = -kInf;
            for (double x : xs)
                if (c.layer_of(x) == i) lo = std::min(lo, x), hi = std::max(hi, x);
            if (lo <= hi) {
                field.evaluate(lo, t);
                field.evaluate(hi, t);
            }
        }
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j) out[ti * xs.size() + j] = field.evaluate(xs[j], t);
        };
        const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(xs.size())));
        if (n == 1) {
            work(0, xs.size());
            continue;
        }
        std::vector<std::exception_ptr> errors(n);
        std::vector<std::thread> pool;
        const std::size_t chunk = (xs.size() + n - 1) / n;
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(std::min(xs.size(), w * chunk), std::min(xs.size(), (w + 1) * chunk));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<SolutionSample>& samples) {
    os << "x,t,u,layer\n";
    for (const auto& s : samples)
        os << format17(s.x) << ',' << format17(s.t) << ',' << format17(s.u) << ',' << s.layer_index << '\n';
}

struct Check {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass() const { return error <= tolerance; }
};

inline void write_report(std::ostream& os, const std::vector<Check>& checks) {
    os << "check,error,tolerance,pass\n";
    for (const auto& c : checks)
        os << c.name << ',' << format17(c.error) << ',' << format17(c.tolerance) << ',' << (c.pass() ? "pass" : "fail")
           << '\n';
}

namespace detail {

/// At most `n` points of the requested grid, plus the interfaces.
inline std::vector<double> sample_xs(const ProblemConfig& c, const std::vector<double>& xs, std::size_t n = 41) {
    std::vector<double> out;
    const std::size_t stride = std::max<std::size_t>(1, (xs.size() + n - 1) / n);
    for (std::size_t i = 0; i < xs.size(); i += stride)
        if (c.layer_of(xs[i])) out.push_back(xs[i]);
    for (double x : interfaces(c)) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline double max_diff(const SolutionField& a, const SolutionField& b, const std::vector<double>& xs,
                       const std::vector<double>& ts) {
    double err = 0.0;
    for (double t : ts)
        for (double x : xs) err = std::max(err, std::abs(a.evaluate(x, t).u - b.evaluate(x, t).u));
    return err;
}

/// Fourth-order one-sided derivative at x0 from inside layer `layer`
/// (dir = -1 looks left, +1 looks right).
inline double one_sided_derivative(const SolutionField& f, std::size_t layer, double x0, double t, double h, int dir) {
    const auto& ext = f.config().layer(layer).extent;
    double v[5];
    for (int j = 0; j < 5; ++j) {
        const double x = std::clamp(x0 + dir * j * h, ext.lo, ext.hi);
        // Interface points belong to the left layer; nudge into the right one.
        v[j] = (j == 0 && dir > 0) ? f.evaluate(std::nextafter(x, kInf), t).u : f.evaluate(x, t).u;
    }
    return dir * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
}

/// Smallest length scale seen by a grid: decay lengths of the data,
/// layer widths and diffusion lengths at the earliest time.
inline double feature_length(const ProblemConfig& c, double t_min) {
    double len = kInf;
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        const auto& ext = c.layer(i).extent;
        if (ext.finite()) len = std::min(len, ext.hi - ext.lo);
        if (const auto* p = std::get_if<ExpPolynomial>(&c.initial[i].data))
            for (const auto& term : p->terms)
                if (term.rate.real() != 0.0) len = std::min(len, 1.0 / std::abs(term.rate.real()));
        len = std::min(len, c.sigma(i) * std::sqrt(t_min));
    }
    return len;
}

inline double layer_heat(const SolutionField& f, std::size_t i, double t) {
    const auto& ext = f.config().layer(i).extent;
    const double eps = 1e-14 * std::max(1.0, std::abs(ext.lo));
    return integrate_interval([&](double x) { return f.evaluate(std::clamp(x, ext.lo + eps, ext.hi), t).u; }, ext.lo,
                              ext.hi, 16, 32);
}

}  // namespace detail

/// Oracle suite for one configuration.  Errors are absolute; tolerances are
/// scaled by the largest initial or boundary magnitude.
inline std::vector<Check> verify_checks(const ParsedConfig& cfg) {
    const auto& c = cfg.problem;
    const auto& m = cfg.manifest;
    if (m.ts.empty()) throw ConfigError({{0, ErrorCode::ParseError, "verify needs grid.t"}});
    const auto field = solve(c, cfg.options);
    const double scale = field.data_scale();
    const auto xs = detail::sample_xs(c, m.xs.empty() ? interfaces(c) : m.xs);
    const auto& ts = m.ts;
    const double t_min = *std::min_element(ts.begin(), ts.end());
    const double t_max = *std::max_element(ts.begin(), ts.end());
    std::vector<Check> out;

    // Interface conditions.
    const auto ifs = interfaces(c);
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        double jump = 0.0, flux = 0.0;
        for (double t : ts) {
            const double x0 = ifs[i];
            jump = std::max(jump, std::abs(field.evaluate(x0, t).u - field.evaluate(std::nextafter(x0, kInf), t).u));
            double h = 1e-3 * std::min(c.sigma(i), c.sigma(i + 1)) * std::sqrt(t);
            for (std::size_t j : {i, i + 1})
                if (c.layer(j).extent.finite()) h = std::min(h, (c.layer(j).extent.hi - c.layer(j).extent.lo) / 20.0);
            const double fl = c.sigma(i) * c.sigma(i) * detail::one_sided_derivative(field, i, x0, t, h, -1);
            const double fr = c.sigma(i + 1) * c.sigma(i + 1) * detail::one_sided_derivative(field, i + 1, x0, t, h, 1);
            // Relative to the fluxes, floored at 1e-8 of the natural flux
            // scale so that interfaces the heat has not reached yet pass.
            const double smax = std::max(c.sigma(i), c.sigma(i + 1));
            const double floor = 1e-8 * smax * smax * scale / (smax * std::sqrt(t));
            const double ref = std::max({std::abs(fl), std::abs(fr), floor});
            flux = std::max(flux, std::abs(fl - fr) / ref);
        }
        out.push_back({"interface_continuity_" + std::to_string(i), jump, 1e-6 * scale});
        out.push_back({"flux_continuity_" + std::to_string(i), flux, 1e-4});
    }

    // Independence from the contour.
    {
        double err = 0.0;
        for (double r : {0.5, 2.0}) {
            auto opt = cfg.options;
            opt.contour.radius = r;
            err = std::max(err, detail::max_diff(field, solve(c, opt), xs, ts));
        }
        out.push_back({"contour_radius", err, 1e-8 * scale});
        auto opt = cfg.options;
        opt.contour.min_order *= 2;
        opt.contour.tolerance /= 100.0;
        out.push_back({"node_doubling", detail::max_diff(field, solve(c, opt), xs, ts),
                       10.0 * cfg.options.contour.tolerance * scale});
    }

    // Both kernel paths, where the tables exist.
    if (c.geometry != Geometry::ThreeFinite) {
        auto opt = cfg.options;
        opt.path = opt.path == FormulaPath::Transcribed ? FormulaPath::LinearSolve : FormulaPath::Transcribed;
        out.push_back({"transcribed_vs_linear_solve", detail::max_diff(field, solve(c, opt), xs, ts), 1e-8 * scale});
    }

    switch (c.geometry) {
    case Geometry::TwoSemiInfinite:
        if (std::abs(c.sigma(0) - c.sigma(1)) <= 1e-14 * c.sigma(0)) {
            double err = 0.0;
            for (double t : ts)
                for (double x : xs) err = std::max(err, std::abs(field.evaluate(x, t).u - heat_kernel_whole_line(c, x, t)));
            out.push_back({"whole_line_heat_kernel", err, 1e-8 * scale});
        }
        break;
    case Geometry::TwoFinite: {
        const auto series = classical_series_two_finite(c, 50);
        double err = 0.0;
        for (double t : ts)
            if (t >= 0.05)
                for (double x : xs) err = std::max(err, std::abs(field.evaluate(x, t).u - series(x, t)));
        out.push_back({"classical_series", err, 1e-6 * scale});
        const auto steady = steady_state(c);
        double s_err = 0.0, b_err = 0.0;
        for (double x : xs) s_err = std::max(s_err, std::abs(field.evaluate(x, 1e3).u - steady(x)));
        for (double t : ts) {
            b_err = std::max(b_err, std::abs(field.evaluate(c.layer(0).extent.lo, t).u - c.left_end->dirichlet_value()));
            b_err = std::max(b_err, std::abs(field.evaluate(c.layer(1).extent.hi, t).u - c.right_end->dirichlet_value()));
        }
        out.push_back({"steady_limit", s_err, 1e-6 * scale});
        out.push_back({"boundary_values", b_err, 1e-8 * scale});
        break;
    }
    case Geometry::ThreeFinite: {
        double h0 = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            h0 += fokas_heat::detail::layer_integral(c.initial[i], c.layer(i).extent.lo, c.layer(i).extent.hi);
        const double length = c.layer(2).extent.hi - c.layer(0).extent.lo;
        double err = 0.0, ends = 0.0;
        for (double t : ts) {
            double h = 0.0;
            for (std::size_t i = 0; i < 3; ++i) h += detail::layer_heat(field, i, t);
            err = std::max(err, std::abs(h - h0));
            // Slopes times the diffusion length, so they compare with u.
            const double ell = std::min(c.sigma(0), c.sigma(2)) * std::sqrt(t);
            const double step = std::min(1e-3 * ell, length / 100.0);
            for (const auto& [layer, x0, dir] : {std::tuple{std::size_t{0}, c.layer(0).extent.lo, 1},
                                                 std::tuple{std::size_t{2}, c.layer(2).extent.hi, -1}})
                ends = std::max(ends, ell * std::abs(detail::one_sided_derivative(field, layer, x0, t, step, dir)));
        }
        out.push_back({"heat_conservation", err, 1e-6 * scale * length});
        out.push_back({"insulated_ends", ends, 1e-6 * scale});
        if (std::abs(c.sigma(0) - c.sigma(1)) <= 1e-14 && std::abs(c.sigma(1) - c.sigma(2)) <= 1e-14) {
            const CosineSeries series([&](double x) { return c.initial_value(x); }, c.layer(0).extent.lo,
                                      c.layer(2).extent.hi, c.sigma(0), 400);
            double s_err = 0.0;
            for (double t : ts)
                for (double x : xs) s_err = std::max(s_err, std::abs(field.evaluate(x, t).u - series(x, t)));
            out.push_back({"cosine_series", s_err, 1e-6 * scale});
        }
        break;
    }
    case Geometry::ThreeInfinite:
        if (c.initial[1].is_zero() && c.initial[2].is_zero()) {
            auto opt = cfg.options;
            opt.variant = opt.variant == Variant::Full ? Variant::Restricted : Variant::Full;
            out.push_back({"restricted_vs_full", detail::max_diff(field, solve(c, opt), xs, ts), 1e-10 * scale});
        }
        break;
    }

    // Crank-Nicolson reference.
    {
        const double h = detail::feature_length(c, t_min) / 40.0;
        const auto grid = make_fd_grid(c, h, t_min / 400.0, t_max);
        const auto fd = crank_nicolson(c, grid, ts);
        double err = 0.0;
        for (std::size_t ti = 0; ti < ts.size(); ++ti)
            for (double x : xs) err = std::max(err, std::abs(field.evaluate(x, ts[ti]).u - fd.at(x, ti)));
        out.push_back({"crank_nicolson", err, 1e-4 * scale});
    }
    return out;
}

inline int run_solve(const ParsedConfig& cfg, std::ostream& os) {
    const auto& m = cfg.manifest;
    if (m.xs.empty() || m.ts.empty()) throw ConfigError({{0, ErrorCode::ParseError, "solve needs grid.x and grid.t"}});
    const auto field = solve(cfg.problem, cfg.options);
    write_csv(os, evaluate_points(field, m.xs, m.ts, thread_count()));
    return Ok;
}

inline int run_verify(const ParsedConfig& cfg, std::ostream& os) {
    const auto checks = verify_checks(cfg);
    write_report(os, checks);
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); }) ? Ok : VerifyFailed;
}

inline int run_steady(const ParsedConfig& cfg, std::ostream& os) {
    os << steady_state(cfg.problem).describe() << '\n';
    return Ok;
}

/// Maps failures to exit codes and writes a one-line record to `err`:
///   error code=<ErrorCode> line=<n> message=<text>
template <class F>
int guarded(F&& body, std::ostream& err) {
    try {
        return body();
    } catch (const ConfigError& e) {
        for (const auto& it : e.items())
            err << "error code=" << to_string(it.code) << " line=" << it.line << " message=" << it.message << '\n';
        return ConfigFailure;
    } catch (const Error& e) {
        err << "error code=" << to_string(e.code()) << " line=0 message=" << e.what() << '\n';
        return is_configuration_error(e.code()) ? ConfigFailure : NumericalFailure;
    } catch (const std::exception& e) {
        err << "error code=Unknown line=0 message=" << e.what() << '\n';
        return NumericalFailure;
    }
}

/// Runs one command.  `out_path` empty means standard output.
inline int run(Command cmd, const std::string& config_path, const std::string& out_path, std::ostream& stdout_,
               std::ostream& err) {
    return guarded(
        [&] {
            auto cfg = load_config(config_path);
            cfg.manifest.command = cmd;
            cfg.manifest.out_path = out_path;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw ConfigError({{0, ErrorCode::ParseError, "cannot write '" + out_path + "'"}});
            }
            std::ostream& os = out_path.empty() ? stdout_ : file;
            switch (cmd) {
            case Command::Solve: return run_solve(cfg, os);
            case Command::Verify: return run_verify(cfg, os);
            case Command::Steady: return run_steady(cfg, os);
            }
            return static_cast<int>(Ok);
        },
        err);
}

}  // namespace fokas_heat::cli
