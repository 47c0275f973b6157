#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace fokas_heat {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t order() const { return nodes.size(); }
};

namespace detail {

inline GaussLegendreRule compute_gauss_legendre(std::size_t n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / static_cast<double>(j);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1.0;
            }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // One more derivative evaluation at the converged node.
        double p0 = 1.0;
        double p1 = z;
        for (std::size_t j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / static_cast<double>(j);
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace detail

/// Cached rule; safe to call concurrently. The returned reference lives for
/// the whole program.
inline const GaussLegendreRule& gauss_legendre(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(detail::compute_gauss_legendre(n));
    return *slot;
}

/// Composite Gauss-Legendre integral of a real function over [lo, hi].
template <class F>
double integrate_interval(F&& f, double lo, double hi, std::size_t panels = 1, std::size_t order = 32) {
    const auto& rule = gauss_legendre(order);
    const double h = (hi - lo) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + h * static_cast<double>(p);
        const double mid = a + 0.5 * h;
        double part = 0.0;
        for (std::size_t j = 0; j < rule.order(); ++j) part += rule.weights[j] * f(mid + 0.5 * h * rule.nodes[j]);
        sum += 0.5 * h * part;
    }
    return sum;
}

}  // namespace fokas_heat
