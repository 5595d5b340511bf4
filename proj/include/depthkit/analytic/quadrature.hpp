#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "depthkit/errors.hpp"

namespace depthkit {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
    GaussRule g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = g.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

inline const GaussRule& gl15() {
    static const GaussRule rule = gauss_legendre(15);
    return rule;
}

template <class F>
auto gauss_panel(F&& f, double a, double b, const GaussRule& rule = gl15()) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    using T = decltype(f(c));
    T s{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
}

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

namespace detail {

// panel value together with sum |w_i f_i| h, the scale of its rounding error
template <class F>
auto gauss_panel_mass(F& f, double a, double b, double& mass) {
    const GaussRule& rule = gl15();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    using T = decltype(f(c));
    T s{};
    double m = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const T v = f(c + h * rule.nodes[i]);
        s += rule.weights[i] * v;
        m += rule.weights[i] * std::abs(v);
    }
    mass = m * std::abs(h);
    return s * h;
}

template <class F, class T>
void adapt(F& f, double a, double b, T whole, double tol, int depth, QuadResult<T>& out) {
    const double m = 0.5 * (a + b);
    double ml = 0.0, mr = 0.0;
    T left = gauss_panel_mass(f, a, m, ml), right = gauss_panel_mass(f, m, b, mr);
    out.evaluations += 30;
    const double diff = std::abs(left + right - whole);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (ml + mr);
    if (diff <= tol || diff <= floor || depth <= 0) {
        if (diff > tol && diff > floor) out.converged = false;
        out.value += left + right;
        out.error += diff;
        return;
    }
    adapt(f, a, m, left, 0.5 * tol, depth - 1, out);
    adapt(f, m, b, right, 0.5 * tol, depth - 1, out);
}

} // namespace detail

// Adaptive bisection of GL15 panels; tol is absolute.
template <class F>
auto integrate(F f, double a, double b, double tol = 1e-12, int max_depth = 24) {
    using T = decltype(f(a));
    QuadResult<T> out;
    if (a == b) return out;
    T whole = gauss_panel(f, a, b);
    out.evaluations = 15;
    detail::adapt(f, a, b, whole, tol, max_depth, out);
    return out;
}

// Quadrature over panels no wider than max_width (a quarter of the local
// period for oscillatory integrands), each refined adaptively.
template <class F>
auto integrate_panels(F f, double a, double b, double max_width, double tol = 1e-12, int max_depth = 24) {
    using T = decltype(f(a));
    QuadResult<T> out;
    if (a == b) return out;
    const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / max_width)));
    const double h = (b - a) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        const double lo = a + h * i, hi = (i + 1 == n) ? b : a + h * (i + 1);
        auto r = integrate(f, lo, hi, tol / static_cast<double>(n), max_depth);
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

// Panels sized by a local period function: width <= period(x) / 4.
template <class F, class P>
auto integrate_oscillatory(F f, double a, double b, P period, double tol = 1e-12, int max_depth = 24) {
    using T = decltype(f(a));
    QuadResult<T> out;
    double x = a;
    std::vector<std::pair<double, double>> panels;
    while (x < b) {
        double w = std::max(0.25 * period(x), (b - a) * 1e-9);
        double nx = std::min(b, x + w);
        panels.emplace_back(x, nx);
        x = nx;
    }
    const double per = tol / static_cast<double>(std::max<std::size_t>(1, panels.size()));
    for (auto [lo, hi] : panels) {
        auto r = integrate(f, lo, hi, per, max_depth);
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

template <class R>
auto checked(const R& r, const std::string& what) {
    if (!r.converged) throw QuadratureFailure(what + " (error estimate " + std::to_string(r.error) + ")");
    return r.value;
}

} // namespace depthkit
