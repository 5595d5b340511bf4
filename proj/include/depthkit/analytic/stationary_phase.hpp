#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "depthkit/analytic/quadrature.hpp"
#include "depthkit/analytic/test_function.hpp"
#include "depthkit/errors.hpp"

namespace depthkit {

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("loglog_slope needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// integral_a^b g(t) exp(i f(t)) dt with phase derivatives supplied
struct OscIntegral {
    TestFunction amplitude = TestFunction::zero();
    std::function<double(double)> phase, phase1, phase2;
    double a = 0.0, b = 1.0;
    double X = 1.0, Y = 1.0, U = 1.0, Q = 1.0, Z = 1.0;
};

// f(t) = Y (t - t0)^2 with g on [a, b]
inline OscIntegral quadratic_phase_integral(const TestFunction& g, double Y, double t0) {
    OscIntegral I;
    I.amplitude = g;
    I.phase = [=](double t) { return Y * (t - t0) * (t - t0); };
    I.phase1 = [=](double t) { return 2.0 * Y * (t - t0); };
    I.phase2 = [=](double) { return 2.0 * Y; };
    const Interval s = g.support();
    I.a = s.lo;
    I.b = s.hi;
    I.Y = Y;
    I.Q = 1.0;
    return I;
}

// f(t) = B t with g on [a, b]
inline OscIntegral linear_phase_integral(const TestFunction& g, double B) {
    OscIntegral I;
    I.amplitude = g;
    I.phase = [=](double t) { return B * t; };
    I.phase1 = [=](double) { return B; };
    I.phase2 = [](double) { return 0.0; };
    const Interval s = g.support();
    I.a = s.lo;
    I.b = s.hi;
    I.Y = B;
    return I;
}

inline std::complex<double> oscillatory_direct(const OscIntegral& I, double tol = 1e-13) {
    if (I.amplitude.is_zero()) return 0.0;
    auto f = [&](double t) { return I.amplitude(t) * std::polar(1.0, I.phase(t)); };
    auto period = [&](double t) {
        const double w = std::max(std::abs(I.phase1(t)), std::sqrt(std::abs(I.phase2(t))));
        return w > 0.0 ? 2.0 * std::numbers::pi / w : I.b - I.a;
    };
    return checked(integrate_oscillatory(f, I.a, I.b, period, tol), "oscillatory integral");
}

struct StationaryPhaseResult {
    std::complex<double> direct, leading;
    double abs_error = 0.0, rel_error = 0.0;
    double t0 = 0.0;
};

inline StationaryPhaseResult stationary_phase_compare(const OscIntegral& I, int samples = 4096) {
    StationaryPhaseResult r;
    if (I.amplitude.is_zero()) return r;
    const double lower = I.Y / (I.Q * I.Q);
    std::vector<double> roots;
    double prev_t = I.a, prev = I.phase1(I.a);
    for (int i = 1; i <= samples; ++i) {
        const double t = I.a + (I.b - I.a) * i / samples;
        const double v = I.phase1(t);
        if (!(I.phase2(t) >= lower)) throw DomainError("phase second derivative below Y/Q^2");
        if (prev == 0.0 && i == 1) roots.push_back(prev_t);
        if ((prev < 0.0 && v >= 0.0) || (prev > 0.0 && v <= 0.0)) {
            double lo = prev_t, hi = t;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                const double m = 0.5 * (lo + hi);
                if ((I.phase1(m) < 0.0) == (I.phase1(lo) < 0.0)) lo = m;
                else hi = m;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev = v;
    }
    if (roots.empty()) throw NoStationaryPoint("phase derivative has no zero on the interval");
    if (roots.size() > 1) throw MultipleStationaryPoints(std::to_string(roots.size()) + " zeros of the phase derivative");
    const double t0 = roots.front();
    if (!(t0 > I.a && t0 < I.b)) throw NoStationaryPoint("stationary point on the boundary");
    r.t0 = t0;
    r.direct = oscillatory_direct(I);
    r.leading = std::sqrt(2.0 * std::numbers::pi) * std::polar(1.0, std::numbers::pi / 4 + I.phase(t0)) * I.amplitude(t0) /
                std::sqrt(I.phase2(t0));
    r.abs_error = std::abs(r.direct - r.leading);
    r.rel_error = r.abs_error / std::abs(r.direct);
    return r;
}

struct DecayRow {
    double B = 0.0;
    double magnitude = 0.0;
    double first_derivative_ratio = 0.0;  // |I| / (Var g / B)
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double slope = 0.0;
    double max_first_derivative_ratio = 0.0;
};

inline DecayReport nonstationary_decay_check(const TestFunction& g, const std::vector<double>& Bs) {
    DecayReport rep;
    if (g.is_zero()) {
        for (double B : Bs) rep.rows.push_back({B, 0.0, 0.0});
        return rep;
    }
    const double var = g.variation();
    std::vector<double> xs, ys;
    for (double B : Bs) {
        DecayRow row;
        row.B = B;
        row.magnitude = std::abs(oscillatory_direct(linear_phase_integral(g, B), 1e-14));
        row.first_derivative_ratio = row.magnitude / (var / B);
        rep.max_first_derivative_ratio = std::max(rep.max_first_derivative_ratio, row.first_derivative_ratio);
        rep.rows.push_back(row);
        xs.push_back(B);
        ys.push_back(row.magnitude);
    }
    if (xs.size() >= 2) rep.slope = loglog_slope(xs, ys);
    return rep;
}

} // namespace depthkit
