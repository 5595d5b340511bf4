#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include "depthkit/analytic/jet.hpp"
#include "depthkit/analytic/quadrature.hpp"
#include "depthkit/errors.hpp"

namespace depthkit {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return x > lo && x < hi; }
};

inline constexpr std::size_t kJetOrder = 6;
using Jet6 = Jet<kJetOrder>;

// Smooth compactly supported weights built from exp(-1/(1-t^2)).
class TestFunction {
public:
    enum class Kind { Zero, Bump, GaussianBump, Product, Monomial, Scaled, LogGaussian };

    static TestFunction zero() { return TestFunction(Kind::Zero); }

    // exp(-1/(1-t^2)) with t mapping [lo, hi] onto [-1, 1]
    static TestFunction bump(double lo, double hi) {
        if (!(hi > lo)) throw DomainError("bump needs lo < hi");
        TestFunction f(Kind::Bump);
        f.a_ = lo;
        f.b_ = hi;
        return f;
    }

    // exp(-((x-c)/w)^2) cut off smoothly on [c - 3w, c + 3w]
    static TestFunction gaussian_bump(double center, double width) {
        if (!(width > 0)) throw DomainError("gaussian_bump needs width > 0");
        TestFunction f(Kind::GaussianBump);
        f.a_ = center;
        f.b_ = width;
        return f;
    }

    // exp(-(log(x/center))^2 / (2 width^2)); support truncated where it falls below e^-40
    static TestFunction log_gaussian(double center, double width) {
        if (!(center > 0) || !(width > 0)) throw DomainError("log_gaussian needs center, width > 0");
        TestFunction f(Kind::LogGaussian);
        f.a_ = center;
        f.b_ = width;
        return f;
    }

    static TestFunction product(const TestFunction& u, const TestFunction& v) {
        TestFunction f(Kind::Product);
        f.l_ = std::make_shared<TestFunction>(u);
        f.r_ = std::make_shared<TestFunction>(v);
        return f;
    }

    // (x / x0)^e times u
    static TestFunction monomial(const TestFunction& u, double x0, double e) {
        TestFunction f(Kind::Monomial);
        f.l_ = std::make_shared<TestFunction>(u);
        f.a_ = x0;
        f.b_ = e;
        return f;
    }

    // u(x / s)
    static TestFunction scaled(const TestFunction& u, double s) {
        if (!(s > 0)) throw DomainError("scale must be positive");
        TestFunction f(Kind::Scaled);
        f.l_ = std::make_shared<TestFunction>(u);
        f.a_ = s;
        return f;
    }

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero || (kind_ == Kind::Product && (l_->is_zero() || r_->is_zero())); }

    Interval support() const {
        switch (kind_) {
        case Kind::Zero: return {0.0, 0.0};
        case Kind::Bump: return {a_, b_};
        case Kind::GaussianBump: return {a_ - 3 * b_, a_ + 3 * b_};
        case Kind::LogGaussian: return {a_ * std::exp(-9 * b_), a_ * std::exp(9 * b_)};
        case Kind::Product: {
            Interval u = l_->support(), v = r_->support();
            Interval w{std::max(u.lo, v.lo), std::min(u.hi, v.hi)};
            if (w.hi < w.lo) w.hi = w.lo;
            return w;
        }
        case Kind::Monomial: return l_->support();
        case Kind::Scaled: {
            Interval u = l_->support();
            return {u.lo * a_, u.hi * a_};
        }
        }
        return {0.0, 0.0};
    }

    template <class T>
    T eval(const T& x) const {
        switch (kind_) {
        case Kind::Zero: return T(0.0);
        case Kind::Bump: return unit_bump(T(2.0) * (x - T(a_)) / T(b_ - a_) - T(1.0));
        case Kind::GaussianBump: {
            T z = (x - T(a_)) / T(b_);
            return exp(-(z * z)) * unit_bump(z / T(3.0));
        }
        case Kind::LogGaussian: {
            if (!support().contains(val(x))) return T(0.0);
            const T u = log(x / T(a_)) / T(b_);
            return exp(T(-0.5) * u * u);
        }
        case Kind::Product: return l_->eval(x) * r_->eval(x);
        case Kind::Monomial: {
            if (!(val(x) > 0.0)) return T(0.0);
            return pow(x / T(a_), b_) * l_->eval(x);
        }
        case Kind::Scaled: return l_->eval(x / T(a_));
        }
        return T(0.0);
    }

    double operator()(double x) const { return eval(x); }

    // k-th derivative, k <= kJetOrder
    double derivative(double x, std::size_t k) const {
        if (k > kJetOrder) throw DomainError("derivative order above jet order");
        if (k == 0) return (*this)(x);
        return eval(Jet6::variable(x)).derivative(k);
    }

    // total variation, integral of |g'|
    double variation() const {
        if (is_zero()) return 0.0;
        Interval s = support();
        return integrate([&](double x) { return std::abs(derivative(x, 1)); }, s.lo, s.hi, 1e-12).value;
    }

    // Mellin transform with k logarithms: integral of g(x) x^(s-1) (log x)^k
    std::complex<double> mellin(std::complex<double> s, int k = 0, double tol = 1e-13) const {
        if (is_zero()) return 0.0;
        if (kind_ == Kind::LogGaussian && k <= 2) {
            // sqrt(2 pi) w c^s exp(w^2 s^2 / 2) and its s-derivatives
            const std::complex<double> v = std::sqrt(2 * std::numbers::pi) * b_ * std::exp(s * std::log(a_) + 0.5 * b_ * b_ * s * s);
            const std::complex<double> d1 = std::log(a_) + b_ * b_ * s;
            if (k == 0) return v;
            if (k == 1) return d1 * v;
            return (b_ * b_ + d1 * d1) * v;
        }
        Interval sup = support();
        if (!(sup.lo >= 0.0)) throw DomainError("Mellin transform needs support in (0, inf)");
        const double tau = std::max(1.0, std::abs(s.imag()));
        auto f = [&](double x) -> std::complex<double> {
            if (x <= 0.0) return 0.0;
            double lx = std::log(x);
            return (*this)(x) * std::exp((s - 1.0) * lx) * std::pow(lx, k);
        };
        double lo = std::max(sup.lo, 1e-300), hi = sup.hi;
        const double sr = s.real();
        double scale = integrate_panels([&](double x) { return x > 0.0 ? std::abs((*this)(x)) * std::pow(x, sr - 1.0) * std::pow(std::abs(std::log(x)), k) : 0.0; },
                                        lo, hi, (hi - lo) / 16, 1e-300, 1).value;
        if (!(scale > 0.0)) scale = 1.0;
        return integrate_oscillatory(f, lo, hi, [&](double x) { return 2 * std::numbers::pi * x / tau; }, tol * scale).value;
    }

private:
    explicit TestFunction(Kind k) : kind_(k) {}

    static double val(double x) { return x; }
    template <std::size_t N>
    static double val(const Jet<N>& x) {
        return x.value();
    }
    static double exp(double x) { return std::exp(x); }
    static double log(double x) { return std::log(x); }
    template <std::size_t N>
    static Jet<N> log(const Jet<N>& x) {
        return depthkit::log(x);
    }
    static double pow(double x, double e) { return std::pow(x, e); }
    template <std::size_t N>
    static Jet<N> exp(const Jet<N>& x) {
        return depthkit::exp(x);
    }
    template <std::size_t N>
    static Jet<N> pow(const Jet<N>& x, double e) {
        return depthkit::pow(x, e);
    }

    template <class T>
    static T unit_bump(const T& t) {
        const double t0 = val(t);
        if (!(t0 > -1.0 && t0 < 1.0)) return T(0.0);
        return exp(T(-1.0) / (T(1.0) - t * t));
    }

    Kind kind_;
    double a_ = 0.0, b_ = 0.0;
    std::shared_ptr<const TestFunction> l_, r_;
};

} // namespace depthkit
