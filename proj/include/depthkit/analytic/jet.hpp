#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace depthkit {

// Truncated Taylor series c[0] + c[1] e + ... + c[N] e^N in a formal variable e.
template <std::size_t N>
struct Jet {
    std::array<double, N + 1> c{};

    Jet() = default;
    Jet(double v) { c[0] = v; }  // NOLINT: implicit constant promotion is intended

    static Jet variable(double x0) {
        Jet j(x0);
        if constexpr (N >= 1) j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }
    // k-th derivative at the expansion point
    double derivative(std::size_t k) const {
        double f = 1.0;
        for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
        return c[k] * f;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t i = 0; i <= N; ++i) c[i] += o.c[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t i = 0; i <= N; ++i) c[i] -= o.c[i];
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t i = 0; i <= N; ++i)
            for (std::size_t j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t i = 0; i <= N; ++i) {
            double s = a.c[i];
            for (std::size_t j = 1; j <= i; ++j) s -= b.c[j] * r.c[i - j];
            r.c[i] = s / b.c[0];
        }
        return r;
    }
};

template <std::size_t N>
Jet<N> exp(const Jet<N>& a) {
    // r' = a' r
    Jet<N> r;
    r.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
        r.c[k] = s / static_cast<double>(k);
    }
    return r;
}

template <std::size_t N>
Jet<N> log(const Jet<N>& a) {
    // a r' = a'
    Jet<N> r;
    r.c[0] = std::log(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        double s = static_cast<double>(k) * a.c[k];
        for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * r.c[j] * a.c[k - j];
        r.c[k] = s / (static_cast<double>(k) * a.c[0]);
    }
    return r;
}

template <std::size_t N>
Jet<N> pow(const Jet<N>& a, double e) {
    return exp(log(a) * Jet<N>(e));
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
    return pow(a, 0.5);
}

template <std::size_t N>
void sincos(const Jet<N>& a, Jet<N>& s, Jet<N>& co) {
    s = Jet<N>();
    co = Jet<N>();
    s.c[0] = std::sin(a.c[0]);
    co.c[0] = std::cos(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        double ss = 0.0, cc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            ss += static_cast<double>(j) * a.c[j] * co.c[k - j];
            cc -= static_cast<double>(j) * a.c[j] * s.c[k - j];
        }
        s.c[k] = ss / static_cast<double>(k);
        co.c[k] = cc / static_cast<double>(k);
    }
}

template <std::size_t N>
Jet<N> sin(const Jet<N>& a) {
    Jet<N> s, c;
    sincos(a, s, c);
    return s;
}

template <std::size_t N>
Jet<N> cos(const Jet<N>& a) {
    Jet<N> s, c;
    sincos(a, s, c);
    return c;
}

} // namespace depthkit
