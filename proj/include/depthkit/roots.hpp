#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "depthkit/residue.hpp"

namespace depthkit {

using cplx = std::complex<double>;

// e(x) = exp(2 pi i x), reduced to [-1/2, 1/2) before evaluation.
inline cplx e(double x) {
    double f = x - std::nearbyint(x);
    return std::polar(1.0, 2.0 * std::numbers::pi * f);
}

// e(a/b) with exact reduction of the numerator.
inline cplx e_frac(i64 a, u64 b) {
    if (b == 1) return 1.0;
    u64 k = reduce(a, b);
    if (2 * k >= b) return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(b - k) / static_cast<double>(b));
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(b));
}

class RootTable {
public:
    explicit RootTable(u64 n) : n_(n), w_(n) {
        for (u64 k = 0; k < n; ++k) w_[k] = e_frac(static_cast<i64>(k), n);
    }
    u64 size() const { return n_; }
    const cplx& operator[](u64 k) const { return w_[k]; }
    cplx at(i64 k) const { return w_[reduce(k, n_)]; }

private:
    u64 n_;
    std::vector<cplx> w_;
};

} // namespace depthkit
