#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "depthkit/residue.hpp"
#include "depthkit/roots.hpp"

namespace depthkit {

inline constexpr u64 kExpSumCap = 10'000'000;

// Kloosterman sums to a fixed modulus, reusing one inverse table and one root table.
class KloostermanKernel {
public:
    explicit KloostermanKernel(u64 c) : c_(check(c)), inv_(inverse_table(c)), w_(c) {
        for (u64 x = 0; x < c; ++x)
            if (std::gcd(x, c) == 1) units_.push_back(x);
    }

    u64 modulus() const { return c_; }
    std::size_t terms() const { return units_.size(); }

    double operator()(i64 a, i64 b) const {
        const u64 A = reduce(a, c_), B = reduce(b, c_);
        double s = 0.0;
        for (u64 x : units_) s += w_[(mulmod(A, x, c_) + mulmod(B, inv_[x], c_)) % c_].real();
        return s;
    }

    cplx complex_value(i64 a, i64 b) const {
        const u64 A = reduce(a, c_), B = reduce(b, c_);
        cplx s = 0.0;
        for (u64 x : units_) s += w_[(mulmod(A, x, c_) + mulmod(B, inv_[x], c_)) % c_];
        return s;
    }

private:
    static u64 check(u64 c) {
        if (c == 0) throw DomainError("Kloosterman modulus 0");
        if (c > kExpSumCap) throw TooLarge("Kloosterman modulus " + std::to_string(c));
        return c;
    }
    u64 c_;
    std::vector<u64> inv_;
    RootTable w_;
    std::vector<u64> units_;
};

inline double kloosterman(i64 a, i64 b, u64 c) { return KloostermanKernel(c)(a, b); }

// Direct evaluation with per-term inversion; reference for the kernel.
inline cplx kloosterman_direct(i64 a, i64 b, u64 c) {
    if (c > kExpSumCap) throw TooLarge("Kloosterman modulus " + std::to_string(c));
    if (c == 1) return 1.0;
    cplx s = 0.0;
    for (u64 x = 1; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        i64 xb = static_cast<i64>(inv_mod(static_cast<i64>(x), c));
        s += e_frac(static_cast<i64>((static_cast<i128>(a) * static_cast<i64>(x) + static_cast<i128>(b) * xb) % static_cast<i128>(c)), c);
    }
    return s;
}

// c_q(h) via the divisor identity sum_{d | (q,h)} d mu(q/d).
inline i64 ramanujan_sum(i64 h, u64 q) {
    if (q == 0) throw DomainError("ramanujan_sum modulus 0");
    if (q > kExpSumCap) throw TooLarge("ramanujan_sum modulus " + std::to_string(q));
    u64 g = std::gcd(reduce(h, q), q);
    if (g == 0) g = q;
    i64 s = 0;
    for (u64 d : divisors(g)) s += static_cast<i64>(d) * mobius(q / d);
    return s;
}

inline double ramanujan_sum_direct(i64 h, u64 q) {
    if (q > kExpSumCap) throw TooLarge("ramanujan_sum modulus " + std::to_string(q));
    double s = 0.0;
    for (u64 a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) s += e_frac(static_cast<i64>(mulmod(a % q, reduce(h, q), q)), q).real();
    return s;
}

// Both evaluations; throws when they disagree.
inline i64 ramanujan_sum_checked(i64 h, u64 q, double tol = 1e-6) {
    i64 exact = ramanujan_sum(h, q);
    double direct = ramanujan_sum_direct(h, q);
    if (std::abs(direct - static_cast<double>(exact)) > tol)
        throw DomainError("Ramanujan identity mismatch at h=" + std::to_string(h) + " q=" + std::to_string(q));
    return exact;
}

// max |S(a,b;p)| / (2 sqrt p) over p not dividing ab; exhaustive when samples == 0.
inline double weil_ratio(u64 p, u64 samples = 0, u64 seed = 1) {
    if (!is_prime(p)) throw DomainError("weil_ratio needs a prime");
    if (p > 10'000) throw TooLarge("weil_ratio prime above 1e4");
    KloostermanKernel K(p);
    const double bound = 2.0 * std::sqrt(static_cast<double>(p));
    double worst = 0.0;
    if (samples == 0 || samples >= (p - 1) * (p - 1)) {
        for (u64 a = 1; a < p; ++a)
            for (u64 b = 1; b < p; ++b) worst = std::max(worst, std::abs(K(static_cast<i64>(a), static_cast<i64>(b))) / bound);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<u64> pick(1, p - 1);
        for (u64 s = 0; s < samples; ++s)
            worst = std::max(worst, std::abs(K(static_cast<i64>(pick(rng)), static_cast<i64>(pick(rng)))) / bound);
    }
    return worst;
}

} // namespace depthkit
