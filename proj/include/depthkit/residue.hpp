#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "depthkit/errors.hpp"

namespace depthkit {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Moduli stay below 2^40 so that products fit comfortably in 128 bits.
inline constexpr u64 kModulusCap = u64(1) << 40;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline u64 reduce(i64 a, u64 m) {
    i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

// Checked integer power; throws TooLarge past 2^62.
inline i64 ipow(i64 b, int e) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > (i128(1) << 62) || r < -(i128(1) << 62)) throw TooLarge("ipow overflow");
    }
    return static_cast<i64>(r);
}

inline int valuation(i64 n, i64 p) {
    if (n == 0) throw UndefinedValuation("valuation of 0");
    if (p < 2) throw DomainError("valuation base must be >= 2");
    int v = 0;
    if (n < 0) n = -n;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// p-part removed: n / p^{v_p(n)}
inline i64 strip(i64 n, i64 p) {
    while (n != 0 && n % p == 0) n /= p;
    return n;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % sp == 0) return n == sp;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

struct Factor {
    u64 p;
    int e;
};

inline std::vector<Factor> factorize(u64 n) {
    std::vector<Factor> out;
    if (n == 0) throw DomainError("factorize(0)");
    for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.push_back({d, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> ds{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t base = ds.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline u64 euler_phi(u64 n) {
    u64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline int mobius(u64 n) {
    int s = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

inline u64 divisor_count(u64 n) {
    u64 c = 1;
    for (auto [p, e] : factorize(n)) c *= static_cast<u64>(e + 1);
    return c;
}

inline u64 inv_mod(i64 a, u64 m) {
    if (m == 0) throw DomainError("modulus 0");
    if (m == 1) return 0;
    i128 r0 = static_cast<i128>(m), r1 = reduce(a, m);
    i128 s0 = 0, s1 = 1;
    while (r1 != 0) {
        i128 q = r0 / r1;
        i128 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw NotInvertible(std::to_string(a) + " mod " + std::to_string(m));
    if (s0 < 0) s0 += m;
    return static_cast<u64>(s0);
}

// unit[x] != 0 iff gcd(x, m) == 1, sieved by the prime factors of m
inline std::vector<char> unit_mask(u64 m) {
    std::vector<char> unit(m, 1);
    if (m == 1) return unit;
    unit[0] = 0;
    for (const auto& f : factorize(m))
        for (u64 x = f.p; x < m; x += f.p) unit[x] = 0;
    return unit;
}

// Inverses of every unit mod m (0 at non-units) by prefix products and a single inversion.
inline std::vector<u64> inverse_table(u64 m) {
    std::vector<u64> inv(m, 0);
    if (m == 1) return inv;
    const auto unit = unit_mask(m);
    const bool small = m <= (u64{1} << 32);
    auto mul = [&](u64 a, u64 b) { return small ? a * b % m : mulmod(a, b, m); };
    // prefix product of the units below x, stored at x
    u64 acc = 1;
    for (u64 x = 1; x < m; ++x) {
        if (!unit[x]) continue;
        inv[x] = acc;
        acc = mul(acc, x);
    }
    u64 t = inv_mod(static_cast<i64>(acc), m);
    for (u64 x = m; x-- > 1;) {
        if (!unit[x]) continue;
        inv[x] = mul(t, inv[x]);
        t = mul(t, x);
    }
    return inv;
}

// Reference implementation: one extended Euclid per unit.
inline std::vector<u64> inverse_table_naive(u64 m) {
    std::vector<u64> inv(m, 0);
    const auto unit = unit_mask(m);
    for (u64 x = 1; x < m; ++x)
        if (unit[x]) inv[x] = inv_mod(static_cast<i64>(x), m);
    return inv;
}

class Residue {
public:
    Residue() = default;
    Residue(i64 value, u64 modulus) : m_(check(modulus)), v_(reduce(value, m_)) {}

    static Residue raw(u64 value, u64 modulus) {
        Residue r;
        r.m_ = modulus;
        r.v_ = value % modulus;
        return r;
    }

    u64 value() const { return v_; }
    u64 modulus() const { return m_; }

    Residue operator+(const Residue& o) const { return raw((v_ + same(o).v_) % m_, m_); }
    Residue operator-(const Residue& o) const { return raw((v_ + m_ - same(o).v_) % m_, m_); }
    Residue operator*(const Residue& o) const { return raw(mulmod(v_, same(o).v_, m_), m_); }
    Residue operator-() const { return raw((m_ - v_) % m_, m_); }
    bool operator==(const Residue& o) const { return v_ == o.v_ && m_ == o.m_; }

    Residue pow(u64 e) const { return raw(powmod(v_, e, m_), m_); }
    Residue inverse() const { return raw(inv_mod(static_cast<i64>(v_), m_), m_); }
    bool is_unit() const { return std::gcd(v_, m_) == 1; }

private:
    static u64 check(u64 m) {
        if (m == 0 || m > kModulusCap) throw DomainError("modulus out of range: " + std::to_string(m));
        return m;
    }
    const Residue& same(const Residue& o) const {
        if (o.m_ != m_) throw DomainError("mixed moduli");
        return o;
    }
    u64 m_ = 1;
    u64 v_ = 0;
};

struct PrimePower {
    u64 p = 3;
    int r = 1;
    u64 modulus = 3;
    u64 phi = 2;

    static PrimePower make(u64 p, int r) {
        if (p == 2) throw DomainError("p = 2 is not supported");
        if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
        if (r < 1) throw DomainError("exponent must be >= 1");
        i64 m = ipow(static_cast<i64>(p), r);
        if (static_cast<u64>(m) > kModulusCap) throw TooLarge("p^r above 2^40");
        PrimePower pp;
        pp.p = p;
        pp.r = r;
        pp.modulus = static_cast<u64>(m);
        pp.phi = pp.modulus / p * (p - 1);
        return pp;
    }
    bool operator==(const PrimePower& o) const { return p == o.p && r == o.r; }
};

inline bool is_generator(u64 g, const PrimePower& pp, const std::vector<Factor>& phi_factors) {
    if (g % pp.p == 0) return false;
    for (auto [l, e] : phi_factors)
        if (powmod(g, pp.phi / l, pp.modulus) == 1) return false;
    return true;
}

// Smallest positive generator of (Z/p^r)^*.
inline Residue primitive_root(const PrimePower& pp) {
    auto fs = factorize(pp.phi);
    for (u64 g = 2; g < pp.modulus; ++g)
        if (is_generator(g, pp, fs)) return Residue::raw(g, pp.modulus);
    if (pp.modulus == 3) return Residue::raw(2, 3);
    throw DomainError("no primitive root found");
}

namespace detail {

// log of h to base g inside a subgroup of prime order l, by baby-step giant-step
inline u64 bsgs(u64 g, u64 h, u64 l, u64 m) {
    u64 s = 1;
    while (s * s < l) ++s;
    std::unordered_map<u64, u64> baby;
    baby.reserve(2 * s);
    u64 cur = 1;
    for (u64 j = 0; j < s; ++j) {
        baby.emplace(cur, j);
        cur = mulmod(cur, g, m);
    }
    u64 giant = inv_mod(static_cast<i64>(powmod(g, s, m)), m);
    cur = h;
    for (u64 i = 0; i <= s; ++i) {
        auto it = baby.find(cur);
        if (it != baby.end()) return (i * s + it->second) % l;
        cur = mulmod(cur, giant, m);
    }
    throw DomainError("discrete log not found in subgroup");
}

} // namespace detail

// Pohlig-Hellman over the factorization p^(r-1)(p-1) of the group order.
inline u64 discrete_log(const Residue& x, const Residue& g, const PrimePower& pp) {
    if (x.modulus() != pp.modulus || g.modulus() != pp.modulus) throw DomainError("modulus mismatch");
    if (x.value() % pp.p == 0) throw NotAUnit(std::to_string(x.value()) + " mod " + std::to_string(pp.modulus));
    const u64 m = pp.modulus, n = pp.phi;
    u64 result = 0, acc_mod = 1;
    for (auto [l, e] : factorize(n)) {
        u64 le = 1;
        for (int i = 0; i < e; ++i) le *= l;
        u64 gi = powmod(g.value(), n / le, m);
        u64 hi = powmod(x.value(), n / le, m);
        u64 gamma = powmod(gi, le / l, m);
        u64 xi = 0, lk = 1;
        for (int k = 0; k < e; ++k) {
            u64 ginv = inv_mod(static_cast<i64>(powmod(gi, xi, m)), m);
            u64 hk = powmod(mulmod(ginv, hi, m), le / (lk * l), m);
            u64 d = detail::bsgs(gamma, hk, l, m);
            xi += d * lk;
            lk *= l;
        }
        // combine result (mod acc_mod) with xi (mod le)
        u64 t = mulmod(reduce(static_cast<i64>(xi) - static_cast<i64>(result % le), le),
                       inv_mod(static_cast<i64>(acc_mod % le), le), le);
        result += acc_mod * t;
        acc_mod *= le;
        result %= acc_mod;
    }
    return result;
}

class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<i64> coefficients) : c_(std::move(coefficients)) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
    const std::vector<i64>& coefficients() const { return c_; }

    u64 eval(u64 x, u64 m) const {
        u64 acc = 0;
        x %= m;
        for (std::size_t i = c_.size(); i-- > 0;) acc = (mulmod(acc, x, m) + reduce(c_[i], m)) % m;
        return acc;
    }

    IntPolynomial derivative() const {
        std::vector<i64> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<i64>(i));
        return IntPolynomial(std::move(d));
    }

private:
    std::vector<i64> c_;
};

// All lifts x mod p^s of a root mod p^j; singular roots branch or die level by level.
inline std::vector<Residue> hensel_lift(const IntPolynomial& f, const Residue& root, u64 p, int j, int s) {
    if (s < j) throw DomainError("target below source level");
    u64 pj = static_cast<u64>(ipow(static_cast<i64>(p), j));
    if (root.modulus() != pj) throw DomainError("root modulus is not p^j");
    if (f.eval(root.value(), pj) != 0) throw NotARoot(std::to_string(root.value()) + " mod " + std::to_string(pj));
    std::vector<u64> level{root.value()};
    u64 pk = pj;
    for (int k = j; k < s; ++k) {
        u64 next = pk * p;
        std::vector<u64> lifted;
        for (u64 x : level)
            for (u64 t = 0; t < p; ++t) {
                u64 y = x + t * pk;
                if (f.eval(y, next) == 0) lifted.push_back(y);
            }
        level.swap(lifted);
        pk = next;
    }
    std::sort(level.begin(), level.end());
    std::vector<Residue> out;
    out.reserve(level.size());
    for (u64 x : level) out.push_back(Residue::raw(x, pk));
    return out;
}

inline constexpr u64 kEnumerationBound = 10'000'000;

inline u64 count_roots(const IntPolynomial& f, u64 m) {
    if (m > kEnumerationBound) throw TooLarge("count_roots modulus " + std::to_string(m));
    u64 c = 0;
    for (u64 x = 0; x < m; ++x)
        if (f.eval(x, m) == 0) ++c;
    return c;
}

} // namespace depthkit
