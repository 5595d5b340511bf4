#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "depthkit/fftw.hpp"
#include "depthkit/residue.hpp"
#include "depthkit/roots.hpp"

namespace depthkit {

inline constexpr u64 kCharacterTableCap = u64(1) << 26;

struct CharacterTable {
    PrimePower pp;
    u64 generator = 0;
    std::vector<std::int64_t> dlog;  // -1 at non-units
    RootTable roots;                 // e(j / phi)

    explicit CharacterTable(const PrimePower& p) : pp(p), roots(p.phi) {
        if (pp.modulus > kCharacterTableCap) throw TooLarge("character table for modulus " + std::to_string(pp.modulus));
        generator = primitive_root(pp).value();
        dlog.assign(pp.modulus, -1);
        u64 x = 1;
        for (u64 j = 0; j < pp.phi; ++j) {
            dlog[x] = static_cast<std::int64_t>(j);
            x = mulmod(x, generator, pp.modulus);
        }
    }
};

// Tables are built once per modulus and never mutated afterwards.
inline std::shared_ptr<const CharacterTable> character_table(const PrimePower& pp) {
    static std::mutex mu;
    static std::map<std::pair<u64, int>, std::shared_ptr<const CharacterTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(pp.p, pp.r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const CharacterTable>(pp);
    cache.emplace(key, t);
    return t;
}

class DirichletCharacter {
public:
    DirichletCharacter(const PrimePower& pp, u64 index) : t_(character_table(pp)), index_(index % pp.phi) {}

    const PrimePower& prime_power() const { return t_->pp; }
    u64 modulus() const { return t_->pp.modulus; }
    u64 index() const { return index_; }
    u64 generator() const { return t_->generator; }

    // exponent j with chi(n) = e(j / phi), or -1 when p | n
    std::int64_t exponent(i64 n) const {
        std::int64_t d = t_->dlog[reduce(n, t_->pp.modulus)];
        if (d < 0) return -1;
        return static_cast<std::int64_t>(mulmod(index_, static_cast<u64>(d), t_->pp.phi));
    }

    cplx operator()(i64 n) const {
        std::int64_t j = exponent(n);
        return j < 0 ? cplx(0.0) : t_->roots[static_cast<u64>(j)];
    }

    DirichletCharacter conj() const { return DirichletCharacter(t_, (t_->pp.phi - index_) % t_->pp.phi); }

    // conductor exponent c with conductor p^c (0 for the principal character)
    int conductor_exponent() const {
        if (index_ == 0) return 0;
        const PrimePower& pp = t_->pp;
        int v = 0;
        u64 k = index_;
        while (v < pp.r - 1 && k % pp.p == 0) {
            k /= pp.p;
            ++v;
        }
        return pp.r - v;
    }
    bool is_primitive() const { return conductor_exponent() == t_->pp.r; }

    bool operator==(const DirichletCharacter& o) const { return t_->pp == o.t_->pp && index_ == o.index_; }

private:
    DirichletCharacter(std::shared_ptr<const CharacterTable> t, u64 index) : t_(std::move(t)), index_(index) {}
    std::shared_ptr<const CharacterTable> t_;
    u64 index_;
};

inline std::vector<DirichletCharacter> primitive_characters(const PrimePower& pp) {
    std::vector<DirichletCharacter> out;
    for (u64 k = 0; k < pp.phi; ++k) {
        DirichletCharacter chi(pp, k);
        if (chi.is_primitive()) out.push_back(chi);
    }
    return out;
}

inline cplx gauss_sum(const DirichletCharacter& chi) {
    const u64 m = chi.modulus();
    RootTable w(m);
    cplx s = 0.0;
    for (u64 b = 1; b < m; ++b) {
        std::int64_t j = chi.exponent(static_cast<i64>(b));
        if (j >= 0) s += chi(static_cast<i64>(b)) * w[b];
    }
    return s;
}

// tau(chi_k) for every index k at once: sum_j e(kj / phi) e(g^j / p^r) is one
// length-phi DFT of the additive character along the generator's powers.
inline std::vector<cplx> gauss_sums_all(const PrimePower& pp) {
    auto t = character_table(pp);
    const u64 n = pp.phi;
    RootTable w(pp.modulus);
    fftw_complex* buf = fftw_alloc_complex(n);
    u64 x = 1;
    for (u64 j = 0; j < n; ++j) {
        buf[j][0] = w[x].real();
        buf[j][1] = w[x].imag();
        x = mulmod(x, t->generator, pp.modulus);
    }
    fftw_plan plan;
    {
        std::lock_guard lk(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lk(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<cplx> out(n);
    for (u64 k = 0; k < n; ++k) out[k] = cplx(buf[k][0], buf[k][1]);
    fftw_free(buf);
    return out;
}

// The character mod p^s agreeing with chi on units.
inline DirichletCharacter induce(const DirichletCharacter& chi, int s) {
    const PrimePower& pp = chi.prime_power();
    if (s < pp.r) throw DomainError("induce: target level below source level");
    if (s == pp.r) return chi;
    PrimePower big = PrimePower::make(pp.p, s);
    auto tb = character_table(big);
    u64 g_small = tb->generator % pp.modulus;
    std::int64_t j = chi.exponent(static_cast<i64>(g_small));
    // chi(g') = e(j / phi_small) = e(j * p^(s-r) / phi_big)
    u64 scale = big.phi / pp.phi;
    return DirichletCharacter(big, static_cast<u64>(j) * scale);
}

struct PostnikovConstant {
    int t;
    Residue value;
};

inline PostnikovConstant postnikov_constant(const DirichletCharacter& chi, int t) {
    const PrimePower& pp = chi.prime_power();
    if (2 * t < pp.r) throw NotAdditive("2t < r at t = " + std::to_string(t));
    if (t > pp.r) throw DomainError("postnikov level above r");
    const u64 pt = static_cast<u64>(ipow(static_cast<i64>(pp.p), t));
    const u64 mod = pp.modulus / pt;
    // 1 + p^t has order p^(r-t); its discrete log is a multiple of phi / p^(r-t)
    std::int64_t j = chi.exponent(static_cast<i64>(1 + pt));
    const u64 step = pp.phi / mod;
    if (static_cast<u64>(j) % step != 0) throw NoConstant("exponent not aligned");
    u64 A = (static_cast<u64>(j) / step) % mod;
    for (u64 v = 0; v < mod; ++v) {
        cplx lhs = chi(static_cast<i64>((1 + mulmod(v, pt, pp.modulus)) % pp.modulus));
        cplx rhs = e_frac(static_cast<i64>(mulmod(A, v, mod)), mod);
        if (std::abs(lhs - rhs) > 1e-9) throw NoConstant("verification failed at v = " + std::to_string(v));
    }
    return {t, Residue::raw(A, mod)};
}

} // namespace depthkit
