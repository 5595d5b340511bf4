#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "depthkit/characters.hpp"
#include "depthkit/expsums.hpp"
#include "depthkit/residue.hpp"
#include "depthkit/roots.hpp"

namespace depthkit {

inline constexpr u64 kCharsumTermCap = 100'000'000;
inline constexpr u64 kPoissonModulusCap = 100'000;

// One character sum C(...) on a fixed valuation stratum l1.
struct CharsumParams {
    u64 p = 3;
    int r = 4;
    int l = 2;
    int l1 = 0;
    u64 q = 1;
    u64 k = 1;
    u64 n1 = 1;
    i64 n2 = 1;
    i64 m = 1;
    int sign = 1;
    u64 chi = 1;  // index of chi in the dlog basis of (Z/p^r)^*

    i64 pk(int e) const { return ipow(static_cast<i64>(p), e); }
    int lp() const { return valuation(static_cast<i64>(q), static_cast<i64>(p)); }
    u64 qp() const { return static_cast<u64>(strip(static_cast<i64>(q), static_cast<i64>(p))); }
    int l3() const { return valuation(static_cast<i64>(k), static_cast<i64>(p)); }
    u64 kp() const { return static_cast<u64>(strip(static_cast<i64>(k), static_cast<i64>(p))); }
    int l4() const { return valuation(static_cast<i64>(n1), static_cast<i64>(p)); }
    u64 n1p() const { return static_cast<u64>(strip(static_cast<i64>(n1), static_cast<i64>(p))); }
    int l5() const { return l + lp() + l3() - l1 - l4(); }
    int l6() const { return 2 * (r - l + l1); }
    // Kloosterman modulus q p^(l-l1) k / n1 = p^l5 q' k' / n1'
    u64 kloosterman_modulus() const { return static_cast<u64>(pk(l - l1)) * q * k / n1; }
    PrimePower prime_power() const { return PrimePower::make(p, r); }
    DirichletCharacter character() const { return DirichletCharacter(prime_power(), chi); }

    void validate() const {
        PrimePower pp = prime_power();
        if (l < 1 || l >= r) throw DomainError("need 1 <= l < r");
        if (l1 < 0 || l1 > l) throw DomainError("need 0 <= l1 <= l");
        if (q == 0 || k == 0 || n1 == 0) throw DomainError("q, k, n1 must be positive");
        if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
        if ((static_cast<u64>(pk(l - l1)) * q * k) % n1 != 0) throw DomainError("n1 does not divide q p^(l-l1) k");
        if (chi >= pp.phi) throw DomainError("character index out of range");
    }

    u64 term_estimate() const {
        PrimePower pp = prime_power();
        long double t = static_cast<long double>(q) * static_cast<long double>(pk(l)) * pp.phi * kloosterman_modulus();
        return t > 1e19L ? ~u64(0) : static_cast<u64>(t);
    }
};

namespace detail {

// v_p of x in [0, m), capped at cap (x = 0 gives cap)
inline int capped_valuation(u64 x, u64 p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (v < cap && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

} // namespace detail

// The inner beta-sum of C(...) for t = a + bq.
inline cplx charsum_beta_sum(const CharsumParams& P, const DirichletCharacter& chi, u64 t) {
    const DirichletCharacter cc = chi.conj();
    const u64 R = chi.modulus(), RQ = R * P.q;
    const int lp = P.lp();
    const u64 prl = static_cast<u64>(P.pk(P.r - P.l));
    cplx s = 0.0;
    for (u64 beta = 1; beta < R; ++beta) {
        if (beta % P.p == 0) continue;
        const u64 c = (mulmod(prl, t, RQ) + mulmod(P.q, beta, RQ)) % RQ;
        const int j = detail::capped_valuation(c, P.p, P.r + lp);
        const u64 pj = static_cast<u64>(P.pk(j));
        const u64 modj = RQ / pj;
        const u64 ci = inv_mod(static_cast<i64>((c / pj) % modj), modj);
        s += cc(-static_cast<i64>(beta)) * e_frac(static_cast<i64>(mulmod(ci, reduce(P.m, modj), modj)), modj);
    }
    return s;
}

// Brute-force triple sum over a mod q (unit), b mod p^l, beta mod p^r (unit).
class BruteForceCharsum {
public:
    explicit BruteForceCharsum(const CharsumParams& prm) : P_(prm), chi_(prm.character()) {
        P_.validate();
        if (P_.term_estimate() > kCharsumTermCap) throw TooLarge("charsum term count " + std::to_string(P_.term_estimate()));
        M_ = P_.kloosterman_modulus();
        kernel_.emplace(M_);
        const u64 pl = static_cast<u64>(P_.pk(P_.l));
        const u64 T = pl * P_.q;
        const int lp = P_.lp();
        const u64 Qv = static_cast<u64>(P_.pk(P_.l - P_.l1)) * P_.q;
        const u64 pl1 = static_cast<u64>(P_.pk(P_.l1));
        for (u64 a = 0; a < P_.q; ++a) {
            if (std::gcd(a, P_.q) != 1 && P_.q > 1) continue;
            for (u64 b = 0; b < pl; ++b) {
                const u64 t = (a + b * P_.q) % T;
                if (detail::capped_valuation(t, P_.p, P_.l + lp) != P_.l1) continue;
                const u64 x = (t / pl1) % Qv;
                const u64 X = mulmod(P_.k % M_, inv_mod(static_cast<i64>(x), Qv) % M_, M_);
                pairs_.push_back({t, X, charsum_beta_sum(P_, chi_, t)});
            }
        }
        if (pairs_.empty()) throw EmptyStratum("no (a,b) with valuation " + std::to_string(P_.l1));
    }

    const CharsumParams& params() const { return P_; }
    u64 modulus() const { return M_; }
    std::size_t pair_count() const { return pairs_.size(); }
    // Kloosterman terms per value() call
    u64 kloosterman_terms() const { return static_cast<u64>(pairs_.size()) * kernel_->terms(); }

    cplx value() const { return value(P_.n2, P_.sign); }

    cplx value(i64 n2, int sign) const {
        cplx s = 0.0;
        for (const auto& pr : pairs_) s += kernel_->complex_value(static_cast<i64>(pr.X), sign * n2) * pr.beta;
        return s;
    }

    // C as a function of n2 mod M
    std::vector<cplx> profile(int sign) const {
        std::vector<cplx> W(M_, 0.0);
        for (const auto& pr : pairs_) W[pr.X] += pr.beta;
        RootTable w(M_);
        std::vector<u64> units;
        for (u64 y = 0; y < M_; ++y)
            if (std::gcd(y, M_) == 1) units.push_back(y);
        if (M_ == 1) units.assign(1, 0);
        std::vector<u64> inv = inverse_table(M_);
        std::vector<cplx> hat(units.size(), 0.0);
        std::vector<u64> support;
        for (u64 X = 0; X < M_; ++X)
            if (W[X] != 0.0) support.push_back(X);
        for (std::size_t i = 0; i < units.size(); ++i)
            for (u64 X : support) hat[i] += W[X] * w[mulmod(X, units[i], M_)];
        std::vector<cplx> out(M_, 0.0);
        for (u64 nu = 0; nu < M_; ++nu) {
            const u64 sn = reduce(sign * static_cast<i64>(nu), M_);
            cplx s = 0.0;
            for (std::size_t i = 0; i < units.size(); ++i) s += hat[i] * w[mulmod(sn, inv[units[i]], M_)];
            out[nu] = s;
        }
        return out;
    }

private:
    struct Pair {
        u64 t;
        u64 X;
        cplx beta;
    };
    CharsumParams P_;
    DirichletCharacter chi_;
    u64 M_ = 1;
    std::optional<KloostermanKernel> kernel_;
    std::vector<Pair> pairs_;
};

inline cplx charsum_bruteforce(const CharsumParams& prm) { return BruteForceCharsum(prm).value(); }

// Sum over every (a,b), each pair contributing on its own stratum; strata whose
// Kloosterman modulus is not integral contribute nothing.
inline cplx charsum_unrestricted(const CharsumParams& prm) {
    CharsumParams base = prm;
    base.l1 = 0;
    base.validate();
    const u64 pl = static_cast<u64>(base.pk(base.l));
    const u64 T = pl * base.q;
    const int lp = base.lp();
    const DirichletCharacter chi = base.character();
    cplx s = 0.0;
    for (u64 a = 0; a < base.q; ++a) {
        if (std::gcd(a, base.q) != 1 && base.q > 1) continue;
        for (u64 b = 0; b < pl; ++b) {
            const u64 t = (a + b * base.q) % T;
            CharsumParams at = base;
            at.l1 = std::min(detail::capped_valuation(t, base.p, base.l + lp), base.l);
            const u64 Qv = static_cast<u64>(at.pk(at.l - at.l1)) * at.q;
            if ((Qv * at.k) % at.n1 != 0) continue;
            const u64 M = Qv * at.k / at.n1;
            const u64 x = (t / static_cast<u64>(at.pk(at.l1))) % Qv;
            const u64 X = mulmod(at.k % M, inv_mod(static_cast<i64>(x), Qv) % M, M);
            s += kloosterman_direct(static_cast<i64>(X), at.sign * at.n2, M) * charsum_beta_sum(at, chi, t);
        }
    }
    return s;
}

// Closed form of C(...) after evaluating the a-, beta- and u-sums.
class ReducedCharsum {
public:
    explicit ReducedCharsum(const CharsumParams& prm) : P_(prm), chi_(prm.character()) {
        P_.validate();
        if (P_.r % 2) throw UnsupportedParity("odd r");
        const int lp = P_.lp();
        if (lp == 0) {
            if ((P_.l - P_.l1) % 2) throw UnsupportedParity("odd l - l1");
            D_ = P_.l - P_.l1;
            Qc_ = P_.q;
        } else {
            if (P_.l1 != 0) throw EmptyStratum("(q,p) > 1 forces l1 = 0");
            if (lp > P_.r - P_.l) {
                vanishes_ = true;
                return;
            }
            if (lp == P_.r - P_.l) throw Unsupported("l' = r - l is not covered by the closed form");
            if ((P_.l + lp) % 2) throw UnsupportedParity("odd l + l'");
            D_ = P_.l + lp;
            Qc_ = P_.qp();
        }
        if (lp == 0 && P_.l4() > 0) {
            vanishes_ = true;
            return;
        }
        M_ = P_.kloosterman_modulus();
        if (M_ > kExpSumCap) throw TooLarge("alpha modulus " + std::to_string(M_));
        s_ = P_.r - D_;
        const PrimePower pp = P_.prime_power();
        R_ = pp.modulus;
        H_ = static_cast<u64>(P_.pk(P_.r / 2));
        U_ = static_cast<u64>(P_.pk(D_ / 2));
        PD_ = static_cast<u64>(P_.pk(D_));
        A_ = postnikov_constant(chi_, P_.r / 2).value.value();
        B_ = D_ > 0 ? (U_ - postnikov_constant(chi_.conj(), P_.r - D_ / 2).value.value() % U_) % U_ : 0;
        const u64 ps = static_cast<u64>(P_.pk(s_));
        const u64 qinvR = inv_mod(static_cast<i64>(Qc_), R_);
        const u64 qinvD = inv_mod(static_cast<i64>(Qc_), PD_);
        const DirichletCharacter cc = chi_.conj();
        for (u64 u = 0; u < U_; ++u) {
            if (D_ > 0 && u % P_.p == 0) continue;
            for (u64 v = 1; v < H_; ++v) {
                if (v % P_.p == 0) continue;
                if (h2(v, u) != 0) continue;
                const u64 w = reduce(static_cast<i64>(v) - static_cast<i64>(mulmod(ps, u, R_)), R_);
                Term tm;
                tm.c1 = D_ > 0 ? mulmod(mulmod(Qc_ % U_, B_, U_), inv_mod(static_cast<i64>(w % U_), U_), U_) : 0;
                const u64 ub = D_ > 0 ? inv_mod(static_cast<i64>(u), PD_) : 0;
                tm.c2 = D_ > 0 ? mulmod(mulmod(ub % U_, ub % U_, U_), P_.n1 % U_, U_) : 0;
                tm.g = D_ > 0 ? mulmod(mulmod(ub, qinvD, PD_), P_.n1 % PD_, PD_) : 0;
                const u64 vb = inv_mod(static_cast<i64>(v), R_);
                tm.z = cc(static_cast<i64>(w)) * e_frac(static_cast<i64>(mulmod(mulmod(vb, reduce(P_.m, R_), R_), qinvR, R_)), R_);
                terms_.push_back(tm);
            }
        }
        K_ = std::pow(static_cast<double>(P_.p), (P_.r + D_) / 2) * chi_(-static_cast<i64>(Qc_));
    }

    bool vanishes() const { return vanishes_; }
    u64 modulus() const { return M_; }
    u64 postnikov_A() const { return A_; }
    u64 postnikov_B() const { return B_; }
    int depth() const { return D_; }
    u64 coprime_modulus() const { return Qc_; }

    // h_2(v,u,m) mod p^(r/2)
    u64 h2(u64 v, u64 u) const {
        const u64 ps = static_cast<u64>(P_.pk(s_)) % H_;
        const u64 aq = mulmod(A_ % H_, Qc_ % H_, H_);
        const u64 mm = reduce(P_.m, H_);
        u64 val = (mulmod(mulmod(aq, v, H_), v, H_) + mulmod(mm, v, H_)) % H_;
        return (val + H_ - mulmod(mulmod(mm, ps, H_), u % H_, H_)) % H_;
    }
    // h_1(alpha,m) mod Qc
    u64 h1(u64 alpha) const {
        if (Qc_ == 1) return 0;
        const u64 a = mulmod(mulmod(P_.n1 % Qc_, alpha % Qc_, Qc_), inv_mod(static_cast<i64>(P_.pk(2 * D_) % static_cast<i64>(Qc_)), Qc_), Qc_);
        u64 pr = powmod(P_.p % Qc_, static_cast<u64>(2 * P_.r), Qc_);
        return (a + mulmod(reduce(P_.m, Qc_), inv_mod(static_cast<i64>(pr), Qc_), Qc_)) % Qc_;
    }

    // alpha-weights: C = sum over units alpha of e(sign n2 alpha-bar / M) w(alpha)
    std::vector<cplx> alpha_weights() const {
        std::vector<cplx> out(M_ == 0 ? 1 : M_, 0.0);
        if (vanishes_) return out;
        RootTable wD(PD_);
        for (u64 al = 0; al < M_; ++al) {
            if (std::gcd(al, M_) != 1 && M_ > 1) continue;
            const i64 dfac = ramanujan_sum(static_cast<i64>(h1(al)), Qc_);
            if (dfac == 0) continue;
            cplx inner = 0.0;
            const u64 aU = al % U_, aD = al % PD_;
            for (const auto& tm : terms_) {
                if (D_ > 0 && tm.c1 != mulmod(tm.c2, aU, U_)) continue;
                inner += tm.z * wD[mulmod(aD, tm.g, PD_)];
            }
            out[al] = K_ * static_cast<double>(dfac) * inner;
        }
        return out;
    }

    cplx value() const { return value(P_.n2, P_.sign); }

    cplx value(i64 n2, int sign) const {
        if (vanishes_) return 0.0;
        auto w = alpha_weights();
        RootTable roots(M_);
        auto inv = inverse_table(M_);
        const u64 sn = reduce(sign * n2, M_);
        cplx s = 0.0;
        for (u64 al = 0; al < M_; ++al)
            if (w[al] != 0.0) s += w[al] * roots[mulmod(sn, inv[al], M_)];
        return s;
    }

private:
    struct Term {
        u64 c1, c2, g;
        cplx z;
    };
    CharsumParams P_;
    DirichletCharacter chi_;
    bool vanishes_ = false;
    int D_ = 0, s_ = 0;
    u64 Qc_ = 1, M_ = 1, R_ = 1, H_ = 1, U_ = 1, PD_ = 1, A_ = 0, B_ = 0;
    cplx K_ = 0.0;
    std::vector<Term> terms_;
};

inline cplx charsum_reduced(const CharsumParams& prm) { return ReducedCharsum(prm).value(); }

struct CbetaPair {
    cplx brute;
    cplx reduced;
};

// beta-sum of Case 1 at a fixed u, directly and via the h_2-constrained v-sum.
inline CbetaPair cbeta_pair(const CharsumParams& prm, u64 u) {
    prm.validate();
    if (prm.r % 2) throw UnsupportedParity("odd r");
    if (prm.lp() != 0) throw Unsupported("cbeta_pair needs (q,p) = 1");
    const PrimePower pp = prm.prime_power();
    const DirichletCharacter chi = prm.character(), cc = chi.conj();
    const u64 R = pp.modulus, H = static_cast<u64>(prm.pk(prm.r / 2));
    const int s = prm.r - prm.l + prm.l1;
    const u64 ps = static_cast<u64>(prm.pk(s));
    const u64 qinv = inv_mod(static_cast<i64>(prm.q), R);
    const u64 mm = reduce(prm.m, R);
    CbetaPair out{0.0, 0.0};
    for (u64 beta = 1; beta < R; ++beta) {
        if (beta % prm.p == 0) continue;
        const u64 c = (mulmod(ps, u, R) + mulmod(prm.q % R, beta, R)) % R;
        if (c % prm.p == 0) continue;
        const u64 ci = inv_mod(static_cast<i64>(c), R);
        out.brute += cc(-static_cast<i64>(beta)) * e_frac(static_cast<i64>(mulmod(mulmod(mm, ci, R), qinv, R)), R);
    }
    const u64 A = postnikov_constant(chi, prm.r / 2).value.value() % H;
    cplx vs = 0.0;
    for (u64 v = 1; v < H; ++v) {
        if (v % prm.p == 0) continue;
        const u64 h = (mulmod(mulmod(mulmod(A, prm.q % H, H), v, H), v, H) + mulmod(mm % H, v, H) + H -
                       mulmod(mulmod(mm % H, ps % H, H), u % H, H)) % H;
        if (h != 0) continue;
        const u64 w = reduce(static_cast<i64>(v) - static_cast<i64>(mulmod(ps, u, R)), R);
        const u64 vb = inv_mod(static_cast<i64>(v), R);
        vs += cc(static_cast<i64>(w)) * e_frac(static_cast<i64>(mulmod(mulmod(vb, mm, R), qinv, R)), R);
    }
    out.reduced = std::pow(static_cast<double>(prm.p), prm.r / 2) * chi(-static_cast<i64>(prm.q)) * vs;
    return out;
}

// The pair of character sums entering the post-Poisson sum.
struct PoissonParams {
    CharsumParams base;  // p, r, l, l1, k, n1, chi, sign; q, m, n2 are overridden
    u64 q1 = 1;
    u64 q2a = 1;  // q_2' on the m side
    u64 q2b = 1;  // q_2'' on the m' side
    i64 m = 1;
    i64 mp = 1;
    i64 n2 = 0;

    CharsumParams side_a() const {
        CharsumParams c = base;
        c.q = q1 * q2a;
        c.m = m;
        return c;
    }
    CharsumParams side_b() const {
        CharsumParams c = base;
        c.q = q1 * q2b;
        c.m = mp;
        return c;
    }
    u64 big_modulus() const { return side_a().kloosterman_modulus() * q2b; }
};

struct PoissonResult {
    cplx direct;   // way (i): sum over nu of C conj(C')
    cplx reduced;  // way (ii): alpha, alpha' congruence
    u64 modulus = 0;
};

inline PoissonResult post_poisson_sum(const PoissonParams& pp, bool via_reduced = true) {
    const CharsumParams a = pp.side_a(), b = pp.side_b();
    a.validate();
    b.validate();
    const u64 Ma = a.kloosterman_modulus(), Mb = b.kloosterman_modulus();
    const u64 Qm = pp.big_modulus();
    if (Qm != Mb * pp.q2a) throw DomainError("inconsistent post-Poisson moduli");
    if (Qm > kPoissonModulusCap) throw TooLarge("post-Poisson modulus " + std::to_string(Qm));
    const int sg = pp.base.sign;
    PoissonResult res;
    res.modulus = Qm;
    {
        auto Ca = BruteForceCharsum(a).profile(sg);
        auto Cb = BruteForceCharsum(b).profile(sg);
        RootTable w(Qm);
        const u64 n2 = reduce(pp.n2, Qm);
        cplx s = 0.0;
        for (u64 nu = 0; nu < Qm; ++nu) s += Ca[nu % Ma] * std::conj(Cb[nu % Mb]) * w[mulmod(nu, n2, Qm)];
        res.direct = s / static_cast<double>(Qm);
    }
    if (via_reduced) {
        auto wa = ReducedCharsum(a).alpha_weights();
        auto wb = ReducedCharsum(b).alpha_weights();
        auto ia = inverse_table(Ma), ib = inverse_table(Mb);
        std::unordered_map<u64, cplx> by_key;
        for (u64 al = 0; al < Ma; ++al)
            if (wa[al] != 0.0) by_key[reduce(sg * static_cast<i64>(mulmod(Ma == 1 ? 0 : ia[al], pp.q2b % Qm, Qm)), Qm)] += wa[al];
        cplx s = 0.0;
        for (u64 al = 0; al < Mb; ++al) {
            if (wb[al] == 0.0) continue;
            // sign (abar q2'' - a'bar q2') + n2 = 0  <=>  sign abar q2'' = sign a'bar q2' - n2
            const u64 key = reduce(sg * static_cast<i64>(mulmod(Mb == 1 ? 0 : ib[al], pp.q2a % Qm, Qm)) - pp.n2, Qm);
            auto it = by_key.find(key);
            if (it != by_key.end()) s += it->second * std::conj(wb[al]);
        }
        res.reduced = s;
    }
    return res;
}

struct BoundZeroRow {
    PoissonParams params;
    double value = 0.0;      // |FC_0|
    double bound = 0.0;      // right side with implied constant 1; 0 when the divisibility fails
    double ratio = 0.0;      // value / bound, or 0 when bound == 0
    bool structural = true;  // FC_0 vanishes wherever the divisibility conditions force it to
};

struct BoundZeroReport {
    std::vector<BoundZeroRow> rows;
    double max_ratio = 0.0;
    bool structural_ok = true;
};

// Right side of the n2 = 0 bound for one tuple (implied constant 1).
inline double bound_zero_rhs(const PoissonParams& pp) {
    const CharsumParams a = pp.side_a();
    const int D = a.l - a.l1, s = a.r - a.l + a.l1;
    const i64 ps = a.pk(s);
    const i64 diff = pp.m - pp.mp;
    if (diff % ps != 0) return 0.0;
    const i64 quot = diff / ps;
    const u64 q = a.q;
    double acc = 0.0;
    for (u64 d : divisors(q))
        for (u64 dp : divisors(q)) {
            const u64 g = std::gcd(d, dp);
            if (quot % static_cast<i64>(g) != 0) continue;
            acc += static_cast<double>(d) * static_cast<double>(dp) * static_cast<double>(q * a.k) / static_cast<double>(d / g * dp);
        }
    return std::pow(static_cast<double>(a.p), a.r + 2 * D) * acc;
}

inline BoundZeroReport verify_bound_zero(const std::vector<PoissonParams>& grid, double zero_tol = 1e-6) {
    BoundZeroReport rep;
    for (const auto& g0 : grid) {
        PoissonParams g = g0;
        g.n2 = 0;
        BoundZeroRow row;
        row.params = g;
        row.value = std::abs(post_poisson_sum(g, false).direct);
        row.bound = bound_zero_rhs(g);
        const CharsumParams a = g.side_a();
        const double scale = zero_tol * std::pow(static_cast<double>(a.p), a.r + 2 * (a.l - a.l1));
        const bool forced_zero = g.q2a != g.q2b || row.bound == 0.0;
        if (forced_zero) row.structural = row.value <= scale;
        if (row.bound > 0.0) row.ratio = row.value / row.bound;
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.structural_ok = rep.structural_ok && row.structural;
        rep.rows.push_back(row);
    }
    return rep;
}

// The five congruences of the n2 != 0 count, with constants A and B.
struct CountingSystem {
    u64 p;
    int r, l, l1;
    u64 A, B;  // A mod p^(r/2), B mod p^((l-l1)/2)
    u64 q1, q2a, q2b, n1p;
    i64 m, mp, n2;

    int half_depth() const { return (l - l1) / 2; }
    u64 H() const { return static_cast<u64>(ipow(static_cast<i64>(p), r / 2)); }
    u64 U() const { return static_cast<u64>(ipow(static_cast<i64>(p), half_depth())); }
    u64 ps() const { return static_cast<u64>(ipow(static_cast<i64>(p), r - l + l1)); }

    u64 h2(u64 v, u64 u, u64 q, i64 mm) const {
        const u64 h = H();
        const u64 M = reduce(mm, h);
        return (mulmod(mulmod(mulmod(A % h, q % h, h), v, h), v, h) + mulmod(M, v, h) + h -
                mulmod(mulmod(M, ps() % h, h), u % h, h)) % h;
    }
    // B q inv(v - p^s u) - inv(u)^2 n1' inv(n2) (gamma - q2'') * extra
    u64 h3(u64 v, u64 u, u64 q, u64 gamma, u64 extra) const {
        const u64 P = U();
        const u64 w = reduce(static_cast<i64>(v % P) - static_cast<i64>(mulmod(ps() % P, u, P)), P);
        const u64 lhs = mulmod(mulmod(q % P, B % P, P), inv_mod(static_cast<i64>(w), P), P);
        const u64 ub = inv_mod(static_cast<i64>(u), P);
        u64 rhs = mulmod(mulmod(ub, ub, P), n1p % P, P);
        rhs = mulmod(rhs, inv_mod(n2, P), P);
        rhs = mulmod(rhs, reduce(static_cast<i64>(gamma) - static_cast<i64>(q2b), P), P);
        rhs = mulmod(rhs, extra, P);
        return (lhs + P - rhs) % P;
    }
    u64 h4(u64 u, u64 up, u64 gamma) const {
        const u64 P = U();
        const u64 gb = inv_mod(static_cast<i64>(gamma), P);
        const u64 a = mulmod(inv_mod(static_cast<i64>(u), P), inv_mod(static_cast<i64>(q2a), P), P);
        const u64 b = mulmod(mulmod(inv_mod(static_cast<i64>(up), P), q2a % P, P), mulmod(gb, gb, P), P);
        return (a + P - b) % P;
    }
};

inline CountingSystem counting_system(const PoissonParams& pp) {
    const CharsumParams a = pp.side_a();
    a.validate();
    if (a.r % 2 || (a.l - a.l1) % 2) throw UnsupportedParity("counting needs r and l - l1 even");
    if (a.l == a.l1) throw DomainError("counting needs l > l1");
    if (pp.n2 % static_cast<i64>(a.p) == 0) throw Unsupported("p | n2 is not treated");
    if (a.lp() != 0 || pp.side_b().lp() != 0) throw Unsupported("counting needs (q,p) = 1");
    const DirichletCharacter chi = a.character();
    const int D = a.l - a.l1;
    CountingSystem cs;
    cs.p = a.p;
    cs.r = a.r;
    cs.l = a.l;
    cs.l1 = a.l1;
    cs.A = postnikov_constant(chi, a.r / 2).value.value() % cs.H();
    const u64 U = cs.U();
    cs.B = (U - postnikov_constant(chi.conj(), a.r - D / 2).value.value() % U) % U;
    cs.q1 = pp.q1;
    cs.q2a = pp.q2a;
    cs.q2b = pp.q2b;
    cs.n1p = a.n1p();
    cs.m = pp.m;
    cs.mp = pp.mp;
    cs.n2 = pp.n2;
    return cs;
}

struct CountingRow {
    PoissonParams params;
    u64 count = 0;
    u64 max_gamma_roots = 0;      // over (u,u'), roots of gamma^2 = u' u-bar q2'-bar^2
    bool v0_unique = true;        // h_2 has exactly one unit root in v for each u
    bool v0_congruence = true;    // that root is -m inv(Aq') mod p^(r-l+l1)
    bool sextic_identity = true;  // factorization holds at random points
};

struct CountingReport {
    std::vector<CountingRow> rows;
    u64 max_count = 0;
    bool ok = true;
};

inline CountingRow count_solutions(const PoissonParams& pp, std::uint64_t seed = 1) {
    CountingSystem cs = counting_system(pp);
    const u64 U = cs.U(), H = cs.H(), P = U;
    const u64 qa = cs.q1 * cs.q2a, qb = cs.q1 * cs.q2b;
    std::vector<u64> uu, vv;
    for (u64 x = 1; x < U; ++x)
        if (x % cs.p) uu.push_back(x);
    for (u64 x = 1; x < H; ++x)
        if (x % cs.p) vv.push_back(x);
    long double tuples = static_cast<long double>(uu.size()) * uu.size() * uu.size() * vv.size() * vv.size();
    if (tuples > 1e8L) throw TooLarge("counting tuple space");
    CountingRow row;
    row.params = pp;
    const u64 pS = cs.ps();
    const u64 s_mod = std::min<u64>(pS, H);
    for (u64 u : uu) {
        std::vector<u64> va, vb;
        for (u64 v : vv)
            if (cs.h2(v, u, qa, cs.m) == 0) va.push_back(v);
        if (va.size() != 1) row.v0_unique = false;
        for (u64 v : va) {
            const u64 inv_aq = inv_mod(static_cast<i64>(mulmod(cs.A % s_mod, qa % s_mod, s_mod)), s_mod);
            if (v % s_mod != reduce(-static_cast<i64>(mulmod(reduce(cs.m, s_mod), inv_aq, s_mod)), s_mod)) row.v0_congruence = false;
        }
        for (u64 up : uu) {
            u64 groots = 0;
            const u64 target = mulmod(mulmod(up, inv_mod(static_cast<i64>(u), P), P),
                                      mulmod(inv_mod(static_cast<i64>(cs.q2a), P), inv_mod(static_cast<i64>(cs.q2a), P), P), P);
            for (u64 g : uu)
                if (mulmod(g, g, P) == target) ++groots;
            row.max_gamma_roots = std::max(row.max_gamma_roots, groots);
            for (u64 v : va) {
                for (u64 vp : vv) {
                    if (cs.h2(vp, up, qb, cs.mp) != 0) continue;
                    for (u64 g : uu) {
                        if (cs.h4(u, up, g) != 0) continue;
                        if (cs.h3(v, u, qa, g, 1) != 0) continue;
                        const u64 extra = mulmod(cs.q2a % P, inv_mod(static_cast<i64>(g), P), P);
                        if (cs.h3(vp, up, qb, g, extra) != 0) continue;
                        ++row.count;
                    }
                }
            }
        }
    }
    // sextic identity mod p with B2, B3 from the constants above
    const u64 p = cs.p;
    auto iv = [&](i64 x) { return inv_mod(x, p); };
    const u64 A = cs.A % p, B = cs.B % p;
    const u64 qap = qa % p, qbp = qb % p, q2a = cs.q2a % p, q2b = cs.q2b % p;
    const u64 n1i = iv(static_cast<i64>(cs.n1p)), n2p = reduce(cs.n2, p);
    const u64 B2 = reduce(-static_cast<i64>(mulmod(mulmod(mulmod(mulmod(n1i, n2p, p), mulmod(B, iv(cs.m), p), p), A, p),
                                               mulmod(mulmod(qap, qap, p), q2a, p), p)), p);
    const u64 B3 = reduce(-static_cast<i64>(mulmod(mulmod(mulmod(iv(static_cast<i64>(cs.n1p * cs.q2a % p)), n2p, p),
                                                        mulmod(mulmod(B, iv(cs.mp), p), A, p), p),
                                                 mulmod(mulmod(qbp, qbp, p), iv(static_cast<i64>(q2b * q2a % p)), p), p)), p);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> pick(0, p - 1);
    if (B2 % p != 0) {
        const u64 c = mulmod(B3, iv(static_cast<i64>(B2)), p);
        const u64 qq = mulmod(q2a, q2b, p), qqi = iv(static_cast<i64>(qq));
        for (int i = 0; i < 20; ++i) {
            const u64 x = pick(rng);
            const u64 x5 = powmod(x, 5, p), x6 = powmod(x, 6, p);
            const u64 lhs = (mulmod(c, x6, p) + p - mulmod(mulmod(c, qq, p), x5, p) + mulmod(qqi, x, p) + p - 1) % p;
            const u64 rhs = mulmod((mulmod(mulmod(qq, c, p), x5, p) + 1) % p, (mulmod(qqi, x, p) + p - 1) % p, p);
            if (lhs != rhs) row.sextic_identity = false;
        }
    }
    return row;
}

inline CountingReport verify_counting_claim(const std::vector<PoissonParams>& grid, u64 cap = 12) {
    CountingReport rep;
    for (const auto& g : grid) {
        CountingRow row = count_solutions(g);
        rep.max_count = std::max(rep.max_count, row.count);
        rep.ok = rep.ok && row.count <= cap && row.max_gamma_roots <= 2 && row.v0_unique && row.v0_congruence && row.sextic_identity;
        rep.rows.push_back(row);
    }
    return rep;
}

using Rational = boost::rational<i64>;

// e_r r + e_l l
struct LinearForm {
    Rational r_coeff;
    Rational l_coeff;
};

struct ExponentSolution {
    Rational l_over_r;
    Rational sum_exponent;  // common value of both forms, per unit r
    Rational l_exponent;    // exponent of p^r in the L-function bound
};

inline ExponentSolution exponent_optimizer(const LinearForm& f, const LinearForm& g) {
    if (!(f.l_coeff * g.l_coeff < Rational(0))) throw NoCrossing("forms do not move in opposite directions in l");
    Rational ratio = (g.r_coeff - f.r_coeff) / (f.l_coeff - g.l_coeff);
    Rational value = f.r_coeff + f.l_coeff * ratio;
    return {ratio, value, value};
}

} // namespace depthkit
