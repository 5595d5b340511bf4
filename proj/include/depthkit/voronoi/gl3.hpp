#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "depthkit/analytic/gamma.hpp"
#include "depthkit/analytic/quadrature.hpp"
#include "depthkit/analytic/stationary_phase.hpp"
#include "depthkit/analytic/test_function.hpp"
#include "depthkit/expsums.hpp"
#include "depthkit/voronoi/coefficients.hpp"
#include "depthkit/voronoi/gl2.hpp"

namespace depthkit {

inline constexpr double kStieltjes1 = -0.072815845483676724861;

// gamma_l(s) = pi^(-3s-3/2)/2 (Gamma((1+s+l)/2) / Gamma((l-s)/2))^3
inline cplx gl3_gamma(cplx s, int l) {
    if (l != 0 && l != 1) throw DomainError("gl3_gamma parity must be 0 or 1");
    const cplx lg = log_gamma((1.0 + s + static_cast<double>(l)) / 2.0) - log_gamma((static_cast<double>(l) - s) / 2.0);
    return 0.5 * std::exp((-3.0 * s - 1.5) * std::log(std::numbers::pi) + 3.0 * lg);
}

// gamma_+- = gamma_0 -+ kappa gamma_1; the odd-part factor kappa is one of 1, -1, i, -i
enum class OddConvention { Plus, Minus, PlusI, MinusI };

inline cplx odd_factor(OddConvention k) {
    switch (k) {
    case OddConvention::Plus: return 1.0;
    case OddConvention::Minus: return -1.0;
    case OddConvention::PlusI: return cplx(0.0, 1.0);
    case OddConvention::MinusI: return cplx(0.0, -1.0);
    }
    return 1.0;
}

inline const char* convention_name(OddConvention k) {
    switch (k) {
    case OddConvention::Plus: return "gamma0-+gamma1";
    case OddConvention::Minus: return "gamma0+-gamma1";
    case OddConvention::PlusI: return "gamma0-+i*gamma1";
    case OddConvention::MinusI: return "gamma0+-i*gamma1";
    }
    return "";
}

// resolved by closing the twisted d3 identity numerically at c = 3..6
inline constexpr OddConvention kOddConvention = OddConvention::PlusI;

inline cplx gl3_gamma_pm(cplx s, int sign, OddConvention k = kOddConvention) {
    return gl3_gamma(s, 0) - static_cast<double>(sign) * odd_factor(k) * gl3_gamma(s, 1);
}

struct GL3Options {
    double sigma = -0.5;
    double panel = 0.25;       // tau panel width
    double tail = 1e-16;       // stop once a panel's mass falls below tail * total mass
    double max_height = 2000;  // ContourTruncationFailure beyond this
};

// G_l(y) = (1/2 pi i) int_(sigma) y^-s gamma_l(s) g~(-s) ds, with the tau-samples of
// gamma_l(s) g~(-s) cached so that many y share one contour.
class GL3Transform {
public:
    GL3Transform(const TestFunction& g, int parity, GL3Options opt = {}) : parity_(parity), opt_(opt) {
        if (parity != 0 && parity != 1) throw DomainError("parity must be 0 or 1");
        if (!(opt.sigma > -1.0)) throw DomainError("contour must satisfy sigma > -1");
        if (g.is_zero()) return;
        // probe the envelope on a doubling ladder before committing to panels
        auto envelope = [&](double t) {
            const cplx s(opt.sigma, t);
            return std::abs(gl3_gamma(s, parity) * g.mellin(-s));
        };
        double top = 0.0, limit = 0.0;
        for (double t = 1.0; t <= opt.max_height; t *= 2.0) {
            const double e = std::max({envelope(t), envelope(1.1 * t), envelope(1.23 * t)});
            top = std::max({top, e, envelope(0.0)});
            if (t >= 4.0 && e < opt.tail * top) {
                limit = 2.0 * t;
                break;
            }
        }
        if (limit == 0.0) throw ContourTruncationFailure("Mellin-Barnes tail above tolerance at height " + std::to_string(opt.max_height));
        static const GaussRule gl = gauss_legendre(15);
        double peak = 0.0;
        int quiet = 0;
        for (double t0 = 0.0;; t0 += opt.panel) {
            if (t0 > limit) throw ContourTruncationFailure("Mellin-Barnes tail above tolerance at height " + std::to_string(t0));
            double m = 0.0;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double t = t0 + 0.5 * opt.panel * (gl.nodes[i] + 1.0);
                const cplx s(opt.sigma, t);
                const cplx f = gl3_gamma(s, parity) * g.mellin(-s);
                const double w = 0.5 * opt.panel * gl.weights[i];
                tau_.push_back(t);
                fw_.push_back(w * f);
                m += w * std::abs(f);
            }
            mass_ += m;
            peak = std::max(peak, m);
            // past the envelope peak and below the tail level for four panels
            quiet = (m < peak && m < opt.tail * mass_) ? quiet + 1 : 0;
            if (quiet >= 4) {
                height_ = t0 + opt.panel;
                break;
            }
        }
    }

    // real for real g: G(y) = (1/pi) Re int_0^inf y^(-sigma - i tau) F(tau) dtau
    double operator()(double y) const {
        if (!(y > 0.0)) throw DomainError("G transform needs y > 0");
        const double ly = std::log(y);
        cplx s = 0.0;
        for (std::size_t i = 0; i < tau_.size(); ++i) s += fw_[i] * std::polar(1.0, -tau_[i] * ly);
        return std::exp(-opt_.sigma * ly) * s.real() / std::numbers::pi;
    }

    // |integrand| mass times y^-sigma: the resolution floor of operator()
    double scale(double y) const { return std::pow(y, -opt_.sigma) * mass_ / std::numbers::pi; }
    double height() const { return height_; }
    int parity() const { return parity_; }
    const GL3Options& options() const { return opt_; }

private:
    int parity_;
    GL3Options opt_;
    std::vector<double> tau_;
    std::vector<cplx> fw_;
    double mass_ = 0.0, height_ = 0.0;
};

// G_+-(y) = G_0(y) -+ kappa G_1(y)
class GL3PairTransform {
public:
    GL3PairTransform(const TestFunction& g, GL3Options opt = {}) : g0_(g, 0, opt), g1_(g, 1, opt) {}
    cplx operator()(double y, int sign, OddConvention k = kOddConvention) const {
        return g0_(y) - static_cast<double>(sign) * odd_factor(k) * g1_(y);
    }
    const GL3Transform& even() const { return g0_; }
    const GL3Transform& odd() const { return g1_; }

private:
    GL3Transform g0_, g1_;
};

inline cplx gl3_G_transform(double y, const TestFunction& g, int sign, double sigma = -0.5, OddConvention k = kOddConvention) {
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    GL3Options opt;
    opt.sigma = sigma;
    return GL3PairTransform(g, opt)(y, sign, k);
}

struct ContourReport {
    std::vector<double> sigmas;
    std::vector<cplx> values;
    double max_abs_diff = 0.0, rel_diff = 0.0;
};

inline ContourReport gl3_contour_check(double y, const TestFunction& g, int sign, const std::vector<double>& sigmas = {0.5, 1.0, 2.0}) {
    ContourReport r;
    r.sigmas = sigmas;
    double ref = 0.0;
    for (double s : sigmas) {
        r.values.push_back(gl3_G_transform(y, g, sign, s));
        ref = std::max(ref, std::abs(r.values.back()));
    }
    for (const cplx& v : r.values) r.max_abs_diff = std::max(r.max_abs_diff, std::abs(v - r.values.front()));
    r.rel_diff = ref > 0.0 ? r.max_abs_diff / ref : 0.0;
    return r;
}

// Effective Mellin bandwidth of g: the largest tau with |g~(-1/2 - i tau)| above
// e^-8 of its value at tau = 0.
inline double mellin_bandwidth(const TestFunction& g) {
    const double v0 = std::abs(g.mellin(cplx(-0.5, 0.0)));
    double t = 1.0;
    while (t < 1e4 && std::abs(g.mellin(cplx(-0.5, t))) > std::exp(-8.0) * v0) t *= 1.25;
    return t;
}

// G(y) is negligible once the gamma-factor stationary point 2 pi (x y)^(1/3) passes the
// Mellin bandwidth T for every x in the bulk of g: y0 = (T / 2 pi)^3 / N.
inline double gl3_decay_threshold(const TestFunction& g) {
    const Interval s = g.support();
    const double N = std::sqrt(s.lo * s.hi);
    const double T = mellin_bandwidth(g);
    return std::pow(T / (2.0 * std::numbers::pi), 3.0) / N;
}

struct GL3DecayReport {
    double threshold = 0.0;
    std::vector<double> ys, values;
    double slope = 0.0;          // log|G| against log y over the decade past the threshold
    double ratio = 0.0;          // |G(100 y0)| / |G(y0 / 100)|
};

inline GL3DecayReport gl3_decay_check(const TestFunction& g, int sign, int points = 9) {
    GL3DecayReport r;
    r.threshold = gl3_decay_threshold(g);
    GL3Options opt;
    opt.sigma = 2.0;
    const GL3PairTransform G(g, opt);
    for (int i = 0; i < points; ++i) {
        const double y = r.threshold * std::pow(10.0, static_cast<double>(i) / (points - 1));
        r.ys.push_back(y);
        r.values.push_back(std::abs(G(y, sign)));
    }
    r.slope = loglog_slope(r.ys, r.values);
    GL3Options lo;
    const double small = std::abs(GL3PairTransform(g, lo)(r.threshold / 100.0, sign));
    r.ratio = std::abs(G(100.0 * r.threshold, sign)) / small;
    return r;
}

// Residue of zeta^3 g~ at s = 1.
inline double d3_main_term(const TestFunction& g) {
    const double m0 = g.mellin(1.0).real(), m1 = g.mellin(1.0, 1).real(), m2 = g.mellin(1.0, 2).real();
    return 0.5 * m2 + 3.0 * kEulerGamma * m1 + (3.0 * kEulerGamma * kEulerGamma - 3.0 * kStieltjes1) * m0;
}

inline constexpr std::array<OddConvention, 4> kAllConventions = {OddConvention::Plus, OddConvention::Minus, OddConvention::PlusI,
                                                                OddConvention::MinusI};

struct D3SideValues {
    cplx lhs;
    std::array<cplx, 4> dual;  // indexed like kAllConventions
    double mellin[3] = {0, 0, 0};
    u64 dual_terms = 0;
};

// LHS and dual side of the twisted d3 Voronoi formula for one test function, the dual
// side under every odd-part convention.
inline D3SideValues d3_sides(i64 a, u64 c, const TestFunction& g, double threshold) {
    D3SideValues v;
    const Interval s = g.support();
    const u64 lo = static_cast<u64>(std::max(1.0, std::ceil(s.lo))), hi = static_cast<u64>(std::floor(s.hi));
    auto sv = shared_sieve(static_cast<std::uint32_t>(std::max<u64>(hi, 2)));
    double scale = 0.0;
    for (u64 n = lo; n <= hi; ++n) {
        const double t = sv->d3(static_cast<std::uint32_t>(n)) * g(static_cast<double>(n));
        v.lhs += t * e_frac(static_cast<i64>(reduce(a, c) * (n % c) % c), c);
        scale += std::abs(t);
    }
    for (int k = 0; k < 3; ++k) v.mellin[k] = g.mellin(1.0, k).real();
    const GL3Transform G0(g, 0), G1(g, 1);
    const i64 abar = c == 1 ? 0 : static_cast<i64>(inv_mod(a, c));
    const double c3 = std::pow(static_cast<double>(c), 3);
    const double thr = threshold * scale;
    for (u64 n1 : divisors(c)) {
        const KloostermanKernel K(c / n1);
        const double y1 = static_cast<double>(n1 * n1) / c3;
        // sum_+- S(abar, +-n2) G+- = (S+ + S-) G0 - kappa (S+ - S-) G1
        cplx even = 0.0, odd = 0.0;
        auto term = [&](u64 n2) -> cplx {
            const double y = y1 * static_cast<double>(n2);
            const double sp = K(abar, static_cast<i64>(n2)), sm = K(abar, -static_cast<i64>(n2));
            const double w = static_cast<double>(c) * static_cast<double>(d3_coefficient(n1, n2)) / static_cast<double>(n1 * n2);
            const double e = w * (sp + sm) * G0(y), o = w * (sp - sm) * G1(y);
            even += e;
            odd += o;
            return std::abs(e) + std::abs(o);
        };
        const auto [unused, n] = detail::dual_series(term, thr);
        (void)unused;
        for (std::size_t k = 0; k < kAllConventions.size(); ++k) v.dual[k] += even - odd_factor(kAllConventions[k]) * odd;
        v.dual_terms = std::max(v.dual_terms, n);
    }
    return v;
}

struct D3ResidualReport {
    i64 a = 1;
    u64 c = 1;
    OddConvention convention = kOddConvention;  // odd-part convention giving the smallest fit residual
    double coeff[3] = {0, 0, 0};        // fitted coefficients of g~(1), g~'(1), g~''(1)
    double fit_residual = 0.0;          // || r - M coeff || / || r ||, r complex
    std::array<double, 4> convention_residuals{};  // fit residual under each convention
    double predicted_g2 = 0.0;          // (1/4c^2) sum n1 tau(n1) S(abar, 0; c/n1)
    double predicted_g1 = 0.0;          // (1/2c^2) sum n1 tau(n1) P1(n1, c) S(abar, 0; c/n1)
    double g2_error = 0.0, g1_error = 0.0;
    double g2_ratio = 0.0, g1_ratio = 0.0;  // fitted / predicted
    std::vector<cplx> residuals;
    u64 dual_terms = 0;
};

namespace detail {

// real least squares of complex data on a real 3-column basis; returns the relative residual
inline double fit3(const std::vector<std::array<double, 3>>& M, const std::vector<cplx>& r, double coeff[3]) {
    double A[3][3] = {}, b[3] = {};
    std::array<double, 3> cs{};
    for (const auto& row : M)
        for (int j = 0; j < 3; ++j) cs[j] = std::max(cs[j], std::abs(row[j]));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (int j = 0; j < 3; ++j) {
            b[j] += M[i][j] / cs[j] * r[i].real();
            for (int k = 0; k < 3; ++k) A[j][k] += M[i][j] / cs[j] * M[i][k] / cs[k];
        }
    const double a00 = A[0][0] + A[1][1] + A[2][2];
    double x[3];
    for (int col = 0; col < 3; ++col) {
        int p = col;
        for (int i = col + 1; i < 3; ++i)
            if (std::abs(A[i][col]) > std::abs(A[p][col])) p = i;
        if (std::abs(A[p][col]) < 1e-12 * a00) throw RankDeficientBasket("basket does not separate g~(1), g~'(1), g~''(1)");
        std::swap(A[p], A[col]);
        std::swap(b[p], b[col]);
        for (int i = col + 1; i < 3; ++i) {
            const double f = A[i][col] / A[col][col];
            for (int k = col; k < 3; ++k) A[i][k] -= f * A[col][k];
            b[i] -= f * b[col];
        }
    }
    for (int i = 2; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < 3; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    for (int j = 0; j < 3; ++j) coeff[j] = x[j] / cs[j];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < M.size(); ++i) {
        const cplx e = r[i] - (M[i][0] * coeff[0] + M[i][1] * coeff[1] + M[i][2] * coeff[2]);
        num += std::norm(e);
        den += std::norm(r[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace detail

// P1(n1, c) = (5/3) log n1 - 3 log c + 3 gamma - (1/(3 d(n1))) sum_{d | n1} log d
inline double d3_P1(u64 n1, u64 c) {
    double ls = 0.0;
    for (u64 d : divisors(n1)) ls += std::log(static_cast<double>(d));
    return 5.0 / 3.0 * std::log(static_cast<double>(n1)) - 3.0 * std::log(static_cast<double>(c)) + 3.0 * kEulerGamma -
           ls / (3.0 * static_cast<double>(divisor_count(n1)));
}

inline D3ResidualReport d3_voronoi_residual_check(i64 a, u64 c, const std::vector<TestFunction>& basket, double threshold = 1e-14) {
    detail::require_coprime(a, c);
    if (c > 6) throw OutOfRange("d3 residual check needs c <= 6");
    if (basket.size() < 4) throw RankDeficientBasket("basket needs at least four test functions");
    D3ResidualReport rep;
    rep.a = a;
    rep.c = c;
    const i64 abar = c == 1 ? 0 : static_cast<i64>(inv_mod(a, c));
    const double c2 = static_cast<double>(c * c);
    for (u64 n1 : divisors(c)) {
        const double w = static_cast<double>(n1 * divisor_count(n1)) * kloosterman(abar, 0, c / n1);
        rep.predicted_g2 += w / (4.0 * c2);
        rep.predicted_g1 += w * d3_P1(n1, c) / (2.0 * c2);
    }
    std::vector<std::array<double, 3>> M;
    std::array<std::vector<cplx>, 4> res;
    for (const auto& g : basket) {
        const D3SideValues s = d3_sides(a, c, g, threshold);
        M.push_back({s.mellin[0], s.mellin[1], s.mellin[2]});
        for (std::size_t k = 0; k < 4; ++k) res[k].push_back(s.lhs - s.dual[k]);
        rep.dual_terms = std::max(rep.dual_terms, s.dual_terms);
    }
    double cf[4][3];
    std::size_t best = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        rep.convention_residuals[k] = detail::fit3(M, res[k], cf[k]);
        // prefer the library convention on ties (c <= 2 cannot tell them apart)
        if (rep.convention_residuals[k] < rep.convention_residuals[best] * (1.0 - 1e-6)) best = k;
    }
    const std::size_t lib = static_cast<std::size_t>(kOddConvention);
    if (rep.convention_residuals[lib] <= rep.convention_residuals[best] * (1.0 + 1e-6)) best = lib;
    rep.convention = kAllConventions[best];
    rep.fit_residual = rep.convention_residuals[best];
    for (int j = 0; j < 3; ++j) rep.coeff[j] = cf[best][j];
    rep.residuals = res[best];
    rep.g2_error = std::abs(rep.coeff[2] - rep.predicted_g2);
    rep.g1_error = std::abs(rep.coeff[1] - rep.predicted_g1);
    rep.g2_ratio = rep.coeff[2] / rep.predicted_g2;
    rep.g1_ratio = rep.coeff[1] / rep.predicted_g1;
    return rep;
}

// prod_p (a+1)(b+1)(a+b+2)/2 over p^a || n1, p^b || n2: closed form of d3_coefficient
inline u64 d3_coefficient_multiplicative(u64 n1, u64 n2, const Sieve& sv) {
    u64 r = 1;
    while (n1 > 1 || n2 > 1) {
        const u64 p = n1 > 1 && (n2 == 1 || sv.spf(static_cast<std::uint32_t>(n1)) <= sv.spf(static_cast<std::uint32_t>(n2)))
                          ? sv.spf(static_cast<std::uint32_t>(n1))
                          : sv.spf(static_cast<std::uint32_t>(n2));
        u64 ea = 0, eb = 0;
        while (n1 % p == 0) {
            n1 /= p;
            ++ea;
        }
        while (n2 % p == 0) {
            n2 /= p;
            ++eb;
        }
        r *= (ea + 1) * (eb + 1) * (ea + eb + 2) / 2;
    }
    return r;
}

struct SecondMomentRow {
    double x = 0.0;
    double sum = 0.0;
    double ratio = 0.0;  // sum / (x log^4 x)
};

struct SecondMomentReport {
    std::vector<SecondMomentRow> rows;
    double max_ratio_growth = 0.0;  // max ratio(2x)/ratio(x) beyond x = 1e4
    bool non_increasing = true;     // within 10% slack beyond x = 1e4
};

// sum_{n1^2 n2 <= x} A(n1, n2)^2 along the ladder
inline SecondMomentReport second_moment_check(const std::vector<double>& ladder) {
    SecondMomentReport rep;
    double xmax = 1.0;
    for (double x : ladder) {
        if (x > 1e6) throw OutOfRange("second moment needs x <= 1e6");
        xmax = std::max(xmax, x);
    }
    auto sv = shared_sieve(static_cast<std::uint32_t>(std::max(2.0, xmax)));
    for (double x : ladder) {
        SecondMomentRow row;
        row.x = x;
        const u64 X = x >= 1.0 ? static_cast<u64>(std::floor(x)) : 0;
        long double s = 0.0L;
        for (u64 n1 = 1; n1 * n1 <= X; ++n1)
            for (u64 n2 = 1; n1 * n1 * n2 <= X; ++n2) {
                const double A = static_cast<double>(d3_coefficient_multiplicative(n1, n2, *sv));
                s += A * A;
            }
        row.sum = static_cast<double>(s);
        row.ratio = x > 1.0 ? row.sum / (x * std::pow(std::log(x), 4)) : 0.0;
        rep.rows.push_back(row);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i - 1].x < 1e4 || rep.rows[i - 1].ratio <= 0.0) continue;
        const double g = rep.rows[i].ratio / rep.rows[i - 1].ratio;
        rep.max_ratio_growth = std::max(rep.max_ratio_growth, g);
        if (g > 1.1) rep.non_increasing = false;
    }
    return rep;
}

} // namespace depthkit
