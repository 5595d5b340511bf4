#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include "depthkit/errors.hpp"
#include "depthkit/expsums.hpp"
#include "depthkit/fftw.hpp"

namespace depthkit {

namespace detail {

inline double unit_bump(double t) { return (t > -1.0 && t < 1.0) ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

// fixed DFI weight supported on [1/2, 1]: exp(-2/(1-u^2)), u = 4t - 3
inline double dfi_w0(double t) {
    const double b = unit_bump(4.0 * t - 3.0);
    return b * b;
}

inline double smooth_step(double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; }

// 1 on |y| <= 1/2, 0 for |y| >= 1
inline double dfi_cutoff(double y) {
    const double a = std::abs(y);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double s = 2.0 * (a - 0.5);
    const double u = smooth_step(1.0 - s), v = smooth_step(s);
    return u / (u + v);
}

} // namespace detail

struct DeltaOptions {
    double dy = 1.0 / 32768.0;   // y-grid step of the kernel
    int log2_points = 20;        // FFT length
    double x_cutoff = 400.0;     // x-integral weight is 1 on |x| <= x_cutoff/2, 0 beyond x_cutoff
};

// g(q, x) tables for all q <= Q, with Q = 2 sqrt(L), sampled on x = k q / (N dy Q).
class DeltaExpansion {
public:
    explicit DeltaExpansion(double L, DeltaOptions opt = {}) : L_(L), opt_(opt) {
        if (!(L >= 1.0) || L > 1e4) throw OutOfRange("DeltaExpansion needs 1 <= L <= 1e4");
        Q_ = 2.0 * std::sqrt(L);
        qmax_ = static_cast<int>(std::floor(Q_));
        for (long d = 1; d <= static_cast<long>(2 * Q_) + 2; ++d) cprime_ += detail::dfi_w0(d / Q_);
        tables_.resize(qmax_ + 1);
        for (int q = 1; q <= qmax_; ++q) tables_[q] = build(q, 0);
    }

    double L() const { return L_; }
    double Q() const { return Q_; }
    int qmax() const { return qmax_; }
    double normalizer() const { return cprime_; }
    const DeltaOptions& options() const { return opt_; }

    double dx(int q) const { return q / (std::ldexp(1.0, opt_.log2_points) * opt_.dy * Q_); }
    // g(q, k dx) for k = 0 .. N/2
    const std::vector<double>& table(int q) const { return tables_.at(q); }
    double g(int q, std::size_t k) const { return tables_.at(q).at(k); }

    // j-th x-derivative of g(q, .) on the same grid, computed spectrally
    std::vector<double> derivative_table(int q, int j) const { return build(q, j); }

    double h(double x, double y) const {
        double s = 0.0;
        const long j1 = static_cast<long>(std::ceil(0.5 / x)), j2 = static_cast<long>(std::floor(1.0 / x));
        for (long j = std::max(1L, j1); j <= j2; ++j) s += detail::dfi_w0(x * j) / (x * j);
        const double a = std::abs(y);
        if (a > 0.0) {
            const long k1 = static_cast<long>(std::ceil(a / x)), k2 = static_cast<long>(std::floor(2.0 * a / x));
            for (long j = std::max(1L, k1); j <= k2; ++j) s -= detail::dfi_w0(a / (x * j)) / (x * j);
        }
        return s;
    }

    double x_weight(double x) const { return detail::dfi_cutoff(x / opt_.x_cutoff); }

private:
    std::vector<double> build(int q, int j) const {
        const std::size_t N = std::size_t(1) << opt_.log2_points;
        const double x = q / Q_;
        const double scale = Q_ / cprime_ * opt_.dy;
        std::vector<double> out(N / 2 + 1);
        const double w = 2.0 * std::numbers::pi * Q_ / q;
        // kernel samples in FFT order; support is |y| < 1
        const long span = static_cast<long>(std::ceil(1.0 / opt_.dy));
        if (j == 0) {
            double* in = fftw_alloc_real(N);
            fftw_complex* F = fftw_alloc_complex(N / 2 + 1);
            fftw_plan plan;
            {
                std::lock_guard lk(detail::fftw_planner_mutex());
                plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in, F, FFTW_ESTIMATE);
            }
            std::fill(in, in + N, 0.0);
            for (long i = -span; i <= span; ++i) {
                const double y = i * opt_.dy;
                in[(i + static_cast<long>(N)) % static_cast<long>(N)] = h(x, y) * detail::dfi_cutoff(y);
            }
            fftw_execute(plan);
            for (std::size_t k = 0; k <= N / 2; ++k) out[k] = scale * F[k][0];
            {
                std::lock_guard lk(detail::fftw_planner_mutex());
                fftw_destroy_plan(plan);
            }
            fftw_free(in);
            fftw_free(F);
            return out;
        }
        fftw_complex* in = fftw_alloc_complex(N);
        fftw_complex* F = fftw_alloc_complex(N);
        fftw_plan plan;
        {
            std::lock_guard lk(detail::fftw_planner_mutex());
            plan = fftw_plan_dft_1d(static_cast<int>(N), in, F, FFTW_FORWARD, FFTW_ESTIMATE);
        }
        for (std::size_t i = 0; i < N; ++i) in[i][0] = in[i][1] = 0.0;
        for (long i = -span; i <= span; ++i) {
            const double y = i * opt_.dy;
            // multiplier (-2 pi i y Q / q)^j
            const std::complex<double> m = std::pow(std::complex<double>(0.0, -w * y), j);
            const std::complex<double> v = h(x, y) * detail::dfi_cutoff(y) * m;
            const std::size_t idx = static_cast<std::size_t>((i + static_cast<long>(N)) % static_cast<long>(N));
            in[idx][0] = v.real();
            in[idx][1] = v.imag();
        }
        fftw_execute(plan);
        for (std::size_t k = 0; k <= N / 2; ++k) out[k] = scale * F[k][0];
        {
            std::lock_guard lk(detail::fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(F);
        return out;
    }

    double L_, Q_ = 0.0, cprime_ = 0.0;
    int qmax_ = 0;
    DeltaOptions opt_;
    std::vector<std::vector<double>> tables_;
};

// (1/Q) sum_q c_q(n)/q integral V(x/X0) g(q,x) e(nx/(qQ)) dx, trapezoid on the table grid
inline double dfi_delta(long n, const DeltaExpansion& D) {
    if (std::abs(static_cast<double>(n)) > 2.0 * D.L()) throw OutOfRange("dfi_delta needs |n| <= 2L");
    double total = 0.0;
    for (int q = 1; q <= D.qmax(); ++q) {
        const auto& g = D.table(q);
        const double dx = D.dx(q);
        const double w = 2.0 * std::numbers::pi * static_cast<double>(n) / (q * D.Q());
        double I = 0.5 * g[0];
        for (std::size_t k = 1; k < g.size(); ++k) {
            const double x = k * dx;
            const double v = D.x_weight(x);
            if (v == 0.0) break;
            I += v * g[k] * std::cos(w * x);
        }
        I *= 2.0 * dx;
        total += static_cast<double>(ramanujan_sum(n, q)) / q * I;
    }
    return total / D.Q();
}

inline double dfi_delta(long n, double L) { return dfi_delta(n, DeltaExpansion(L)); }

struct GPropertyReport {
    double L = 0.0, Q = 0.0;
    int B = 2;
    double near_one_ratio = 0.0;      // max |g-1| / ((Q/q)(q/Q+|x|)^B), |x| <= 1
    double derivative_ratio[2] = {0, 0};  // max |x^j g^(j)| / (log Q min(Q/q, 1/|x|)), j = 1, 2
    double decay_ratio = 0.0;         // max |g| |x|^3 over |x| >= 1
    double l1_ratio = 0.0;            // max over q of integral |g| / Q^0.1
    double tail_mass = 0.0;           // max over q of integral_{|x| > X0} |g|
    double g_at_origin_q1 = 0.0;
};

inline GPropertyReport g_properties_check(const DeltaExpansion& D, const std::vector<int>& qs, int B = 2) {
    GPropertyReport r;
    r.L = D.L();
    r.Q = D.Q();
    r.B = B;
    const double Q = D.Q(), X0 = D.options().x_cutoff;
    r.g_at_origin_q1 = D.g(1, 0);
    for (int q : qs) {
        if (q < 1 || q > D.qmax()) throw OutOfRange("q outside 1..Q");
        const auto& g = D.table(q);
        const double dx = D.dx(q);
        const auto g1 = D.derivative_table(q, 1), g2 = D.derivative_table(q, 2);
        double l1 = 0.5 * std::abs(g[0]), tail = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double x = k * dx;
            if (k > 0) {
                if (x <= X0) l1 += std::abs(g[k]);
                else tail += std::abs(g[k]);
            }
            if (x <= 1.0) r.near_one_ratio = std::max(r.near_one_ratio, std::abs(g[k] - 1.0) / ((Q / q) * std::pow(q / Q + x, B)));
            if (x > 0.0 && x <= X0) {
                const double bound = std::log(Q) * std::min(Q / q, 1.0 / x);
                r.derivative_ratio[0] = std::max(r.derivative_ratio[0], std::abs(x * g1[k]) / bound);
                r.derivative_ratio[1] = std::max(r.derivative_ratio[1], std::abs(x * x * g2[k]) / bound);
            }
            if (x >= 1.0 && x <= X0) r.decay_ratio = std::max(r.decay_ratio, std::abs(g[k]) * x * x * x);
        }
        r.l1_ratio = std::max(r.l1_ratio, 2.0 * l1 * dx / std::pow(Q, 0.1));
        r.tail_mass = std::max(r.tail_mass, 2.0 * tail * dx);
    }
    return r;
}

} // namespace depthkit
