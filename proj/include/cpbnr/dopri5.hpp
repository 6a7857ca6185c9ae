// dopri5.hpp — Dormand-Prince 5(4) embedded pair for small complex systems.
//
// Hand-rolled rather than pulled from a library: the per-block systems are
// 2-dimensional, so a fixed-size, allocation-free stepper with FSAL, PI step
// control, and the classic quartic dense-output interpolant is both the
// fastest and the most transparent option. Coefficients follow Hairer,
// Norsett & Wanner, "Solving Ordinary Differential Equations I" (DOPRI5).
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

#include "cpbnr/errors.hpp"

namespace cpbnr {

struct Dopri5Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double safety = 0.9;
    double beta = 0.04;       // PI stabilization exponent
    double max_growth = 10.0; // step ratio ceiling
    double min_shrink = 0.2;  // step ratio floor
    std::int64_t max_steps = 20'000'000;
};

struct Dopri5Stats {
    std::int64_t n_accepted = 0;
    std::int64_t n_rejected = 0;
    std::int64_t n_feval = 0;
};

// One accepted step [t0, t0+h] with its dense-output polynomial. Evaluating
// at theta = 0 or 1 reproduces the step endpoints exactly.
template <std::size_t N>
struct DenseSegment {
    using State = std::array<std::complex<double>, N>;
    double t0 = 0.0;
    double h = 0.0;

    State c1{}, c2{}, c3{}, c4{}, c5{};

    State eval(double t) const {
        const double theta = (t - t0) / h;
        const double theta1 = 1.0 - theta;
        State y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = c1[i] + theta * (c2[i] + theta1 * (c3[i] + theta * (c4[i] + theta1 * c5[i])));
        return y;
    }
};

namespace detail {

// Scaled RMS norm over the real degrees of freedom, as in the reference code.
template <std::size_t N>
double error_norm(const std::array<std::complex<double>, N>& err,
                  const std::array<std::complex<double>, N>& y0,
                  const std::array<std::complex<double>, N>& y1,
                  double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sk_re =
            atol + rtol * std::max(std::abs(y0[i].real()), std::abs(y1[i].real()));
        const double sk_im =
            atol + rtol * std::max(std::abs(y0[i].imag()), std::abs(y1[i].imag()));
        const double er = err[i].real() / sk_re;
        const double ei = err[i].imag() / sk_im;
        acc += er * er + ei * ei;
    }
    return std::sqrt(acc / (2.0 * N));
}

template <std::size_t N>
double norm_over_scale(const std::array<std::complex<double>, N>& v,
                       const std::array<std::complex<double>, N>& y,
                       double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sk = atol + rtol * std::abs(y[i]);
        const double q = std::abs(v[i]) / sk;
        acc += q * q;
    }
    return std::sqrt(acc / N);
}

template <std::size_t N>
double hinit(const std::array<std::complex<double>, N>& y0,
             const std::array<std::complex<double>, N>& f0,
             const std::array<std::complex<double>, N>& f1,
             double h0, double span, double atol, double rtol) {
    std::array<std::complex<double>, N> df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
    const double d1 = norm_over_scale(f0, y0, atol, rtol);
    const double d2 = norm_over_scale(df, y0, atol, rtol) / h0; // curvature estimate
    const double dmax = std::max(d1, d2);
    double h1;
    if (dmax <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span});
}

} // namespace detail

// Integrates dy/dt = sys(t, y) from t0 to t1 (t1 > t0), invoking
// on_step(const DenseSegment<N>&) after every accepted step. Throws
// integration_error on step-size underflow or step-budget exhaustion.
template <std::size_t N, class System, class Observer>
Dopri5Stats dopri5_integrate(System&& sys,
                             std::array<std::complex<double>, N> y,
                             double t0, double t1,
                             const Dopri5Options& opt,
                             Observer&& on_step) {
    using State = std::array<std::complex<double>, N>;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    const double expo1 = 0.2 - opt.beta * 0.75;
    const double facc1 = 1.0 / opt.min_shrink;
    const double facc2 = 1.0 / opt.max_growth;
    const double span = t1 - t0;
    const double uround = 2.3e-16;

    Dopri5Stats stats;
    if (!(span > 0.0)) return stats;

    double t = t0;
    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;

    sys(t, y, k1);
    stats.n_feval += 1;

    // Starting step via the usual two-probe heuristic.
    double h;
    {
        double d0 = detail::norm_over_scale(y, y, opt.abs_tol, opt.rel_tol);
        double d1n = detail::norm_over_scale(k1, y, opt.abs_tol, opt.rel_tol);
        double h0 = (d0 < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * (d0 / d1n);
        h0 = std::min(h0, span);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h0 * k1[i];
        sys(t + h0, ytmp, k2);
        stats.n_feval += 1;
        h = detail::hinit(y, k1, k2, h0, span, opt.abs_tol, opt.rel_tol);
    }

    double facold = 1e-4;
    bool rejected = false;

    while (t < t1) {
        if (stats.n_accepted + stats.n_rejected >= opt.max_steps)
            throw integration_error("step budget exhausted at t=" + std::to_string(t));
        if (0.1 * h <= std::abs(t) * uround)
            throw integration_error("step size underflow at t=" + std::to_string(t) +
                                    " (h=" + std::to_string(h) + ")");
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
        sys(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        sys(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        sys(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        sys(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        sys(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        sys(t + h, ynew, k7);
        stats.n_feval += 6;

        for (std::size_t i = 0; i < N; ++i)
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);

        const double err = detail::error_norm(yerr, y, ynew, opt.abs_tol, opt.rel_tol);
        const double fac11 = std::pow(err, expo1);

        if (err <= 1.0) {
            // Accepted: build the dense segment, then advance (FSAL).
            DenseSegment<N> seg;
            seg.t0 = t;
            seg.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const std::complex<double> ydiff = ynew[i] - y[i];
                const std::complex<double> bspl = h * k1[i] - ydiff;
                seg.c1[i] = y[i];
                seg.c2[i] = ydiff;
                seg.c3[i] = bspl;
                seg.c4[i] = ydiff - h * k7[i] - bspl;
                seg.c5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
            }

            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, opt.beta);
            fac = std::max(facc2, std::min(facc1, fac / opt.safety));
            double hnew = h / fac;
            if (rejected) hnew = std::min(hnew, h);
            rejected = false;

            stats.n_accepted += 1;
            t = last ? t1 : t + h;
            y = ynew;
            k1 = k7;
            on_step(seg);
            h = hnew;
        } else {
            rejected = true;
            stats.n_rejected += 1;
            h = h / std::min(facc1, fac11 / opt.safety);
        }
    }
    return stats;
}

} // namespace cpbnr
