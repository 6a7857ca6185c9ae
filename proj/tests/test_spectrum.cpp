#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cpbnr/errors.hpp"
#include "cpbnr/spectrum.hpp"

using namespace cpbnr;

namespace {

const double kPi = std::acos(-1.0);

ObservableSeries series_on(double tau_max, std::size_t n) {
    ObservableSeries s;
    s.tau.resize(n);
    const double h = tau_max / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) s.tau[k] = h * static_cast<double>(k);
    s.tau.back() = tau_max;
    s.entropy.assign(n, 0.0);
    return s;
}

void fill(ObservableSeries& s, double (*f)(double)) {
    for (std::size_t k = 0; k < s.tau.size(); ++k) s.entropy[k] = f(s.tau[k]);
}

// integral_0^T e^{i a tau} d tau, the only piece the closed forms below need
std::complex<double> phase_integral(double a, double T) {
    if (a == 0.0) return {T, 0.0};
    const std::complex<double> ia(0.0, a);
    return (std::exp(ia * T) - 1.0) / ia;
}

// exact transform of sin(w0 tau): split into the two complex exponentials
std::complex<double> sine_transform(double w0, double w, double T) {
    return (phase_integral(w + w0, T) - phase_integral(w - w0, T)) /
           std::complex<double>(0.0, 2.0);
}

double sine_half(double tau) { return std::sin(0.5 * tau); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) g[k] = lo + step * static_cast<double>(k);
    g.back() = hi;
    return g;
}

} // namespace

TEST_SUITE_BEGIN("spectrum");

TEST_CASE("zero series transforms to zero everywhere") {
    auto s = series_on(10.0, 51);
    auto r = power_spectrum(s, linspace(0.0, 2.0, 41));
    for (std::size_t i = 0; i < r.ps_complex.size(); ++i) {
        CHECK(r.ps_complex[i] == std::complex<double>(0.0, 0.0));
        CHECK(r.ps_abs[i] == 0.0);
        CHECK(r.ps_normalized[i] == 0.0);  // max-normalization skipped, not 0/0
    }
}

TEST_CASE("constant series at zero frequency gives s0 tau_max over pi") {
    auto s = series_on(40.0, 101);
    s.entropy.assign(101, 0.25);
    auto r = power_spectrum(s, {0.0, 1e-8});
    // trapezoid of a constant is exact, so only rounding separates the two
    CHECK(r.ps_complex[0].real() == doctest::Approx(0.25 * 40.0 / kPi).epsilon(1e-13));
    CHECK(std::abs(r.ps_complex[0].imag()) < 1e-15);
    // the w -> 0 limit is continuous
    CHECK(r.ps_abs[1] == doctest::Approx(0.25 * 40.0 / kPi).epsilon(1e-8));
}

TEST_CASE("sinusoid spectrum peaks at the grid point nearest its frequency") {
    auto s = series_on(400.0, 8001);
    fill(s, sine_half);
    const auto grid = linspace(0.0, 2.0, 4001);  // step 5e-4
    auto r = power_spectrum(s, grid);

    std::size_t argmax = 0, nearest = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (r.ps_normalized[i] > r.ps_normalized[argmax]) argmax = i;
        if (std::abs(grid[i] - 0.5) < std::abs(grid[nearest] - 0.5)) nearest = i;
    }
    CHECK(argmax == nearest);
    CHECK(r.ps_normalized[argmax] == 1.0);

    std::vector<double> sorted = r.ps_normalized;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    CHECK(r.ps_normalized[argmax] >= 10.0 * median);
}

TEST_CASE("trapezoid matches the closed-form sinusoid transform") {
    const double T = 40.0;
    auto s = series_on(T, 4001);  // h = 0.01
    fill(s, sine_half);
    const auto grid = linspace(0.0, 2.0, 21);
    auto r = power_spectrum(s, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto exact = sine_transform(0.5, grid[i], T) / kPi;
        worst = std::max(worst, std::abs(r.ps_complex[i] - exact));
    }
    // Euler-Maclaurin bound for this h is ~1e-5; leave slack for the constant
    CHECK(worst < 1e-4);
}

TEST_CASE("refinement converges at second order on a smooth series") {
    const double T = 40.0, w = 0.3;
    const auto exact = sine_transform(0.5, w, T) / kPi;
    double err[2];
    const std::size_t ns[2] = {201, 401};
    for (int k = 0; k < 2; ++k) {
        auto s = series_on(T, ns[k]);
        fill(s, sine_half);
        err[k] = std::abs(power_spectrum(s, {w}).ps_complex[0] - exact);
    }
    CHECK(err[0] > 1e-8);  // well above roundoff, slope is meaningful
    const double slope = std::log2(err[0] / err[1]);
    CHECK(slope >= 1.9);
    CHECK(slope <= 2.3);
}

TEST_CASE("transform is linear in the input series") {
    const std::size_t n = 257;
    auto s1 = series_on(30.0, n);
    auto s2 = series_on(30.0, n);
    auto s3 = series_on(30.0, n);
    // arbitrary data; linearity is a property of the quadrature, not the input
    unsigned long long state = 88172645463325252ull;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state % 1000003ull) / 1000003.0;
    };
    const double a = 0.7, b = -1.3;
    for (std::size_t k = 0; k < n; ++k) {
        s1.entropy[k] = next();
        s2.entropy[k] = next();
        s3.entropy[k] = a * s1.entropy[k] + b * s2.entropy[k];
    }
    const auto grid = linspace(0.0, 2.0, 33);
    auto r1 = power_spectrum(s1, grid);
    auto r2 = power_spectrum(s2, grid);
    auto r3 = power_spectrum(s3, grid);
    double scale = 0.0;
    for (double v : r3.ps_abs) scale = std::max(scale, v);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto combo = a * r1.ps_complex[i] + b * r2.ps_complex[i];
        CHECK(std::abs(r3.ps_complex[i] - combo) <= 1e-12 * scale);
    }
}

TEST_CASE("negative frequencies conjugate-mirror positive ones") {
    auto s = series_on(60.0, 601);
    fill(s, sine_half);
    const std::vector<double> ws = {0.1, 0.35, 0.8, 1.7};
    std::vector<double> grid;
    for (double w : ws) {
        grid.push_back(-w);
        grid.push_back(w);
    }
    auto r = power_spectrum(s, grid);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto neg = r.ps_complex[2 * i];
        const auto pos = r.ps_complex[2 * i + 1];
        CHECK(std::abs(neg - std::conj(pos)) <= 1e-12 * std::abs(pos));
    }
}

TEST_CASE("mean subtraction zeroes a constant series") {
    auto s = series_on(10.0, 41);
    s.entropy.assign(41, 0.25);  // exactly representable, so the mean is exact
    SpectrumOptions opt;
    opt.subtract_mean = true;
    auto r = power_spectrum(s, linspace(0.0, 1.0, 11), opt);
    for (std::size_t i = 0; i < r.ps_abs.size(); ++i) {
        CHECK(r.ps_abs[i] == 0.0);
        CHECK(r.ps_normalized[i] == 0.0);
    }
}

TEST_CASE("non-uniform tau grids are rejected") {
    auto s = series_on(10.0, 51);
    fill(s, sine_half);
    s.tau[5] += 0.01;
    CHECK_THROWS_AS(power_spectrum(s, {0.5}), config_error);

    auto tiny = series_on(10.0, 51);
    tiny.tau.resize(1);
    tiny.entropy.resize(1);
    CHECK_THROWS_AS(power_spectrum(tiny, {0.5}), config_error);

    auto mismatched = series_on(10.0, 51);
    mismatched.entropy.resize(50);
    CHECK_THROWS_AS(power_spectrum(mismatched, {0.5}), config_error);

    auto decreasing = series_on(10.0, 51);
    for (double& t : decreasing.tau) t = -t;
    CHECK_THROWS_AS(power_spectrum(decreasing, {0.5}), config_error);
}

TEST_CASE("thread count does not change a single bit") {
    auto s = series_on(120.0, 1201);
    fill(s, sine_half);
    const auto grid = linspace(0.0, 2.0, 801);
    SpectrumOptions one, three, eight;
    one.threads = 1;
    three.threads = 3;
    eight.threads = 8;
    auto r1 = power_spectrum(s, grid, one);
    auto r3 = power_spectrum(s, grid, three);
    auto r8 = power_spectrum(s, grid, eight);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(r1.ps_complex[i] == r3.ps_complex[i]);
        CHECK(r1.ps_complex[i] == r8.ps_complex[i]);
        CHECK(r1.ps_normalized[i] == r3.ps_normalized[i]);
        CHECK(r1.ps_normalized[i] == r8.ps_normalized[i]);
    }
    CHECK_THROWS_AS(power_spectrum(s, grid, SpectrumOptions{false, 0}), config_error);
}

TEST_SUITE_END();
