#include "cpbnr/spectrum.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <thread>

#include "cpbnr/errors.hpp"

namespace cpbnr {

namespace {

// Trapezoid weights are uniform except at the two ends, so the quadrature
// reduces to a weighted phase sum evaluated independently per frequency.
std::complex<double> transform_at(const std::vector<double>& tau,
                                  const std::vector<double>& s, double h, double w) {
    const std::size_t n = tau.size();
    std::complex<double> acc = 0.5 * (s[0] * std::polar(1.0, w * tau[0]) +
                                      s[n - 1] * std::polar(1.0, w * tau[n - 1]));
    for (std::size_t k = 1; k + 1 < n; ++k) acc += s[k] * std::polar(1.0, w * tau[k]);
    const double pi = std::acos(-1.0);
    return acc * (h / pi);
}

} // namespace

SpectrumResult power_spectrum(const ObservableSeries& series,
                              const std::vector<double>& omega_grid,
                              const SpectrumOptions& opt) {
    const std::size_t n = series.tau.size();
    if (n < 2) throw config_error("power spectrum needs at least 2 samples (got " +
                                  std::to_string(n) + ")");
    if (series.entropy.size() != n)
        throw config_error("entropy series length does not match the tau grid");
    if (opt.threads < 1)
        throw config_error("threads must be >= 1 (got " + std::to_string(opt.threads) + ")");

    const double h = (series.tau[n - 1] - series.tau[0]) / static_cast<double>(n - 1);
    if (!(h > 0.0)) throw config_error("tau grid must be increasing");
    for (std::size_t k = 1; k < n; ++k) {
        const double dt = series.tau[k] - series.tau[k - 1];
        if (std::abs(dt - h) > 1e-6 * h)
            throw config_error("tau grid is not uniform near index " + std::to_string(k) +
                               " (step " + std::to_string(dt) + " vs " + std::to_string(h) +
                               "); the trapezoid transform requires equal spacing");
    }

    std::vector<double> s = series.entropy;
    if (opt.subtract_mean) {
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : s) v -= mean;
    }

    SpectrumResult out;
    out.omega_grid = omega_grid;
    out.ps_complex.resize(omega_grid.size());

    const auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            out.ps_complex[i] = transform_at(series.tau, s, h, omega_grid[i]);
    };

    const std::size_t n_freq = omega_grid.size();
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(opt.threads), n_freq ? n_freq : 1);
    if (n_workers <= 1) {
        eval_range(0, n_freq);
    } else {
        // Fixed index partition: every frequency is computed by exactly one
        // worker with thread-independent arithmetic, so output bytes cannot
        // depend on scheduling.
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t lo = n_freq * w / n_workers;
            const std::size_t hi = n_freq * (w + 1) / n_workers;
            pool.emplace_back(eval_range, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }

    out.ps_abs.resize(n_freq);
    double peak = 0.0;
    for (std::size_t i = 0; i < n_freq; ++i) {
        out.ps_abs[i] = std::abs(out.ps_complex[i]);
        peak = std::max(peak, out.ps_abs[i]);
    }
    out.ps_normalized.assign(n_freq, 0.0);
    if (peak > 0.0)
        for (std::size_t i = 0; i < n_freq; ++i) out.ps_normalized[i] = out.ps_abs[i] / peak;
    return out;
}

} // namespace cpbnr
