// spectrum.hpp — half-line Fourier power spectrum of the entropy series
#pragma once

#include <complex>
#include <vector>

#include "cpbnr/observables.hpp"

namespace cpbnr {

struct SpectrumOptions {
    bool subtract_mean = false;  // detrend by the series mean before transforming
    int threads = 1;
};

struct SpectrumResult {
    std::vector<double> omega_grid;
    std::vector<std::complex<double>> ps_complex;
    std::vector<double> ps_abs;
    // ps_abs / max(ps_abs); all zeros when the spectrum vanishes identically
    std::vector<double> ps_normalized;
};

// PS(w) = (1/pi) * integral_0^tau_max S(tau) e^{i w tau} d tau, evaluated by
// composite trapezoid on the uniform tau grid, per requested frequency. The
// transform is complex; magnitude and max-normalized magnitude are derived
// columns. Throws config_error when the tau grid is not uniform.
SpectrumResult power_spectrum(const ObservableSeries& series,
                              const std::vector<double>& omega_grid,
                              const SpectrumOptions& opt = {});

} // namespace cpbnr
