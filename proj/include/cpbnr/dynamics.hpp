// dynamics.hpp — time evolution of the coupled CPB-NR amplitudes.
//
// The ladder decouples into independent 2x2 blocks: level |e,n> talks only to
// |g,n+1>. Each block is integrated on its own, by default in a co-rotating
// frame that strips the fast common phase exp(-i[n*Theta(t) + omega0*t/2]),
// Theta(t) = int_0^t omega(s) ds, leaving a slow residual system (see
// docs/rotating_frame.md for the algebra). Lab-frame integration is kept as a
// cross-check mode.
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "cpbnr/model.hpp"

namespace cpbnr {

// Full amplitude snapshot at one instant. cg[n] stores C_{g,n+1}; the
// amplitude C_{g,0} is identically zero under these equations of motion and
// is not stored.
struct AmplitudeState {
    double t = 0.0;
    std::vector<std::complex<double>> ce;
    std::vector<std::complex<double>> cg;
};

struct BlockSample {
    double t;
    std::complex<double> ce;
    std::complex<double> cg;
};

// Trajectory of one Fock block on the shared output grid.
struct BlockSolution {
    int n = 0;
    std::vector<BlockSample> samples;
};

// Lab integrates the oscillatory equations verbatim; Rotating (default)
// integrates the phase-stripped residual system. Both report lab-frame
// amplitudes.
enum class Frame { Rotating, Lab };

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 100.0;  // horizon in units of 1/lambda0
    int n_samples = 2001;  // uniform output grid including both endpoints
    Frame frame = Frame::Rotating;

    void validate() const;
};

// Uniform grid t_k = t_max * k / (n_samples - 1), with the last point exactly
// t_max.
std::vector<double> sample_grid(const IntegratorConfig& cfg);

// Accumulated fast phase n*Theta(t) + omega0*t/2 removed by the rotating
// frame. Shared by the numeric and analytic paths so the common factor
// exp(-i*phase) is bitwise identical in both.
double rotating_phase(int n, const ModelParams& params, const DetuningProfile& profile,
                      double t);

// Integrates one block from C_{e,n}(0) = f_n, C_{g,n+1}(0) = 0 and samples
// the uniform grid through the integrator's dense output.
BlockSolution evolve_block(int n, const ModelParams& params, const DetuningProfile& profile,
                           const IntegratorConfig& cfg, std::complex<double> f_n);

// Evolves every populated block (f_n != 0) and assembles full states on the
// shared grid. Blocks are independent pure computations; `threads` > 1 farms
// them out without changing any output bit.
std::vector<AmplitudeState> evolve_state(const ModelParams& params,
                                         const DetuningProfile& profile,
                                         const IntegratorConfig& cfg, const CatState& cat,
                                         int threads = 1);

// Closed-form solution of one block for constant detuning f = delta,
// evaluated with omega_eff = omega + delta and lambda_eff =
// lambda0*(1 + delta/omega). Returns (C_{e,n}, C_{g,n+1}) in the lab frame.
std::pair<std::complex<double>, std::complex<double>> analytic_block(
    int n, const ModelParams& params, double delta, double t, std::complex<double> f_n);

double norm_squared(const AmplitudeState& state);

} // namespace cpbnr
