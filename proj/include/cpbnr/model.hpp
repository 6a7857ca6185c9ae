// model.hpp — physical parameters, detuning profiles, and the initial cat state
#pragma once

#include <string>
#include <vector>

#include "cpbnr/errors.hpp"

namespace cpbnr {

// Largest admissible weight outside the Fock truncation window.
inline constexpr double cat_tail_bound = 1e-12;

// Time-dependent detuning f(t) of the resonator frequency. The mode frequency
// and the coupling are co-modulated:
//   omega(t)  = omega + f(t)
//   lambda(t) = lambda0 * (1 + f(t) / omega)
struct DetuningProfile {
    enum class Kind { Zero, Constant, Sinusoidal };

    Kind kind = Kind::Zero;
    double delta = 0.0;        // Constant: f(t) = delta
    double c = 0.0;            // Sinusoidal: f(t) = c * sin(omega_prime * t)
    double omega_prime = 0.0;

    static DetuningProfile zero() { return {}; }
    static DetuningProfile constant(double delta);
    static DetuningProfile sinusoidal(double c, double omega_prime);

    double value(double t) const;

    // Integral of f over [0, t]; closed form for all three kinds.
    double integral(double t) const;

    bool is_constant() const { return kind != Kind::Sinusoidal; }

    // The constant value of f for Zero/Constant profiles; throws for Sinusoidal.
    double constant_value() const;

    void validate() const;
};

// Parameters of the working Hamiltonian. All frequencies and rates are in
// units of lambda0; lambda0 itself is kept as a field so coupling-free limits
// remain expressible, but the CLI pins it to 1 (it is the time unit).
struct ModelParams {
    double omega = 2000.0;   // NR frequency
    double omega0 = 2000.0;  // CPB transition frequency
    double lambda0 = 1.0;    // base CPB-NR coupling
    double gamma = 0.0;      // CPB excited-state decay rate
    double alpha = 5.0;      // cat-state amplitude, real >= 0
    int n_max = 75;          // Fock truncation index

    // Throws config_error on a violated invariant, including the truncation
    // tail bound for the configured alpha.
    void validate() const;
};

// Hardware-level constants of the CPB-NR device. Only used by the
// device_to_model helper; the simulation itself runs on ModelParams.
struct DeviceParams {
    double ej0 = 0.0;    // Josephson energy of a single junction
    double ec = 0.0;     // single-electron charging energy
    double ng = 0.5;     // gate charge number
    double phi_x = 0.0;  // external flux in units of the flux quantum
    double b_field_times_length_times_x0 = 0.0;  // pi * B * l * x0 / Phi_0

    void validate() const;
};

// Even cat state eta*(|alpha> + |-alpha>) expanded over the Fock ladder.
// coeffs[n] = F_n vanishes at every odd n.
struct CatState {
    std::vector<double> coeffs;
    double eta = 0.0;

    int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct EffectiveFrequencies {
    double omega_t;
    double lambda_t;
};

struct ModelConstants {
    double lambda0_phys;
    double omega0_phys;
};

// Fock coefficients of the even cat state:
//   F_n = 2 * eta * exp(-alpha^2/2) * alpha^n / sqrt(n!)   (even n, else 0)
// with eta = [2 + 2 exp(-2 alpha^2)]^{-1/2}. Evaluated through log-Gamma in
// extended precision; n! would overflow past n ~ 170 and lose accuracy far
// earlier. Throws config_error naming the minimal adequate n_max when the
// truncated tail weight reaches cat_tail_bound.
CatState cat_coefficients(double alpha, int n_max);

double detuning_value(const DetuningProfile& profile, double t);

// (omega + f(t), lambda0 * (1 + f(t)/omega)) at time t.
EffectiveFrequencies effective_frequencies(const ModelParams& params,
                                           const DetuningProfile& profile,
                                           double t);

// Maps device constants onto the model constants:
//   lambda0 = -4 EJ0 cos(pi Phi_x/Phi_0) * (pi B l x0 / Phi_0)
//   omega0  =  8 Ec (Ng - 1/2)
// Informational helper for expressing hardware values in model units.
ModelConstants device_to_model(const DeviceParams& dev);

// Weight of the cat state beyond Fock level n_max, 1 - sum_{n<=n_max} F_n^2.
double cat_tail_weight(double alpha, int n_max);

// Smallest n_max whose tail weight is below cat_tail_bound.
int minimal_adequate_n_max(double alpha);

// Default truncation: smallest n >= alpha^2 + 8 alpha + 10 meeting the bound.
int default_n_max(double alpha);

} // namespace cpbnr
