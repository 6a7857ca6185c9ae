// observables.hpp — reduced-state quantities derived from the amplitudes
#pragma once

#include <complex>
#include <vector>

#include "cpbnr/dynamics.hpp"

namespace cpbnr {

// Inner products of the two unnormalized NR states attached to |e> and |g>:
//   r11 = sum |C_{e,n}|^2, r22 = sum |C_{g,n+1}|^2,
//   r12 = sum C*_{e,n+1} C_{g,n+1}.
struct ReducedInnerProducts {
    double r11 = 0.0;
    double r22 = 0.0;
    std::complex<double> r12{0.0, 0.0};
};

struct ObservableSeries {
    std::vector<double> tau;
    std::vector<double> entropy;
    std::vector<double> inversion;
    std::vector<double> norm2;
};

ReducedInnerProducts inner_products(const AmplitudeState& state);

// Von Neumann entropy of the reduced two-level state, from
//   Lambda_plus = (1 + sqrt((r11-r22)^2 + 4|r12|^2)) / 2,  Lambda_minus = 1 -
//   Lambda_plus, S = -Lambda_plus ln Lambda_plus - Lambda_minus ln
//   Lambda_minus, 0 ln 0 = 0.
// The eigenvalues are complements of each other by the formula itself, even
// when decay has shrunk the norm. With renormalize set, the inner products
// are divided by r11 + r22 first. Rounding can push Lambda_minus slightly
// negative; values in [-1e-12, 0) are clamped, anything lower throws
// consistency_error. The result is clamped to [0, ln 2].
double entropy_from_products(const ReducedInnerProducts& p, bool renormalize = false);

double entropy(const AmplitudeState& state);

// Excitation inversion r11 - r22.
double inversion(const AmplitudeState& state);

// Element-wise entropy, inversion, and squared norm over a trajectory.
ObservableSeries series(const std::vector<AmplitudeState>& states,
                        bool renormalize_entropy = false);

} // namespace cpbnr
