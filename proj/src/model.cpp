#include "cpbnr/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cpbnr {

namespace {

// F_n of the even cat in extended precision. Independent of any truncation
// choice, so a prefix of coefficients never changes when n_max grows.
long double cat_coeff_ld(double alpha, int n) {
    if (n % 2 != 0) return 0.0L;
    const long double a = alpha;
    if (a == 0.0L) return n == 0 ? 1.0L : 0.0L;
    const long double eta = 1.0L / std::sqrt(2.0L + 2.0L * std::exp(-2.0L * a * a));
    const long double log_f =
        -0.5L * a * a + n * std::log(a) - 0.5L * std::lgamma(static_cast<long double>(n) + 1.0L);
    return 2.0L * eta * std::exp(log_f);
}

// Round a nonnegative long double toward zero when narrowing. Keeps every
// stored F_n at or below its true value, so the truncated norm sum can never
// creep above 1 no matter how the rounding errors line up.
double round_down(long double x) {
    double d = static_cast<double>(x);
    if (static_cast<long double>(d) > x) d = std::nextafter(d, 0.0);
    return d;
}

long double tail_weight_ld(double alpha, int n_max) {
    long double sum = 0.0L;
    for (int n = 0; n <= n_max; n += 2) {
        const long double f = cat_coeff_ld(alpha, n);
        sum += f * f;
    }
    long double tail = 1.0L - sum;
    return tail < 0.0L ? 0.0L : tail;
}

} // namespace

DetuningProfile DetuningProfile::constant(double delta) {
    DetuningProfile p;
    p.kind = Kind::Constant;
    p.delta = delta;
    return p;
}

DetuningProfile DetuningProfile::sinusoidal(double c, double omega_prime) {
    DetuningProfile p;
    p.kind = Kind::Sinusoidal;
    p.c = c;
    p.omega_prime = omega_prime;
    p.validate();
    return p;
}

double DetuningProfile::value(double t) const {
    switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return delta;
    case Kind::Sinusoidal: return c * std::sin(omega_prime * t);
    }
    return 0.0;
}

double DetuningProfile::integral(double t) const {
    switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return delta * t;
    case Kind::Sinusoidal: return c * (1.0 - std::cos(omega_prime * t)) / omega_prime;
    }
    return 0.0;
}

double DetuningProfile::constant_value() const {
    if (kind == Kind::Sinusoidal)
        throw config_error("detuning profile is sinusoidal; no constant value exists");
    return kind == Kind::Constant ? delta : 0.0;
}

void DetuningProfile::validate() const {
    if (kind == Kind::Sinusoidal && !(omega_prime > 0.0))
        throw config_error("profile.omega_prime must be > 0 for a sinusoidal detuning (got " +
                           std::to_string(omega_prime) + ")");
}

void ModelParams::validate() const {
    if (!(omega > 0.0))
        throw config_error("omega must be > 0 (got " + std::to_string(omega) + ")");
    if (!(omega0 >= 0.0))
        throw config_error("omega0 must be >= 0 (got " + std::to_string(omega0) + ")");
    if (!(lambda0 > 0.0))
        throw config_error("lambda0 must be > 0; it sets the time unit (got " +
                           std::to_string(lambda0) + ")");
    if (!(gamma >= 0.0))
        throw config_error("gamma must be >= 0 (got " + std::to_string(gamma) + ")");
    if (!(alpha >= 0.0))
        throw config_error("alpha must be >= 0 (got " + std::to_string(alpha) + ")");
    if (n_max < 1)
        throw config_error("n_max must be >= 1 (got " + std::to_string(n_max) + ")");
    const double tail = cat_tail_weight(alpha, n_max);
    if (!(tail < cat_tail_bound)) {
        std::ostringstream msg;
        msg << "n_max=" << n_max << " truncates the alpha=" << alpha
            << " cat state too hard (tail weight " << tail << " >= " << cat_tail_bound
            << "); use n_max >= " << minimal_adequate_n_max(alpha);
        throw config_error(msg.str());
    }
}

void DeviceParams::validate() const {
    if (!(ej0 >= 0.0))
        throw config_error("device.ej0 must be >= 0 (got " + std::to_string(ej0) + ")");
    if (!(ec >= 0.0))
        throw config_error("device.ec must be >= 0 (got " + std::to_string(ec) + ")");
}

CatState cat_coefficients(double alpha, int n_max) {
    if (!(alpha >= 0.0))
        throw config_error("alpha must be >= 0 (got " + std::to_string(alpha) + ")");
    if (n_max < 0)
        throw config_error("n_max must be >= 0 (got " + std::to_string(n_max) + ")");

    const double tail = cat_tail_weight(alpha, n_max);
    if (!(tail < cat_tail_bound)) {
        std::ostringstream msg;
        msg << "cat state with alpha=" << alpha << " is not contained by n_max=" << n_max
            << " (tail weight " << tail << " >= " << cat_tail_bound << "); use n_max >= "
            << minimal_adequate_n_max(alpha);
        throw config_error(msg.str());
    }

    CatState state;
    state.eta = static_cast<double>(
        1.0L / std::sqrt(2.0L + 2.0L * std::exp(-2.0L * static_cast<long double>(alpha) *
                                                static_cast<long double>(alpha))));
    state.coeffs.resize(static_cast<size_t>(n_max) + 1, 0.0);
    for (int n = 0; n <= n_max; n += 2)
        state.coeffs[static_cast<size_t>(n)] = round_down(cat_coeff_ld(alpha, n));
    return state;
}

double detuning_value(const DetuningProfile& profile, double t) {
    return profile.value(t);
}

EffectiveFrequencies effective_frequencies(const ModelParams& params,
                                           const DetuningProfile& profile,
                                           double t) {
    const double f = profile.value(t);
    return {params.omega + f, params.lambda0 * (1.0 + f / params.omega)};
}

ModelConstants device_to_model(const DeviceParams& dev) {
    const double pi = std::acos(-1.0);
    ModelConstants out;
    out.lambda0_phys = -4.0 * dev.ej0 * std::cos(pi * dev.phi_x) * dev.b_field_times_length_times_x0;
    out.omega0_phys = 8.0 * dev.ec * (dev.ng - 0.5);
    return out;
}

double cat_tail_weight(double alpha, int n_max) {
    return static_cast<double>(tail_weight_ld(alpha, n_max));
}

int minimal_adequate_n_max(double alpha) {
    // The occupation distribution peaks near alpha^2 with width ~alpha, so the
    // answer lives close to alpha^2 + O(alpha); the hard cap is a safety net.
    const int cap = static_cast<int>(alpha * alpha + 60.0 * alpha + 400.0);
    for (int n = 1; n <= cap; ++n) {
        if (tail_weight_ld(alpha, n) < cat_tail_bound) return n;
    }
    throw consistency_error("no adequate n_max found below " + std::to_string(cap) +
                            " for alpha=" + std::to_string(alpha));
}

int default_n_max(double alpha) {
    const int floor_n = static_cast<int>(std::ceil(alpha * alpha + 8.0 * alpha + 10.0));
    const int cap = floor_n + static_cast<int>(60.0 * alpha + 400.0);
    for (int n = floor_n; n <= cap; ++n) {
        if (tail_weight_ld(alpha, n) < cat_tail_bound) return n;
    }
    throw consistency_error("no adequate n_max found near " + std::to_string(floor_n) +
                            " for alpha=" + std::to_string(alpha));
}

} // namespace cpbnr
