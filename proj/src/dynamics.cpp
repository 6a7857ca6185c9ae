#include "cpbnr/dynamics.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <string>
#include <thread>

#include "cpbnr/dopri5.hpp"

namespace cpbnr {

namespace {

using State2 = std::array<std::complex<double>, 2>;
constexpr std::complex<double> I{0.0, 1.0};

// Residual system after stripping exp(-i[n*Theta(t) + omega0*t/2]):
//   du/dt = -(gamma/2) u - i lambda(t) sqrt(n+1) v
//   dv/dt = -i (omega(t) - omega0) v - i lambda(t) sqrt(n+1) u
// All rates are O(gamma, |f|, lambda*sqrt(n+1)), none at the carrier scale.
struct RotatingRhs {
    const ModelParams& params;
    const DetuningProfile& profile;
    double sq;  // sqrt(n+1)

    void operator()(double t, const State2& y, State2& dy) const {
        const EffectiveFrequencies ef = effective_frequencies(params, profile, t);
        const std::complex<double> coup = -I * (ef.lambda_t * sq);
        dy[0] = -0.5 * params.gamma * y[0] + coup * y[1];
        dy[1] = -I * (ef.omega_t - params.omega0) * y[1] + coup * y[0];
    }
};

// The equations of motion verbatim, oscillating at the carrier frequency.
struct LabRhs {
    const ModelParams& params;
    const DetuningProfile& profile;
    int n;
    double sq;

    void operator()(double t, const State2& y, State2& dy) const {
        const EffectiveFrequencies ef = effective_frequencies(params, profile, t);
        const std::complex<double> coup = -I * (ef.lambda_t * sq);
        dy[0] = (-I * (n * ef.omega_t + 0.5 * params.omega0) - 0.5 * params.gamma) * y[0] +
                coup * y[1];
        dy[1] = -I * ((n + 1) * ef.omega_t - 0.5 * params.omega0) * y[1] + coup * y[0];
    }
};

// Drives one block through the integrator and fills the sample grid from the
// dense output. `to_lab` converts an interpolated state at time t into lab
// amplitudes (identity for Frame::Lab).
template <class Rhs, class ToLab>
void integrate_block(int n, Rhs rhs, const IntegratorConfig& cfg,
                     const std::vector<double>& grid, std::complex<double> f_n,
                     BlockSolution& out, ToLab to_lab) {
    Dopri5Options opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;

    out.samples.resize(grid.size());
    out.samples[0] = to_lab(grid[0], State2{f_n, 0.0});

    std::size_t next = 1;
    DenseSegment<2> last{};
    const auto on_step = [&](const DenseSegment<2>& seg) {
        const double seg_end = seg.t0 + seg.h;
        while (next < grid.size() && grid[next] <= seg_end) {
            out.samples[next] = to_lab(grid[next], seg.eval(grid[next]));
            ++next;
        }
        last = seg;
    };

    try {
        dopri5_integrate<2>(rhs, State2{f_n, 0.0}, 0.0, cfg.t_max, opt, on_step);
    } catch (const integration_error& e) {
        throw integration_error("block n=" + std::to_string(n) + ": " + e.what());
    }

    // The final accepted step lands on t_max exactly, but t0 + h can round a
    // hair below it; flush whatever is left through the last interpolant.
    while (next < grid.size()) {
        out.samples[next] = to_lab(grid[next], last.eval(grid[next]));
        ++next;
    }
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0))
        throw config_error("rel_tol must be > 0 (got " + std::to_string(rel_tol) + ")");
    if (!(abs_tol > 0.0))
        throw config_error("abs_tol must be > 0 (got " + std::to_string(abs_tol) + ")");
    if (!(t_max > 0.0))
        throw config_error("t_max must be > 0 (got " + std::to_string(t_max) + ")");
    if (n_samples < 2)
        throw config_error("n_samples must be >= 2 (got " + std::to_string(n_samples) + ")");
}

std::vector<double> sample_grid(const IntegratorConfig& cfg) {
    std::vector<double> grid(static_cast<std::size_t>(cfg.n_samples));
    const int last = cfg.n_samples - 1;
    for (int k = 0; k < last; ++k)
        grid[static_cast<std::size_t>(k)] = cfg.t_max * k / last;
    grid[static_cast<std::size_t>(last)] = cfg.t_max;
    return grid;
}

double rotating_phase(int n, const ModelParams& params, const DetuningProfile& profile,
                      double t) {
    const double theta = params.omega * t + profile.integral(t);
    return n * theta + 0.5 * params.omega0 * t;
}

BlockSolution evolve_block(int n, const ModelParams& params, const DetuningProfile& profile,
                           const IntegratorConfig& cfg, std::complex<double> f_n) {
    params.validate();
    profile.validate();
    cfg.validate();
    if (n < 0) throw config_error("block index must be >= 0 (got " + std::to_string(n) + ")");

    const std::vector<double> grid = sample_grid(cfg);
    const double sq = std::sqrt(n + 1.0);
    BlockSolution out;
    out.n = n;

    if (cfg.frame == Frame::Rotating) {
        const auto to_lab = [&](double t, const State2& uv) {
            const double phi = rotating_phase(n, params, profile, t);
            const std::complex<double> ph = std::polar(1.0, -phi);
            return BlockSample{t, ph * uv[0], ph * uv[1]};
        };
        integrate_block(n, RotatingRhs{params, profile, sq}, cfg, grid, f_n, out, to_lab);
    } else {
        const auto to_lab = [](double t, const State2& xy) {
            return BlockSample{t, xy[0], xy[1]};
        };
        integrate_block(n, LabRhs{params, profile, n, sq}, cfg, grid, f_n, out, to_lab);
    }
    return out;
}

std::vector<AmplitudeState> evolve_state(const ModelParams& params,
                                         const DetuningProfile& profile,
                                         const IntegratorConfig& cfg, const CatState& cat,
                                         int threads) {
    params.validate();
    cfg.validate();
    if (cat.n_max() != params.n_max)
        throw config_error("cat state truncation (" + std::to_string(cat.n_max()) +
                           ") does not match params.n_max (" + std::to_string(params.n_max) +
                           ")");
    if (threads < 1)
        throw config_error("threads must be >= 1 (got " + std::to_string(threads) + ")");

    std::vector<int> populated;
    for (int n = 0; n <= params.n_max; ++n)
        if (cat.coeffs[static_cast<std::size_t>(n)] != 0.0) populated.push_back(n);

    std::vector<BlockSolution> blocks(populated.size());
    const auto work = [&](int block_idx) {
        const int n = populated[static_cast<std::size_t>(block_idx)];
        blocks[static_cast<std::size_t>(block_idx)] =
            evolve_block(n, params, profile, cfg, cat.coeffs[static_cast<std::size_t>(n)]);
    };

    const int n_jobs = static_cast<int>(populated.size());
    if (threads == 1 || n_jobs <= 1) {
        for (int j = 0; j < n_jobs; ++j) work(j);
    } else {
        // Blocks are pure and land in preassigned slots, so any scheduling
        // produces the same bytes. First escaped exception wins.
        std::atomic<int> cursor{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        const int n_workers = std::min(threads, n_jobs);
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                while (!failed.load(std::memory_order_relaxed)) {
                    const int j = cursor.fetch_add(1);
                    if (j >= n_jobs) break;
                    try {
                        work(j);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        failed.store(true, std::memory_order_relaxed);
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    const std::vector<double> grid = sample_grid(cfg);
    std::vector<AmplitudeState> states(grid.size());
    const std::size_t width = static_cast<std::size_t>(params.n_max) + 1;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        states[k].t = grid[k];
        states[k].ce.assign(width, {0.0, 0.0});
        states[k].cg.assign(width, {0.0, 0.0});
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::size_t n = static_cast<std::size_t>(blocks[b].n);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            states[k].ce[n] = blocks[b].samples[k].ce;
            states[k].cg[n] = blocks[b].samples[k].cg;
        }
    }
    return states;
}

std::pair<std::complex<double>, std::complex<double>> analytic_block(
    int n, const ModelParams& params, double delta, double t, std::complex<double> f_n) {
    const double omega_eff = params.omega + delta;
    const double lambda_eff = params.lambda0 * (1.0 + delta / params.omega);
    const double omega0 = params.omega0;
    const double gamma = params.gamma;
    const double sq = std::sqrt(n + 1.0);
    const double Omega = lambda_eff * sq;

    // zeta^2 = gamma(gamma + 4i(omega0-omega)) - 4(omega^2+omega0^2)
    //          - 16 lambda^2 (1+n) + 8 omega omega0
    // evaluated as (gamma + 2i(omega0-omega))^2 - 16 lambda^2 (1+n), which is
    // the same polynomial but never forms the ~omega^2 intermediates whose
    // cancellation would wipe out gamma^2 at omega ~ 2000. Principal branch;
    // the solution is an even function of zeta, so the branch cannot matter.
    const std::complex<double> mu(gamma, 2.0 * (omega0 - omega_eff));
    const std::complex<double> zeta =
        std::sqrt(mu * mu - 16.0 * lambda_eff * lambda_eff * (1.0 + n));

    // Slow part in the rotating frame:
    //   u = e^{mt} [cosh(zeta t/4) - mu * s] f_n
    //   v = -4 i Omega s e^{mt} f_n
    // with mu = gamma + 2i(omega0 - omega_eff), m = -gamma/4 + i(omega0 -
    // omega_eff)/2 and s = sinh(zeta t/4)/zeta. The full amplitudes carry the
    // common factor e^{-i phi_n(t)} shared with the numeric path.
    const std::complex<double> q = 0.25 * zeta * t;

    std::complex<double> s;
    if (std::abs(zeta) * t < 1e-8) {
        s = 0.25 * t * (1.0 + q * q / 6.0);  // removes the 0/0 at zeta -> 0
    } else {
        s = std::sinh(q) / zeta;
    }

    const std::complex<double> m(-0.25 * gamma, 0.5 * (omega0 - omega_eff));
    const std::complex<double> growth = std::exp(m * t);
    const std::complex<double> u = growth * (std::cosh(q) - mu * s) * f_n;
    const std::complex<double> v = growth * (-4.0 * I * Omega * s) * f_n;

    const DetuningProfile profile =
        delta == 0.0 ? DetuningProfile::zero() : DetuningProfile::constant(delta);
    const std::complex<double> ph =
        std::polar(1.0, -rotating_phase(n, params, profile, t));
    return {ph * u, ph * v};
}

double norm_squared(const AmplitudeState& state) {
    double acc = 0.0;
    for (const std::complex<double>& c : state.ce) acc += std::norm(c);
    for (const std::complex<double>& c : state.cg) acc += std::norm(c);
    return acc;
}

} // namespace cpbnr
