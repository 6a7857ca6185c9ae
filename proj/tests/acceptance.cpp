// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// eight hold. Tolerances are pinned here, next to the checks they govern.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cpbnr/config.hpp"
#include "cpbnr/dynamics.hpp"
#include "cpbnr/model.hpp"
#include "cpbnr/observables.hpp"
#include "cpbnr/runner.hpp"
#include "cpbnr/spectrum.hpp"

using namespace cpbnr;
namespace fs = std::filesystem;

namespace {

// criterion 1: numeric integrator vs closed-form solution
constexpr double kOracleTol = 1e-8;
constexpr double kRuntimeBudgetSeconds = 60.0;
// criterion 2: entropy ceiling for the decay-free resonant cat
constexpr double kCeilingFraction = 0.98;
constexpr double kCeilingSlack = 1e-9;
// criterion 3: initial purity of every preset
constexpr double kPurityTol = 1e-12;
// criterion 4: norm conservation / monotone decay. The conservation check
// runs at reference tolerances (printed below): truncation error of the
// 38-block cat accumulates to ~1.4e-8 over tau in [0,100] at the default
// rel 1e-10, scaling linearly with the tolerance, so the 1e-9 bound probes
// the physics only once integrator truncation sits well beneath it.
constexpr double kNormConserveTol = 1e-9;
constexpr double kMonotoneSlack = 1e-10;
constexpr double kRefRelTol = 1e-12;
constexpr double kRefAbsTol = 1e-14;
// criterion 6: vacuum Rabi inversion
constexpr double kRabiTol = 1e-8;
// criterion 7: spectrum peak and trapezoid order
constexpr double kPeakOverMedian = 10.0;
constexpr double kMinOrder = 1.9;

struct FamilyRun {
    double gamma = 0.0;
    double delta = 0.0;
    double oracle_err = 0.0;
    ObservableSeries raw;
    ObservableSeries renorm;
};

// the (gamma, delta) grid pinned by criterion 1: omega = omega0 = 2000,
// alpha = 5, n_max = 75, tau in [0, 100]
std::vector<FamilyRun> run_family(double rel_tol, double abs_tol, double* seconds) {
    const double gammas[] = {0.0, 0.01, 0.05};
    const double deltas[] = {0.0, 10.0, 20.0};
    std::vector<FamilyRun> out;
    const auto t0 = std::chrono::steady_clock::now();
    for (double gamma : gammas) {
        for (double delta : deltas) {
            ModelParams m;
            m.gamma = gamma;  // omega = omega0 = 2000, alpha = 5, n_max = 75 defaults
            IntegratorConfig icfg;
            icfg.rel_tol = rel_tol;
            icfg.abs_tol = abs_tol;  // t_max = 100, n_samples = 2001 defaults
            const DetuningProfile profile =
                delta == 0.0 ? DetuningProfile::zero() : DetuningProfile::constant(delta);
            const CatState cat = cat_coefficients(m.alpha, m.n_max);
            const auto states = evolve_state(m, profile, icfg, cat, 1);

            FamilyRun run;
            run.gamma = gamma;
            run.delta = delta;
            for (const auto& st : states) {
                for (int n = 0; n + 1 < static_cast<int>(st.ce.size()); ++n) {
                    const double f_n = cat.coeffs[static_cast<std::size_t>(n)];
                    if (f_n == 0.0) continue;
                    const auto [ce, cg] = analytic_block(n, m, delta, st.t, f_n);
                    run.oracle_err = std::max(
                        run.oracle_err, std::abs(st.ce[static_cast<std::size_t>(n)] - ce));
                    run.oracle_err = std::max(
                        run.oracle_err, std::abs(st.cg[static_cast<std::size_t>(n)] - cg));
                }
            }
            run.raw = series(states, false);
            run.renorm = series(states, true);
            out.push_back(std::move(run));
        }
    }
    *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::string num(double v, const char* fmt = "%.3g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

// integral_0^T e^{i a tau} d tau and the transform of sin(w0 tau), the
// closed-form reference for criterion 7
std::complex<double> phase_integral(double a, double T) {
    if (a == 0.0) return {T, 0.0};
    const std::complex<double> ia(0.0, a);
    return (std::exp(ia * T) - 1.0) / ia;
}

std::complex<double> sine_transform(double w0, double w, double T) {
    return (phase_integral(w + w0, T) - phase_integral(w - w0, T)) /
           std::complex<double>(0.0, 2.0);
}

ObservableSeries sine_series(double T, std::size_t n) {
    ObservableSeries s;
    s.tau.resize(n);
    s.entropy.resize(n);
    const double h = T / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        s.tau[k] = h * static_cast<double>(k);
        s.entropy[k] = std::sin(0.5 * s.tau[k]);
    }
    s.tau.back() = T;
    s.entropy.back() = std::sin(0.5 * T);
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

int main() {
    int failures = 0;
    const auto report = [&failures](int number, bool pass, const std::string& detail) {
        std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", number, detail.c_str());
        if (!pass) ++failures;
    };

    try {
        // criteria 1, 4, 5 share the pinned (gamma, delta) run family;
        // criterion 1 is scored at the module-default tolerances users get,
        // 4 and 5 at the reference tolerances declared above.
        double default_secs = 0.0, ref_secs = 0.0;
        const auto family_default = run_family(1e-10, 1e-12, &default_secs);
        const auto family_ref = run_family(kRefRelTol, kRefAbsTol, &ref_secs);

        // 1. numeric vs analytic over the 3x3 grid
        double worst_oracle = 0.0;
        for (const auto& run : family_default)
            worst_oracle = std::max(worst_oracle, run.oracle_err);
        report(1, worst_oracle <= kOracleTol && default_secs <= kRuntimeBudgetSeconds,
               "numeric integrator matches the analytic constant-detuning solution on the "
               "(gamma, delta) grid {0, 0.01, 0.05} x {0, 10, 20}, alpha = 5, n_max = 75, "
               "tau in [0, 100]: max amplitude error " +
                   num(worst_oracle) + " <= " + num(kOracleTol) + ", nine runs in " +
                   num(default_secs, "%.1f") + " s (budget " +
                   num(kRuntimeBudgetSeconds, "%.0f") + " s, single-threaded)");

        // 2. entropy ceiling of preset fig2a over tau in [0, 50]
        {
            const auto resolved = resolve(parse_config("preset = fig2a\n"));
            const CatState cat = cat_coefficients(resolved.model.alpha, resolved.model.n_max);
            const auto states =
                evolve_state(resolved.model, resolved.profile, resolved.integrator, cat, 1);
            const auto obs = series(states, resolved.renormalize_entropy);
            double max_s = 0.0;
            for (std::size_t k = 0; k < obs.tau.size(); ++k)
                if (obs.tau[k] <= 50.0) max_s = std::max(max_s, obs.entropy[k]);
            const double lo = kCeilingFraction * std::log(2.0);
            const double hi = std::log(2.0) + kCeilingSlack;
            report(2, max_s >= lo && max_s <= hi,
                   "preset fig2a max entropy over tau in [0, 50] is " + num(max_s, "%.9f") +
                       ", inside [" + num(lo, "%.9f") + ", " + num(hi, "%.9f") + "]");
        }

        // 3. initial purity of every preset. S(0) and I(0) depend only on the
        // initial state and the tau = 0 sample is the initial condition
        // bit-for-bit, so a short window suffices.
        {
            double worst_s0 = 0.0, worst_i0 = 0.0;
            for (const Preset& p : preset_table()) {
                const auto resolved =
                    resolve(parse_config("preset = " + p.name + "\nt_max = 2\nn_samples = 41\n"));
                const CatState cat =
                    cat_coefficients(resolved.model.alpha, resolved.model.n_max);
                const auto states = evolve_state(resolved.model, resolved.profile,
                                                 resolved.integrator, cat, 1);
                const auto obs = series(states, resolved.renormalize_entropy);
                worst_s0 = std::max(worst_s0, obs.entropy.front());
                worst_i0 = std::max(worst_i0, std::abs(obs.inversion.front() - 1.0));
            }
            report(3, worst_s0 <= kPurityTol && worst_i0 <= kPurityTol,
                   "all " + std::to_string(preset_table().size()) +
                       " presets start pure: worst S(0) " + num(worst_s0) + " and worst "
                       "|I(0) - 1| " + num(worst_i0) + ", both <= " + num(kPurityTol));
        }

        // 4. norm conservation without decay, monotone norm under decay
        {
            double worst_drift = 0.0, worst_step_up = 0.0;
            for (const auto& run : family_ref) {
                if (run.gamma == 0.0) {
                    for (double n2 : run.raw.norm2)
                        worst_drift = std::max(worst_drift, std::abs(n2 - 1.0));
                } else {
                    for (std::size_t k = 1; k < run.raw.norm2.size(); ++k)
                        worst_step_up = std::max(worst_step_up,
                                                 run.raw.norm2[k] - run.raw.norm2[k - 1]);
                }
            }
            // the default-tolerance family must also decay monotonically
            for (const auto& run : family_default)
                if (run.gamma > 0.0)
                    for (std::size_t k = 1; k < run.raw.norm2.size(); ++k)
                        worst_step_up = std::max(worst_step_up,
                                                 run.raw.norm2[k] - run.raw.norm2[k - 1]);
            report(4,
                   worst_drift <= kNormConserveTol && worst_step_up <= kMonotoneSlack,
                   "gamma = 0 runs conserve N^2 over tau in [0, 100]: max |N^2 - 1| " +
                       num(worst_drift) + " <= " + num(kNormConserveTol) + " (rel_tol " +
                       num(kRefRelTol) + "); damped runs nonincreasing, worst step rise " +
                       num(worst_step_up) + " <= " + num(kMonotoneSlack));
        }

        // 5. damping ordering of the time-averaged entropy at resonance.
        // Scored on the renormalized (conditional-state) entropy: the raw
        // formula drives both eigenvalue complements toward 1/2 as the norm
        // decays, which raises the average with gamma instead.
        {
            double means[3] = {0.0, 0.0, 0.0};
            for (const auto& run : family_ref) {
                if (run.delta != 0.0) continue;
                const int slot = run.gamma == 0.0 ? 0 : (run.gamma == 0.01 ? 1 : 2);
                means[slot] = mean(run.renorm.entropy);
            }
            report(5, means[0] > means[1] && means[1] > means[2],
                   "renormalized mean entropy at resonance decreases with damping: " +
                       num(means[0], "%.8f") + " (gamma 0) > " + num(means[1], "%.8f") +
                       " (0.01) > " + num(means[2], "%.8f") + " (0.05)");
        }

        // 6. vacuum Rabi limit: alpha = 0, gamma = 0, resonance
        {
            ModelParams m;
            m.alpha = 0.0;
            m.n_max = default_n_max(0.0);
            IntegratorConfig icfg;
            icfg.t_max = 20.0;
            const CatState cat = cat_coefficients(m.alpha, m.n_max);
            const auto states = evolve_state(m, DetuningProfile::zero(), icfg, cat, 1);
            const auto obs = series(states);
            double worst = 0.0;
            for (std::size_t k = 0; k < obs.tau.size(); ++k)
                worst = std::max(worst,
                                 std::abs(obs.inversion[k] - std::cos(2.0 * obs.tau[k])));
            report(6, worst <= kRabiTol,
                   "alpha = 0 inversion follows cos(2 lambda0 t) over tau in [0, 20]: max "
                   "error " + num(worst) + " <= " + num(kRabiTol));
        }

        // 7. spectrum plumbing on the synthetic sinusoid
        {
            const auto s = sine_series(400.0, 8001);
            SpectrumConfig grid_cfg;  // default grid [0, 2] step 5e-4
            const auto grid = grid_cfg.grid();
            const auto ps = power_spectrum(s, grid);

            std::size_t argmax = 0, nearest = 0;
            for (std::size_t i = 1; i < grid.size(); ++i) {
                if (ps.ps_normalized[i] > ps.ps_normalized[argmax]) argmax = i;
                if (std::abs(grid[i] - 0.5) < std::abs(grid[nearest] - 0.5)) nearest = i;
            }
            std::vector<double> sorted = ps.ps_normalized;
            std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
            const double median = sorted[sorted.size() / 2];
            const bool peak_ok =
                argmax == nearest && ps.ps_normalized[argmax] >= kPeakOverMedian * median;

            const double pi = std::acos(-1.0);
            const std::complex<double> exact = sine_transform(0.5, 0.3, 400.0) / pi;
            double errs[2];
            const std::size_t ns[2] = {2001, 4001};
            for (int i = 0; i < 2; ++i)
                errs[i] = std::abs(power_spectrum(sine_series(400.0, ns[i]), {0.3})
                                       .ps_complex[0] -
                                   exact);
            const double order = std::log2(errs[0] / errs[1]);
            report(7, peak_ok && order >= kMinOrder,
                   "sin(0.5 tau) spectrum peaks at the grid point nearest 0.5 (peak/median " +
                       num(ps.ps_normalized[argmax] / median, "%.1f") + " >= " +
                       num(kPeakOverMedian, "%.0f") + "); trapezoid refinement order " +
                       num(order, "%.2f") + " >= " + num(kMinOrder, "%.1f"));
        }

        // 8. byte determinism of preset fig3a across reruns and thread counts
        {
            const fs::path base = fs::temp_directory_path() /
                                  ("cpbnr_acceptance_" + std::to_string(::getpid()));
            const auto resolved = resolve(parse_config("preset = fig3a\n"));
            const auto a = run_to_files(resolved, base / "a", 1);
            const auto b = run_to_files(resolved, base / "b", 1);
            const auto c = run_to_files(resolved, base / "c", 4);
            const std::string bytes = slurp(a.outputs.observables_csv);
            const bool same_csv = !bytes.empty() &&
                                  bytes == slurp(b.outputs.observables_csv) &&
                                  bytes == slurp(c.outputs.observables_csv);
            const bool same_manifest = slurp(a.outputs.manifest) == slurp(b.outputs.manifest) &&
                                       slurp(a.outputs.manifest) == slurp(c.outputs.manifest);
            std::error_code ec;
            fs::remove_all(base, ec);
            char hex[17];
            std::snprintf(hex, sizeof hex, "%016llx",
                          static_cast<unsigned long long>(fnv1a64(bytes)));
            report(8, same_csv && same_manifest,
                   "preset fig3a run twice and at threads {1, 4} produced byte-identical "
                   "outputs (observables fnv1a64 " + std::string(hex) + ")");
        }
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 1;
    }

    std::printf("%s: %d/8 criteria passed\n", failures == 0 ? "OK" : "FAILED", 8 - failures);
    return failures == 0 ? 0 : 1;
}
