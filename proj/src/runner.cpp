#include "cpbnr/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cpbnr/dynamics.hpp"
#include "cpbnr/errors.hpp"
#include "cpbnr/model.hpp"
#include "cpbnr/version.hpp"

namespace cpbnr {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string render_observables_csv(const ObservableSeries& series) {
    std::string out = "tau,entropy,inversion,norm2\n";
    for (std::size_t k = 0; k < series.tau.size(); ++k) {
        out += format_double(series.tau[k]);
        out += ',';
        out += format_double(series.entropy[k]);
        out += ',';
        out += format_double(series.inversion[k]);
        out += ',';
        out += format_double(series.norm2[k]);
        out += '\n';
    }
    return out;
}

std::string render_spectrum_csv(const SpectrumResult& ps) {
    std::string out = "omega,ps_re,ps_im,ps_abs,ps_norm\n";
    for (std::size_t k = 0; k < ps.omega_grid.size(); ++k) {
        out += format_double(ps.omega_grid[k]);
        out += ',';
        out += format_double(ps.ps_complex[k].real());
        out += ',';
        out += format_double(ps.ps_complex[k].imag());
        out += ',';
        out += format_double(ps.ps_abs[k]);
        out += ',';
        out += format_double(ps.ps_normalized[k]);
        out += '\n';
    }
    return out;
}

void check_series(const ObservableSeries& series, double gamma) {
    const double ln2 = std::log(2.0);
    const auto fail = [](const std::string& what, std::size_t k, double v) {
        throw consistency_error(what + " at sample " + std::to_string(k) + " (value " +
                                format_double(v) + ")");
    };
    for (std::size_t k = 0; k < series.tau.size(); ++k) {
        const double s = series.entropy[k];
        const double i = series.inversion[k];
        const double n2 = series.norm2[k];
        if (!(s >= 0.0 && s <= ln2 + 1e-12)) fail("entropy outside [0, ln 2]", k, s);
        if (!(i >= -1.0 - 1e-9 && i <= 1.0 + 1e-9)) fail("inversion outside [-1, 1]", k, i);
        if (!(n2 > 0.0 && n2 <= 1.0 + 1e-9)) fail("squared norm outside (0, 1]", k, n2);
        if (gamma == 0.0 && std::abs(n2 - 1.0) > 3e-8)
            fail("squared norm drifted from 1 in a decay-free run", k, n2);
        if (gamma > 0.0 && k > 0 && n2 > series.norm2[k - 1] + 1e-10)
            fail("squared norm increased under decay", k, n2);
    }
}

RunResult run_to_files(const ResolvedRun& run, const std::filesystem::path& out_dir,
                       int threads) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());

    const CatState cat = cat_coefficients(run.model.alpha, run.model.n_max);
    const auto states = evolve_state(run.model, run.profile, run.integrator, cat, threads);

    RunResult result;
    result.series = series(states, run.renormalize_entropy);
    check_series(result.series, run.model.gamma);

    const std::string obs_csv = render_observables_csv(result.series);
    result.outputs.observables_csv = out_dir / (run.stem + ".observables.csv");
    write_file(result.outputs.observables_csv, obs_csv);

    std::string spec_csv;
    if (run.spectrum.enabled) {
        SpectrumOptions opt;
        opt.subtract_mean = run.spectrum.subtract_mean;
        opt.threads = threads;
        const SpectrumResult ps = power_spectrum(result.series, run.spectrum.grid(), opt);
        spec_csv = render_spectrum_csv(ps);
        result.outputs.spectrum_csv = out_dir / (run.stem + ".spectrum.csv");
        write_file(result.outputs.spectrum_csv, spec_csv);
    }

    // The manifest doubles as a config: comments carry provenance and
    // checksums, the key lines reproduce this run when reparsed.
    std::string manifest = std::string("# ") + version_string + " run manifest\n";
    if (!run.preset.empty()) {
        manifest += "# preset: " + run.preset;
        for (const Preset& p : preset_table())
            if (p.name == run.preset) manifest += " (" + p.description + ")";
        manifest += '\n';
    }
    for (const std::string& note : run.preset_overrides)
        manifest += "# note: " + one_line(note) + '\n';
    for (const std::string& warning : run.warnings)
        manifest += "# warning: " + one_line(warning) + '\n';
    manifest += render_config(run);
    manifest += "# output: " + run.stem + ".observables.csv fnv1a64=" + hex64(fnv1a64(obs_csv)) +
                '\n';
    if (run.spectrum.enabled)
        manifest += "# output: " + run.stem + ".spectrum.csv fnv1a64=" +
                    hex64(fnv1a64(spec_csv)) + '\n';

    result.outputs.manifest = out_dir / (run.stem + ".manifest.txt");
    write_file(result.outputs.manifest, manifest);
    return result;
}

bool SweepResult::all_ok() const {
    return std::all_of(points.begin(), points.end(),
                       [](const SweepPoint& p) { return p.ok; });
}

SweepResult sweep_to_files(const RunConfig& base, const std::string& axis,
                           const std::vector<std::string>& values,
                           const std::filesystem::path& out_dir, int threads) {
    const std::string canon = canonicalize_key(axis);
    if (canon == "preset")
        throw config_error("sweep axis must be a plain config key; to sweep presets, run "
                           "them individually");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());

    SweepResult result;
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepPoint pt;
        pt.value = values[i];
        char name[32];
        std::snprintf(name, sizeof name, "point_%03zu", i);
        pt.directory = name;
        try {
            RunConfig cfg = base;
            apply_key(cfg, canon, values[i]);
            run_to_files(resolve(cfg), out_dir / pt.directory, threads);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = one_line(e.what());
        }
        result.points.push_back(std::move(pt));
    }

    std::size_t failures = 0;
    for (const SweepPoint& p : result.points)
        if (!p.ok) ++failures;

    std::string manifest = std::string("# ") + version_string + " sweep manifest\n";
    manifest += "# axis: " + canon + '\n';
    manifest += "# points: " + std::to_string(result.points.size()) +
                ", failures: " + std::to_string(failures) + '\n';
    for (const SweepPoint& p : result.points) {
        manifest += "# " + p.directory + ": value = " + p.value + ", status = ";
        manifest += p.ok ? "ok" : ("failed (" + p.error + ")");
        manifest += '\n';
    }
    result.manifest = out_dir / "sweep.manifest.txt";
    write_file(result.manifest, manifest);
    return result;
}

} // namespace cpbnr
