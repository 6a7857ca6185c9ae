// runner.hpp — one simulation from resolved config to CSV files + manifest
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cpbnr/config.hpp"
#include "cpbnr/observables.hpp"
#include "cpbnr/spectrum.hpp"

namespace cpbnr {

struct RunOutputs {
    std::filesystem::path observables_csv;
    std::filesystem::path spectrum_csv;  // empty when the spectrum is disabled
    std::filesystem::path manifest;
};

struct RunResult {
    ObservableSeries series;
    RunOutputs outputs;
};

// FNV-1a 64-bit checksum, recorded per output file in the manifest so reruns
// can be compared without keeping the bytes around.
std::uint64_t fnv1a64(const std::string& bytes);

// CSV renderings: LF line ends, 17 significant digits, no locale.
std::string render_observables_csv(const ObservableSeries& series);
std::string render_spectrum_csv(const SpectrumResult& ps);

// Always-on sanity bounds on a finished trajectory: entropy in [0, ln 2],
// inversion in [-1, 1] and squared norm in (0, 1] up to integration slack,
// norm conserved when gamma = 0 and monotone nonincreasing when gamma > 0.
// Throws consistency_error naming the first violated bound.
void check_series(const ObservableSeries& series, double gamma);

// Simulates one resolved run and writes <stem>.observables.csv, optionally
// <stem>.spectrum.csv, and <stem>.manifest.txt into out_dir. The manifest
// reparses as a config that reproduces the run; `threads` parallelizes Fock
// blocks and spectrum frequencies without changing any output byte.
RunResult run_to_files(const ResolvedRun& run, const std::filesystem::path& out_dir,
                       int threads = 1);

struct SweepPoint {
    std::string value;      // axis value exactly as requested
    std::string directory;  // point_NNN subdirectory
    bool ok = false;
    std::string error;      // diagnostic when !ok
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::filesystem::path manifest;

    bool all_ok() const;
};

// One independent run per axis value, each in its own point_NNN subdirectory
// under out_dir, plus a shared index manifest. A failing point is recorded
// and does not stop the remaining points. The axis must name a known,
// non-preset config key.
SweepResult sweep_to_files(const RunConfig& base, const std::string& axis,
                           const std::vector<std::string>& values,
                           const std::filesystem::path& out_dir, int threads = 1);

} // namespace cpbnr
