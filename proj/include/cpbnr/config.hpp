// config.hpp — run configuration: parsing, presets, resolution, rendering.
//
// Configs are flat `key = value` documents. Keys are dotted paths
// (model.gamma, profile.delta, ...); a handful of bare aliases (gamma,
// delta, alpha, ...) cover the common ones. `#` starts a comment. The
// manifest written next to each run is itself a valid config that reproduces
// the run byte for byte.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpbnr/dynamics.hpp"
#include "cpbnr/model.hpp"

namespace cpbnr {

struct SpectrumConfig {
    bool enabled = false;
    double omega_min = 0.0;
    double omega_max = 2.0;
    double omega_step = 5e-4;
    bool subtract_mean = false;

    void validate() const;
    std::vector<double> grid() const;
};

// A parsed, not-yet-validated run description. n_max = -1 means "choose the
// smallest adequate truncation for alpha".
struct RunConfig {
    double omega = 2000.0;
    double omega0 = 2000.0;
    double gamma = 0.0;
    double alpha = 5.0;
    int n_max = -1;

    std::string profile_kind = "zero";  // zero | constant | sinusoidal
    double delta = 0.0;
    double c = 0.0;
    double omega_prime = 0.0;

    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 100.0;
    int n_samples = 2001;
    std::string frame = "rotating";  // rotating | lab

    SpectrumConfig spectrum;
    bool renormalize_entropy = false;

    std::string stem = "run";  // output file-name stem

    std::string preset;                          // resolved preset name, if any
    std::vector<std::string> preset_overrides;   // audit notes for the manifest

    // keys explicitly assigned so far (canonical form); drives the
    // preset-override audit
    std::vector<std::string> assigned;
};

// Fully validated, simulation-ready view of a RunConfig.
struct ResolvedRun {
    ModelParams model;
    DetuningProfile profile;
    IntegratorConfig integrator;
    SpectrumConfig spectrum;
    bool renormalize_entropy = false;
    std::string stem;
    std::string preset;
    std::vector<std::string> preset_overrides;
    std::vector<std::string> warnings;  // soft-condition notices, not errors
};

struct Preset {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> assignments;
};

// The embedded figure presets, in listing order.
const std::vector<Preset>& preset_table();

// Maps a key or bare alias onto its canonical dotted path; throws
// config_error for unknown keys.
std::string canonicalize_key(const std::string& key);

// Assigns one key (canonical or bare alias). Unknown keys, malformed values,
// and out-of-domain enums throw config_error naming the key and the remedy.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Applies a named preset on top of cfg, recording which explicitly assigned
// keys it overrode.
void apply_preset(RunConfig& cfg, const std::string& name);

// Parses a config document. A `preset = name` line is honored after all
// plain keys so the preset semantics do not depend on line order.
RunConfig parse_config(const std::string& text);

// Validates everything, fills the automatic n_max, and collects warnings.
ResolvedRun resolve(const RunConfig& cfg);

// Canonical key = value rendering of a resolved run; doubles carry 17
// significant digits so reparsing reproduces every bit.
std::string render_config(const ResolvedRun& run);

// 17-significant-digit decimal rendering; reparsing recovers the exact bits.
std::string format_double(double v);

} // namespace cpbnr
