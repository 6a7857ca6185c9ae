#include "cpbnr/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "cpbnr/errors.hpp"

namespace cpbnr {

namespace {

std::string trim(std::string_view sv) {
    const char* ws = " \t\r";
    const auto b = sv.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = sv.find_last_not_of(ws);
    return std::string(sv.substr(b, e - b + 1));
}

// alias -> canonical; canonical keys map to themselves
constexpr std::pair<const char*, const char*> kKeyTable[] = {
    {"model.omega", "model.omega"},
    {"omega", "model.omega"},
    {"model.omega0", "model.omega0"},
    {"omega0", "model.omega0"},
    {"model.gamma", "model.gamma"},
    {"gamma", "model.gamma"},
    {"model.alpha", "model.alpha"},
    {"alpha", "model.alpha"},
    {"model.n_max", "model.n_max"},
    {"n_max", "model.n_max"},
    {"profile.kind", "profile.kind"},
    {"profile", "profile.kind"},
    {"profile.delta", "profile.delta"},
    {"delta", "profile.delta"},
    {"profile.c", "profile.c"},
    {"c", "profile.c"},
    {"profile.omega_prime", "profile.omega_prime"},
    {"omega_prime", "profile.omega_prime"},
    {"integrator.rel_tol", "integrator.rel_tol"},
    {"rel_tol", "integrator.rel_tol"},
    {"integrator.abs_tol", "integrator.abs_tol"},
    {"abs_tol", "integrator.abs_tol"},
    {"integrator.t_max", "integrator.t_max"},
    {"t_max", "integrator.t_max"},
    {"integrator.n_samples", "integrator.n_samples"},
    {"n_samples", "integrator.n_samples"},
    {"integrator.frame", "integrator.frame"},
    {"frame", "integrator.frame"},
    {"spectrum.enabled", "spectrum.enabled"},
    {"spectrum.omega_min", "spectrum.omega_min"},
    {"spectrum.omega_max", "spectrum.omega_max"},
    {"spectrum.omega_step", "spectrum.omega_step"},
    {"spectrum.subtract_mean", "spectrum.subtract_mean"},
    {"observables.renormalize_entropy", "observables.renormalize_entropy"},
    {"output.stem", "output.stem"},
    {"stem", "output.stem"},
    {"preset", "preset"},
};

std::string canonical_key(const std::string& key) {
    for (const auto& [alias, canon] : kKeyTable)
        if (key == alias) return canon;
    throw config_error("unknown config key '" + key +
                       "'; the key list (dotted paths and their bare aliases) is in "
                       "README.md, e.g. model.gamma, profile.delta, spectrum.enabled");
}

double parse_double(const std::string& key, const std::string& raw) {
    double v = 0.0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || !std::isfinite(v))
        throw config_error("key '" + key + "' expects a finite number, got '" + raw + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& raw) {
    int v = 0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw config_error("key '" + key + "' expects an integer, got '" + raw + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    if (raw == "true") return true;
    if (raw == "false") return false;
    throw config_error("key '" + key + "' expects true or false, got '" + raw + "'");
}

void set_field(RunConfig& cfg, const std::string& key, const std::string& raw) {
    if (key == "model.omega") {
        cfg.omega = parse_double(key, raw);
    } else if (key == "model.omega0") {
        cfg.omega0 = parse_double(key, raw);
    } else if (key == "model.gamma") {
        cfg.gamma = parse_double(key, raw);
    } else if (key == "model.alpha") {
        cfg.alpha = parse_double(key, raw);
    } else if (key == "model.n_max") {
        cfg.n_max = (raw == "auto") ? -1 : parse_int(key, raw);
    } else if (key == "profile.kind") {
        if (raw != "zero" && raw != "constant" && raw != "sinusoidal")
            throw config_error("profile.kind must be zero, constant, or sinusoidal, got '" +
                               raw + "'");
        cfg.profile_kind = raw;
    } else if (key == "profile.delta") {
        cfg.delta = parse_double(key, raw);
    } else if (key == "profile.c") {
        cfg.c = parse_double(key, raw);
    } else if (key == "profile.omega_prime") {
        cfg.omega_prime = parse_double(key, raw);
    } else if (key == "integrator.rel_tol") {
        cfg.rel_tol = parse_double(key, raw);
    } else if (key == "integrator.abs_tol") {
        cfg.abs_tol = parse_double(key, raw);
    } else if (key == "integrator.t_max") {
        cfg.t_max = parse_double(key, raw);
    } else if (key == "integrator.n_samples") {
        cfg.n_samples = parse_int(key, raw);
    } else if (key == "integrator.frame") {
        if (raw != "rotating" && raw != "lab")
            throw config_error("integrator.frame must be rotating or lab, got '" + raw + "'");
        cfg.frame = raw;
    } else if (key == "spectrum.enabled") {
        cfg.spectrum.enabled = parse_bool(key, raw);
    } else if (key == "spectrum.omega_min") {
        cfg.spectrum.omega_min = parse_double(key, raw);
    } else if (key == "spectrum.omega_max") {
        cfg.spectrum.omega_max = parse_double(key, raw);
    } else if (key == "spectrum.omega_step") {
        cfg.spectrum.omega_step = parse_double(key, raw);
    } else if (key == "spectrum.subtract_mean") {
        cfg.spectrum.subtract_mean = parse_bool(key, raw);
    } else if (key == "observables.renormalize_entropy") {
        cfg.renormalize_entropy = parse_bool(key, raw);
    } else if (key == "output.stem") {
        cfg.stem = raw;
    } else {
        throw config_error("unhandled config key '" + key + "'");
    }
}

void mark_assigned(RunConfig& cfg, const std::string& key) {
    if (std::find(cfg.assigned.begin(), cfg.assigned.end(), key) == cfg.assigned.end())
        cfg.assigned.push_back(key);
}

Preset make_preset(std::string name, std::string description, const char* gamma,
                   const char* kind, const char* delta, const char* c,
                   const char* omega_prime, bool with_spectrum) {
    Preset p;
    p.name = std::move(name);
    p.description = std::move(description);
    p.assignments = {
        {"model.alpha", "5"},     {"model.omega", "2000"},     {"model.omega0", "2000"},
        {"model.gamma", gamma},   {"profile.kind", kind},      {"profile.delta", delta},
        {"profile.c", c},         {"profile.omega_prime", omega_prime},
    };
    if (with_spectrum) p.assignments.emplace_back("spectrum.enabled", "true");
    return p;
}

} // namespace

std::string canonicalize_key(const std::string& key) { return canonical_key(trim(key)); }

const std::vector<Preset>& preset_table() {
    static const std::vector<Preset> table = {
        make_preset("fig2a", "resonant cat-state entropy, no decay", "0", "zero", "0", "0",
                    "0", false),
        make_preset("fig2b", "resonant cat-state entropy, gamma = 0.01", "0.01", "zero", "0",
                    "0", "0", false),
        make_preset("fig2c", "resonant cat-state entropy, gamma = 0.05", "0.05", "zero", "0",
                    "0", "0", false),
        make_preset("fig3a", "entropy under constant detuning 10, gamma = 0.05", "0.05",
                    "constant", "10", "0", "0", false),
        make_preset("fig3b", "entropy under constant detuning 20, gamma = 0.05", "0.05",
                    "constant", "20", "0", "0", false),
        make_preset("fig4a", "entropy under sinusoidal detuning c = 20, omega' = 0.1", "0.05",
                    "sinusoidal", "0", "20", "0.1", false),
        make_preset("fig4b", "entropy under sinusoidal detuning c = 20, omega' = 0.5", "0.05",
                    "sinusoidal", "0", "20", "0.5", false),
        make_preset("fig5a", "entropy power spectrum of the fig2a run", "0", "zero", "0", "0",
                    "0", true),
        make_preset("fig5b", "entropy power spectrum of the fig2b run", "0.01", "zero", "0",
                    "0", "0", true),
        make_preset("fig5c", "entropy power spectrum of the fig2c run", "0.05", "zero", "0",
                    "0", "0", true),
        make_preset("fig6a", "entropy power spectrum of the fig3a run", "0.05", "constant",
                    "10", "0", "0", true),
        make_preset("fig6b", "entropy power spectrum of the fig3b run", "0.05", "constant",
                    "20", "0", "0", true),
        make_preset("fig7a", "entropy power spectrum of the fig4a run", "0.05", "sinusoidal",
                    "0", "20", "0.1", true),
        make_preset("fig7b", "entropy power spectrum of the fig4b run", "0.05", "sinusoidal",
                    "0", "20", "0.5", true),
        make_preset("fig8a", "inversion under constant detuning 10, gamma = 0.05", "0.05",
                    "constant", "10", "0", "0", false),
        make_preset("fig8b", "inversion under constant detuning 20, gamma = 0.05", "0.05",
                    "constant", "20", "0", "0", false),
        make_preset("fig9a", "inversion under sinusoidal detuning c = 20, omega' = 0.5",
                    "0.05", "sinusoidal", "0", "20", "0.5", false),
        make_preset("fig9b", "inversion under sinusoidal detuning c = 60, omega' = 20",
                    "0.05", "sinusoidal", "0", "60", "20", false),
    };
    return table;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    const std::string v = trim(value);
    if (k.empty()) throw config_error("empty config key");
    const std::string canon = canonical_key(k);
    if (canon == "preset") {
        apply_preset(cfg, v);
        return;
    }
    set_field(cfg, canon, v);
    mark_assigned(cfg, canon);
}

void apply_preset(RunConfig& cfg, const std::string& name) {
    const Preset* found = nullptr;
    for (const Preset& p : preset_table())
        if (p.name == name) {
            found = &p;
            break;
        }
    if (!found)
        throw config_error("unknown preset '" + name +
                           "'; the presets subcommand lists the available names");
    for (const auto& [key, value] : found->assignments) {
        if (std::find(cfg.assigned.begin(), cfg.assigned.end(), key) != cfg.assigned.end())
            cfg.preset_overrides.push_back("preset " + found->name + " overrode " + key);
        set_field(cfg, key, value);
        mark_assigned(cfg, key);
    }
    cfg.preset = found->name;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> seen;
    std::string pending_preset;
    bool have_preset = false;

    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                    : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line_no) +
                               ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("line " + std::to_string(line_no) + ": missing key before '='");

        const std::string canon = canonical_key(key);
        if (std::find(seen.begin(), seen.end(), canon) != seen.end())
            throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + key +
                               "' (resolves to " + canon + ")");
        seen.push_back(canon);

        if (canon == "preset") {
            // applied after the plain keys so the override audit does not
            // depend on where the preset line sits in the file
            pending_preset = value;
            have_preset = true;
            continue;
        }
        set_field(cfg, canon, value);
        mark_assigned(cfg, canon);
    }
    if (have_preset) apply_preset(cfg, trim(pending_preset));
    return cfg;
}

void SpectrumConfig::validate() const {
    if (!(std::isfinite(omega_step) && omega_step > 0.0))
        throw config_error("spectrum.omega_step must be > 0");
    if (!(std::isfinite(omega_min) && std::isfinite(omega_max) && omega_max >= omega_min))
        throw config_error("spectrum.omega_max must be >= spectrum.omega_min");
}

std::vector<double> SpectrumConfig::grid() const {
    validate();
    const auto count =
        static_cast<std::size_t>((omega_max - omega_min) / omega_step + 1.0 + 1e-9);
    std::vector<double> g(count);
    for (std::size_t k = 0; k < count; ++k)
        g[k] = omega_min + omega_step * static_cast<double>(k);
    return g;
}

ResolvedRun resolve(const RunConfig& cfg) {
    ResolvedRun out;
    out.model.omega = cfg.omega;
    out.model.omega0 = cfg.omega0;
    out.model.gamma = cfg.gamma;
    out.model.alpha = cfg.alpha;
    const bool alpha_ok = std::isfinite(cfg.alpha) && cfg.alpha >= 0.0;
    // the automatic truncation needs a valid alpha; otherwise let validate()
    // report the alpha problem instead of crashing inside default_n_max
    out.model.n_max = (cfg.n_max < 0 && alpha_ok) ? default_n_max(cfg.alpha)
                                                  : std::max(cfg.n_max, 0);

    if (cfg.profile_kind == "zero")
        out.profile = DetuningProfile::zero();
    else if (cfg.profile_kind == "constant")
        out.profile = DetuningProfile::constant(cfg.delta);
    else
        out.profile = DetuningProfile::sinusoidal(cfg.c, cfg.omega_prime);

    out.model.validate();
    out.profile.validate();

    out.integrator.rel_tol = cfg.rel_tol;
    out.integrator.abs_tol = cfg.abs_tol;
    out.integrator.t_max = cfg.t_max;
    out.integrator.n_samples = cfg.n_samples;
    out.integrator.frame = (cfg.frame == "lab") ? Frame::Lab : Frame::Rotating;
    out.integrator.validate();

    cfg.spectrum.validate();
    out.spectrum = cfg.spectrum;
    out.renormalize_entropy = cfg.renormalize_entropy;

    if (cfg.stem.empty() ||
        cfg.stem.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                   "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
            std::string::npos)
        throw config_error("output.stem must be a plain file-name stem "
                           "(letters, digits, '.', '_', '-'), got '" +
                           cfg.stem + "'");
    out.stem = cfg.stem;
    out.preset = cfg.preset;
    out.preset_overrides = cfg.preset_overrides;

    // soft validity notices: the co-modulated coupling model assumes the
    // detuning stays small against the mode frequency
    const double wmin = std::min(out.model.omega, out.model.omega0);
    const auto warn_large = [&](const char* what, double value) {
        if (std::abs(value) > 0.1 * wmin)
            out.warnings.push_back(std::string(what) + " = " + format_double(value) +
                                   " is not small against the mode frequency " +
                                   format_double(wmin) +
                                   "; the modulated-coupling model assumes |f(t)| << omega");
    };
    if (out.profile.kind == DetuningProfile::Kind::Constant)
        warn_large("profile.delta", out.profile.delta);
    if (out.profile.kind == DetuningProfile::Kind::Sinusoidal) {
        warn_large("profile.c", out.profile.c);
        warn_large("profile.omega_prime", out.profile.omega_prime);
    }
    return out;
}

std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string render_config(const ResolvedRun& run) {
    const char* kind = "zero";
    if (run.profile.kind == DetuningProfile::Kind::Constant) kind = "constant";
    if (run.profile.kind == DetuningProfile::Kind::Sinusoidal) kind = "sinusoidal";
    const auto b = [](bool v) { return v ? "true" : "false"; };

    std::string out;
    const auto put = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("model.omega", format_double(run.model.omega));
    put("model.omega0", format_double(run.model.omega0));
    put("model.gamma", format_double(run.model.gamma));
    put("model.alpha", format_double(run.model.alpha));
    put("model.n_max", std::to_string(run.model.n_max));
    put("profile.kind", kind);
    put("profile.delta", format_double(run.profile.delta));
    put("profile.c", format_double(run.profile.c));
    put("profile.omega_prime", format_double(run.profile.omega_prime));
    put("integrator.rel_tol", format_double(run.integrator.rel_tol));
    put("integrator.abs_tol", format_double(run.integrator.abs_tol));
    put("integrator.t_max", format_double(run.integrator.t_max));
    put("integrator.n_samples", std::to_string(run.integrator.n_samples));
    put("integrator.frame", run.integrator.frame == Frame::Lab ? "lab" : "rotating");
    put("spectrum.enabled", b(run.spectrum.enabled));
    put("spectrum.omega_min", format_double(run.spectrum.omega_min));
    put("spectrum.omega_max", format_double(run.spectrum.omega_max));
    put("spectrum.omega_step", format_double(run.spectrum.omega_step));
    put("spectrum.subtract_mean", b(run.spectrum.subtract_mean));
    put("observables.renormalize_entropy", b(run.renormalize_entropy));
    put("output.stem", run.stem);
    return out;
}

} // namespace cpbnr
