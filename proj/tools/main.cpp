// cpbnr — damped Jaynes-Cummings simulator for a Cooper pair box coupled to
// a nanomechanical resonator. Subcommands: run, sweep, presets, validate.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpbnr/config.hpp"
#include "cpbnr/errors.hpp"
#include "cpbnr/runner.hpp"
#include "cpbnr/version.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// precedence: file keys, then the preset, then --set overrides in order
cpbnr::RunConfig assemble(const std::string& config_path, const std::string& preset,
                          const std::vector<std::string>& sets) {
    cpbnr::RunConfig cfg;
    if (!config_path.empty()) cfg = cpbnr::parse_config(read_file(config_path));
    if (!preset.empty()) cpbnr::apply_preset(cfg, preset);
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw cpbnr::config_error("--set expects key=value, got '" + kv + "'");
        cpbnr::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> out;
    if (trim(csv).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = csv.find(',', pos);
        out.push_back(trim(csv.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void print_warnings(const cpbnr::ResolvedRun& run) {
    for (const std::string& w : run.warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped Jaynes-Cummings dynamics of a charge qubit coupled to a "
                 "nanomechanical mode: entropy, inversion, and entropy power spectra"};
    app.set_version_flag("--version", cpbnr::version_string);
    app.require_subcommand(1);

    std::string config_path, preset_name, axis, values_csv;
    std::string out_dir = ".";
    int threads = 1;
    std::vector<std::string> sets;

    const auto add_common = [&](CLI::App* sub, bool needs_output) {
        sub->add_option("--config", config_path, "config file of key = value lines")
            ->check(CLI::ExistingFile);
        sub->add_option("--preset", preset_name,
                        "figure preset; overrides conflicting config keys");
        sub->add_option("--set", sets, "single key=value override, repeatable, later wins")
            ->type_size(1);
        if (needs_output) {
            sub->add_option("--out", out_dir, "output directory")->capture_default_str();
            sub->add_option("--threads", threads,
                            "worker threads for Fock blocks and spectrum frequencies")
                ->check(CLI::Range(1, 256))
                ->capture_default_str();
        }
    };

    CLI::App* cmd_run =
        app.add_subcommand("run", "simulate one configuration, write CSVs and a manifest");
    add_common(cmd_run, true);

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "one independent run per value of a config key");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--axis", axis, "config key to sweep")->required();
    cmd_sweep->add_option("--values", values_csv, "comma-separated axis values")->required();

    CLI::App* cmd_presets =
        app.add_subcommand("presets", "list the embedded figure presets");

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "parse and resolve a configuration, print it, run nothing");
    add_common(cmd_validate, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_presets->parsed()) {
            for (const cpbnr::Preset& p : cpbnr::preset_table())
                std::printf("%-6s  %s\n", p.name.c_str(), p.description.c_str());
            return 0;
        }

        const cpbnr::RunConfig cfg = assemble(config_path, preset_name, sets);

        if (cmd_validate->parsed()) {
            const auto resolved = cpbnr::resolve(cfg);
            print_warnings(resolved);
            std::cout << cpbnr::render_config(resolved);
            return 0;
        }

        if (cmd_run->parsed()) {
            const auto resolved = cpbnr::resolve(cfg);
            print_warnings(resolved);
            const auto result = cpbnr::run_to_files(resolved, out_dir, threads);
            std::cout << "wrote " << result.outputs.observables_csv.string() << '\n';
            if (!result.outputs.spectrum_csv.empty())
                std::cout << "wrote " << result.outputs.spectrum_csv.string() << '\n';
            std::cout << "wrote " << result.outputs.manifest.string() << '\n';
            return 0;
        }

        const auto values = split_values(values_csv);
        const auto result = cpbnr::sweep_to_files(cfg, axis, values, out_dir, threads);
        for (const cpbnr::SweepPoint& pt : result.points) {
            if (pt.ok)
                std::cout << pt.directory << ": ok (" << axis << " = " << pt.value << ")\n";
            else
                std::cerr << pt.directory << ": failed (" << axis << " = " << pt.value
                          << "): " << pt.error << '\n';
        }
        std::cout << "wrote " << result.manifest.string() << '\n';
        return result.all_ok() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
