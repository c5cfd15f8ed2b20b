#include "tricav/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ios>
#include <mutex>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tricav/experiments.hpp"
#include "tricav/hilbert.hpp"
#include "tricav/types.hpp"

namespace tricav::cli {

namespace {

std::string flag_for(const std::string& key) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    return "--" + flag;
}

std::string key_table() {
    std::ostringstream s;
    s << "Configuration keys (config file `key = value`, or the matching --flag):\n";
    for (const auto& k : config_keys()) {
        s << "  " << std::left << std::setw(22) << k.name << std::setw(19) << ("[" + k.units + "] ")
          << "default: " << std::setw(15) << (k.default_value.empty() ? "(required)" : k.default_value)
          << k.description << '\n';
    }
    s << "\nEnvironment: TRICAV_OUTPUT_DIR prefixes relative output paths.\n"
         "Exit status: 0 ok, 1 usage, 2 configuration, 3 I/O, 4 numerical, 5 internal.\n";
    return s.str();
}

struct SimulationFlags {
    std::string config_file;
    std::map<std::string, std::string> overrides;
};

CLI::App* add_simulation_command(CLI::App& app, const std::string& name, const std::string& what,
                                 SimulationFlags& flags) {
    CLI::App* sub = app.add_subcommand(name, what);
    sub->add_option("-c,--config", flags.config_file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    for (const auto& k : config_keys()) {
        sub->add_option(flag_for(k.name), flags.overrides[k.name],
                        k.description + " [" + k.units + "]");
    }
    sub->footer(key_table());
    return sub;
}

std::string seconds(std::chrono::steady_clock::duration d) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << std::chrono::duration<double>(d).count() << " s";
    return s.str();
}

}  // namespace

std::optional<RunConfig> parse_and_validate(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Three emitters in a multimode ring cavity, three-excitation sector", "tricav"};
    app.require_subcommand(1);
    app.footer(key_table());

    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads for sweeps and maps")
        ->check(CLI::PositiveNumber);
    bool dry_run = false;
    app.add_flag("--dry-run", dry_run, "validate the configuration and exit without running");

    RunConfig count_cfg;
    count_cfg.subcommand = Subcommand::Count;
    CLI::App* count = app.add_subcommand("count", "print the number of sector amplitudes");
    count->add_option("--atoms", count_cfg.count_atoms, "number of two-level atoms")->capture_default_str();
    count->add_option("--excitations", count_cfg.count_excitations, "number of excitations")
        ->capture_default_str();
    count->add_option("--modes", count_cfg.count_modes, "number of cavity modes")->required();

    SimulationFlags evolve_flags, sweep_flags, map_flags;
    CLI::App* evolve = add_simulation_command(app, "evolve", "time series CSV for one parameter set", evolve_flags);
    CLI::App* sweep = add_simulation_command(app, "sweep-modes", "max negativity vs number of modes", sweep_flags);
    CLI::App* map = add_simulation_command(app, "fidelity-map", "GHZ fidelity over time x cooperativity", map_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, out);
        return std::nullopt;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, out);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (count->parsed()) {
        count_cfg.threads = threads;
        count_cfg.dry_run = dry_run;
        return count_cfg;
    }

    Subcommand which = Subcommand::Evolve;
    SimulationFlags* flags = &evolve_flags;
    if (sweep->parsed()) {
        which = Subcommand::SweepModes;
        flags = &sweep_flags;
    } else if (map->parsed()) {
        which = Subcommand::FidelityMap;
        flags = &map_flags;
    } else if (!evolve->parsed()) {
        throw UsageError("no subcommand given");
    }

    ConfigValues values;
    if (!flags->config_file.empty()) values = read_config_file(flags->config_file);
    CLI::App* sub = which == Subcommand::Evolve ? evolve : (which == Subcommand::SweepModes ? sweep : map);
    for (const auto& [key, value] : flags->overrides)
        if (sub->count(flag_for(key)) > 0) values[key] = value;

    RunConfig cfg = build_run_config(which, values);
    cfg.threads = threads;
    cfg.dry_run = dry_run;
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.dry_run) {
        out << "configuration ok";
        if (cfg.subcommand != Subcommand::Count)
            out << ": dimension " << count_amplitudes(3, 3, cfg.params.n_modes) << ", output "
                << cfg.output_path.string();
        out << '\n';
        return kSuccess;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] { return seconds(std::chrono::steady_clock::now() - start); };

    switch (cfg.subcommand) {
        case Subcommand::Count:
            out << count_amplitudes(cfg.count_atoms, cfg.count_excitations, cfg.count_modes) << '\n';
            return kSuccess;

        case Subcommand::Evolve: {
            const auto series = run_time_series(cfg.params, cfg.series);
            write_time_series_csv(cfg.output_path, series);
            out << "evolve: dimension " << count_amplitudes(3, 3, cfg.params.n_modes) << ", runtime "
                << elapsed() << ", peak negativity " << max_negativity(series) << ", wrote "
                << cfg.output_path.string() << '\n';
            return kSuccess;
        }

        case Subcommand::SweepModes: {
            std::mutex io;
            RunnerOptions runner{cfg.threads, [&](std::size_t done, std::size_t total) {
                                     std::lock_guard lock(io);
                                     err << "sweep-modes: " << done << '/' << total << " scenario points done\n";
                                 }};
            const auto points = sweep_max_negativity(cfg.params, cfg.sweep_modes, cfg.scenarios,
                                                     cfg.series, runner);
            write_sweep_csv(cfg.output_path, points);
            double peak = 0.0;
            for (const auto& p : points) peak = std::max(peak, p.max_negativity);
            const int largest = *std::max_element(cfg.sweep_modes.begin(), cfg.sweep_modes.end());
            out << "sweep-modes: " << points.size() << " points, max dimension "
                << count_amplitudes(3, 3, largest) << ", runtime " << elapsed() << ", peak negativity "
                << peak << ", wrote " << cfg.output_path.string() << '\n';
            return kSuccess;
        }

        case Subcommand::FidelityMap: {
            const auto coops = logspace(cfg.coop_min, cfg.coop_max, cfg.coop_count);
            const auto times = linspace(0.0, cfg.series.t_max, cfg.time_samples);
            std::mutex io;
            RunnerOptions runner{cfg.threads, [&](std::size_t done, std::size_t total) {
                                     std::lock_guard lock(io);
                                     err << "fidelity-map: " << done << '/' << total << " cooperativities done\n";
                                 }};
            const auto points = fidelity_map(cfg.params, coops, times, cfg.series.dt,
                                             cfg.series.renormalize, runner);
            write_fidelity_map_csv(cfg.output_path, points);
            double peak = 0.0;
            for (const auto& p : points) peak = std::max(peak, p.fidelity);
            out << "fidelity-map: dimension " << count_amplitudes(3, 3, cfg.params.n_modes) << ", grid "
                << coops.size() << "x" << times.size() << ", cooperativity [" << coops.front() << ", "
                << coops.back() << "], runtime " << elapsed() << ", peak fidelity " << peak
                << ", wrote " << cfg.output_path.string() << '\n';
            return kSuccess;
        }
    }
    err << "unknown subcommand\n";
    return kInternalError;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = parse_and_validate(argc, argv, out);
        if (!cfg) return kSuccess;
        return run(*cfg, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kUsageError;
    } catch (const ConfigError& e) {
        for (const auto& p : e.problems()) err << "config error: " << p << '\n';
        return kConfigError;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "invalid parameters: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace tricav::cli
