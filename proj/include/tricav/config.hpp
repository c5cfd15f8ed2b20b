#ifndef TRICAV_CONFIG_HPP
#define TRICAV_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tricav/experiments.hpp"
#include "tricav/model.hpp"

namespace tricav {

/// Every problem found while reading or validating a configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class Subcommand { Count, Evolve, SweepModes, FidelityMap };

struct ConfigKey {
    std::string name;
    std::string units;
    std::string default_value;  ///< empty when the key is required
    std::string description;
};

/// Schema of the flat key=value configuration format.
const std::vector<ConfigKey>& config_keys();

using ConfigValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment. Unknown and duplicate
/// keys are collected into a ConfigError together with syntax problems.
ConfigValues parse_config_text(const std::string& text, const std::string& origin = "config");
ConfigValues read_config_file(const std::filesystem::path& path);

struct RunConfig {
    Subcommand subcommand = Subcommand::Evolve;
    SystemParams params;
    TimeSeriesOptions series;
    std::vector<int> sweep_modes;
    std::vector<Scenario> scenarios;
    double coop_min = 0.005;
    double coop_max = 120.0;
    std::size_t coop_count = 60;
    std::size_t time_samples = 400;
    std::filesystem::path output_path;
    unsigned threads = 1;
    bool dry_run = false;  ///< validate only

    // count subcommand
    int count_atoms = 3;
    int count_excitations = 3;
    int count_modes = 1;
};

/// Builds and validates a run configuration from merged key values. All
/// problems are reported together in one ConfigError.
RunConfig build_run_config(Subcommand subcommand, const ConfigValues& values);

/// "1-9", "1,3,5-7" and similar.
std::vector<int> parse_int_list(const std::string& text);

/// Applies the TRICAV_OUTPUT_DIR override to relative output paths.
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

}  // namespace tricav

#endif  // TRICAV_CONFIG_HPP
