#ifndef TRICAV_CLI_HPP
#define TRICAV_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>

#include "tricav/config.hpp"

namespace tricav::cli {

/// Process exit statuses.
enum ExitStatus : int {
    kSuccess = 0,
    kUsageError = 1,      ///< unknown flag, bad flag value
    kConfigError = 2,     ///< missing/unknown/invalid configuration key
    kIoError = 3,         ///< unreadable config or unwritable output
    kNumericalError = 4,  ///< non-finite amplitudes, eigen-solver failure
    kInternalError = 5,
};

/// Bad command-line syntax: unknown flag, missing subcommand, bad value.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the subcommand and flags, reads the config file, applies flag
/// overrides (flags win) and validates everything. Returns nullopt when help
/// was requested and printed to `out`. Throws UsageError or ConfigError.
std::optional<RunConfig> parse_and_validate(int argc, const char* const* argv, std::ostream& out);

/// Full entry point: parse, run, and map every failure to an ExitStatus.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes a validated configuration and prints a one-line summary.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace tricav::cli

#endif  // TRICAV_CLI_HPP
