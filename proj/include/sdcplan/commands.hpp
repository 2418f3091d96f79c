#pragma once

// commands.hpp -- implementation of the CLI subcommands, separated from the
// argument parsing so tests can drive them directly.

#include <cstdint>
#include <optional>
#include <string>

#include "sdcplan/scenario.hpp"

namespace sdcplan {

struct CommandOptions {
    std::string scenario_path;
    std::string out_path;                 ///< empty = stdout
    std::optional<std::int64_t> trials;   ///< overrides scenario.simulation
    std::optional<std::uint64_t> seed;
    std::optional<SweepSpec> sweep;       ///< overrides scenario.sweep
    std::string format;                   ///< "", "csv" or "json" (tables only)
};

/// Parse a --sweep argument of the form "var=lo:hi:points[:log|:linear]".
/// lo/hi accept duration suffixes; bare numbers mean seconds (or counts for
/// variable k).  Throws ScenarioError on malformed input.
SweepSpec parse_sweep_argument(const std::string& text);

/// Run one subcommand (optimize, risk, pattern, simulate, validate) and
/// return the process exit code:
///   0 success, 2 invalid scenario/parameters, 3 model out of regime,
///   4 simulation runaway, 5 validation failure, 1 unexpected error.
/// Error text goes to stderr; results go to options.out_path or stdout.
int run_command(const std::string& command, const CommandOptions& options);

} // namespace sdcplan
