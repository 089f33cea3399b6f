#pragma once

// The commands behind the mechquot executable. Each produces a report in two
// renderings (aligned text, and a JSON document) plus an exit code:
//
//   0  the queried property holds
//   1  it fails (including failed preconditions such as NOT_ADAPTED)
//   2  malformed input or a pole (also during integration)
//   3  a resource cap was hit
//   4  internal inconsistency (the two quotient routes disagree)

#include "mechquot/system_file.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mechquot {

enum ExitCode : int {
    kExitHolds = 0,
    kExitFails = 1,
    kExitInput = 2,
    kExitResource = 3,
    kExitInternal = 4,
};

struct CommandOptions {
    std::string point;
    std::string distribution;
    std::string scenario;
    /// Output path for build-quotient (system file) and the simulation
    /// commands (CSV). Empty means nothing is written.
    std::string out;
    std::uint64_t seed = 42;
    std::optional<std::size_t> max_level;
    std::optional<double> dt;
    std::optional<double> tol;
    bool machine = false;
};

struct CommandResult {
    int exit_code = 0;
    std::string text;
    /// JSON document, pretty-printed.
    std::string machine;

    const std::string &rendered(bool machine_format) const { return machine_format ? machine : text; }
};

const std::vector<std::string> &command_names();

/// Loads `path` and runs `command`. Never throws for library errors; they
/// become exit codes.
CommandResult run_command(const std::string &command, const std::string &path, const CommandOptions &options);

/// Same, on an already-parsed file; `label` is echoed as the file name.
CommandResult run_command(const std::string &command, const SystemFile &file, const std::string &label,
                          const CommandOptions &options);

} // namespace mechquot
