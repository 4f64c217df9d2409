#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "virial/cli/config.hpp"

namespace virial::cli {

enum ExitCode { exit_ok = 0, exit_verification = 1, exit_config = 2 };

struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<double> tol;
    std::optional<double> grid_h;
};

/// Applies command-line overrides; they win over the config file.
RunConfig apply_overrides(RunConfig c, const Overrides& o);

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_ndim(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_classical(const RunConfig& c, std::ostream& out, std::ostream& err);

/// Loads the config, dispatches on the command name and maps exceptions to
/// exit codes.
int run(const std::string& command, const std::string& config_path, const Overrides& o, std::ostream& out,
        std::ostream& err);

} // namespace virial::cli
