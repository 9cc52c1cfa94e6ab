#ifndef GAMELAB_CLI_DRIVER_HPP
#define GAMELAB_CLI_DRIVER_HPP

#include "gamelab/run_config.hpp"

namespace gamelab {

/// Executes one command, writing its artifacts into config.out_dir.
/// Throws config_error for bad configurations, other exceptions for runtime
/// failures; returns 0 on success.
int run_command(const RunConfig& config);

/// Full CLI: flag parsing, config loading, flag-over-config overrides, and
/// exit-code mapping (0 ok, 2 config error, 3 runtime error).
int cli_main(int argc, char** argv);

} // namespace gamelab

#endif
