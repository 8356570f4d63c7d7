#pragma once

#include <iosfwd>
#include <string>

#include "cli_config.hpp"

namespace carleman::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

const char* tool_version();

/// Subcommands. Each writes its table or report to `out` and returns an exit
/// code; configuration problems are thrown as ConfigError.
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_stratton_chu(const ExperimentConfig& cfg, std::ostream& out);
int cmd_reconstruct(const ExperimentConfig& cfg, std::ostream& out);
int cmd_expand_cache(const ExperimentConfig& cfg, std::ostream& out);

/// Dispatches by subcommand name, writes the output to cfg.output_path (or
/// `out` for "-") and maps exceptions to exit codes, reporting on `err`.
int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace carleman::cli
