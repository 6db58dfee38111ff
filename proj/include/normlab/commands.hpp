#pragma once

#include "normlab/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace normlab {

/// Each command writes its files into `out` (created if missing) and logs
/// one line per stage to `log`. Errors propagate as exceptions.
void run_generate(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& log);
void run_discrepancy(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& log);
void run_sumdigits(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& log);
void run_expsum(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& log);
/// Runs the acceptance suite and writes report.json. Returns true when every criterion passed.
bool run_verify(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& log,
                bool nested = false);

/// Exit status for an exception escaping a command:
/// 2 config or precondition error, 3 AmbiguousValue, 1 otherwise.
int exit_code_for(const std::exception& e);

/// Dispatches by name and maps the outcome to an exit status.
int run_command(std::string_view name, const ExperimentConfig& config, const std::filesystem::path& out,
                std::ostream& log, bool nested = false);

bool is_command(std::string_view name);

}  // namespace normlab
