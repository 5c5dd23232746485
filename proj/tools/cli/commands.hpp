#pragma once

// Subcommands of the memforage tool. Each takes a parsed invocation and the
// output/error streams, and returns the process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "memforage/environment.hpp"

namespace memforage::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIncomplete = 2,
  kValidationFailed = 3,
};

struct Invocation {
  std::string subcommand;
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> scenario;
  std::vector<std::string> strategies;
  std::string seq_mode = "parallel-residual";
  std::optional<double> dt;
  std::optional<std::int64_t> max_steps;
  std::optional<std::int64_t> record_every;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> summary;
  std::optional<std::filesystem::path> svg;
  std::vector<std::filesystem::path> traces;  ///< plot inputs
  std::string plot_kind = "voltage";          ///< voltage | cumulative
};

/// Exactly one of --preset / --scenario; dt and max_steps overrides applied.
/// Throws std::invalid_argument or ScenarioError.
Environment resolve_environment(const Invocation& invocation);

int run_command(const Invocation& invocation, std::ostream& out, std::ostream& err);
int compare_command(const Invocation& invocation, std::ostream& out, std::ostream& err);
int validate_command(const Invocation& invocation, std::ostream& out, std::ostream& err);
int plot_command(const Invocation& invocation, std::ostream& out, std::ostream& err);
int presets_command(const Invocation& invocation, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and dispatches.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace memforage::cli
