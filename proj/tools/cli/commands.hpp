#pragma once

#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace mptp::cli {

// CSV payload plus human-readable notes (written to stderr by the driver).
struct CommandOutput {
  std::string csv;
  std::vector<std::string> notes;
};

// Floating-point values in every CSV use 12 significant digits.
std::string format_number(double v);

CommandOutput cmd_regions(const RunConfig& cfg);
CommandOutput cmd_sweep(const RunConfig& cfg);
CommandOutput cmd_montecarlo(const RunConfig& cfg);
CommandOutput cmd_fusion(const RunConfig& cfg);
CommandOutput cmd_np_threshold(const RunConfig& cfg);
CommandOutput cmd_decide(const RunConfig& cfg, const std::vector<double>& energies);

// Maps an exception escaping a command to the process exit code:
// 2 configuration, 3 degenerate threshold, 4 resource cap, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace mptp::cli
