#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "skewbench/core.hpp"

namespace skewbench {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Class characteristics block printed before/after resampling: samples,
/// features, majority/minority labels and counts, imbalance ratio at one
/// decimal.
std::string characteristics(const Dataset& ds);

/// "majority / minority, IR x.y".
std::string count_line(const Dataset& ds);

/// Path of the ground-truth sidecar written next to a dataset CSV:
/// data.csv -> data.truth.csv.
std::string truth_path_for(const std::string& dataset_path);

/// Parses `args` (args[0] is the program name) and runs the subcommand.
/// Normal output goes to `out`, diagnostics and progress to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewbench
