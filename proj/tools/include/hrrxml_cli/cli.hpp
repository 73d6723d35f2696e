#pragma once

// Experiment runner: capacity sweeps, query-response statistics, training,
// evaluation, parameter reports and synthetic data generation.

#include <iosfwd>
#include <span>
#include <string>

namespace hrrxml::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // unexpected internal error
  kExitUsage = 2,    // bad flags, config, input files or shapes
  kExitDivergence = 3,
};

// Runs one command line (without the program name). Results go to `out`
// unless an --out path is given; diagnostics go to `err`.
[[nodiscard]] int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hrrxml::cli
