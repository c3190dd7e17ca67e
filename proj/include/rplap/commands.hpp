#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rplap/config.hpp"

namespace rplap {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitDivergence = 3, kExitNumerical = 4 };

/// solve, branch, lambda-star, stability, estimates, exponents, torsion.
const std::vector<std::string>& command_names();

/// Runs one pipeline, writing its files into `out` (created if missing).
/// Errors are reported on `log` and mapped to exit codes: 2 configuration or
/// precondition, 3 divergence of the minimal-solution recursion, 4 other
/// numerical failures.
int run_command(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out,
                std::ostream& log);

}  // namespace rplap
