#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace commsum::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kViolations = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kNumerical = 3;

/// Runs one subcommand. `args` excludes the program name. Documents go to
/// `out` (or the file named by -o / --json), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace commsum::cli
