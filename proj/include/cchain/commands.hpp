#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cchain::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kNotCommuting = 2,
  kNotScaleInvariant = 3,
};

/// Runs the tool with argv-style arguments (argv[0] is the program name).
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Parses "n", "a..b" or comma-separated lists of either.
std::vector<int> parse_lengths(const std::string& spec);

}  // namespace cchain::cli
