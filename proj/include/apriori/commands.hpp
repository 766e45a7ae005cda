#pragma once
/// @file commands.hpp
/// @brief Batch subcommands behind the command-line front-end.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace apriori {

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
};

/// trees, exponents, sample, solve, verify, identity_suite.
const std::vector<std::string>& command_names();

/// Runs one subcommand and returns its exit code (see io::ExitCode). Errors go to `log`.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log);

}  // namespace apriori
