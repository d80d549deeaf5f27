#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace orbitlab::cli {

/// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitInput = 3;

struct RunConfig {
  std::string command;  // decompose | volume | certify | verify | report
  std::vector<std::string> builtins;
  std::vector<std::string> input_paths;
  std::string output_path;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
  bool tolerance_given = false;
  int samples = 8;
};

/// Runs one command; `args` excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

/// Executes an already-parsed configuration and writes the report.
int execute(const RunConfig& cfg, std::ostream& err);

}  // namespace orbitlab::cli
