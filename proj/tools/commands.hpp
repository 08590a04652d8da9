#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gl2sup::cli {

enum class Command { VerifyLocal, VerifyCosets, VerifyArch, Support, Scan, Compare };

struct RunConfig {
  Command command = Command::Scan;
  std::vector<std::string> spec_paths;
  std::string output_path;  // empty: stdout
  std::optional<double> tolerance;
  std::optional<double> jmax;  // kappa argument cutoff
  std::optional<std::uint64_t> smax;
  unsigned parallel = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> p;
  std::optional<int> n;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

// Parses argv; on a usage error prints to err and returns nullopt with
// exit_code set (0 for --help).
std::optional<RunConfig> parse_arguments(int argc, const char* const* argv, std::ostream& err, int& exit_code);

// Writes the CSV to config.output_path (or out) and diagnostics to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Fixed 12 significant digits, "inf"/"nan" spelled out.
std::string format_number(double x);

}  // namespace gl2sup::cli
