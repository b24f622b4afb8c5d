#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hweyl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;

inline const char* const kOutputDirEnv = "HWEYL_OUTPUT_DIR";

enum class Format { csv, json };

// Fully resolved invocation. Values not meaningful for the subcommand keep
// their defaults and are omitted from the embedded configuration.
struct RunConfig {
  std::string subcommand;
  int l = 1;
  double T = 0.0;
  std::optional<double> T_hi;
  std::optional<double> y;
  int k = 2;
  int v = 1;
  double A = 2.0;
  std::int64_t samples = 0;
  std::int64_t bins = 50;
  std::uint64_t seed = 1;
  std::int64_t limit = 100;
  double x_min = 100.0;
  double x_max = 2000.0;
  int threads = 1;
  std::string mode = "signed";      // moments
  std::string method = "kernel";    // series
  std::string endpoint;             // tau convention, per-subcommand default
  std::vector<double> T_list;       // report growth study
  Format format = Format::json;
  std::optional<std::string> output_path;
  std::optional<std::string> config_path;
};

struct ParseOutcome {
  std::optional<RunConfig> config;  // empty when the process should exit
  int exit_code = kExitOk;
};

// Parses argv (including the program name), merges an optional key=value
// config file under the explicit flags and validates every parameter.
ParseOutcome parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Validates the preconditions of the mapped operation; throws ValidationError.
void validate(const RunConfig& config);

// Runs the subcommand and writes the report to config.output_path or `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Accepts "200000", "2e5" or "2.0e5"; rejects non-integral and negative values.
std::int64_t parse_count(const std::string& text, const std::string& name);

}  // namespace hweyl::cli
