#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "parkernels/core.hpp"

namespace parkernels::cli {

enum class Subcommand { Calibrate, BenchSort, BenchMatmul, Crossover, Verify };
enum class OutputFormat { Csv, Markdown, Plot };

enum ExitCode : int {
  kExitOk = 0,
  kExitCorrectness = 1,
  kExitUsage = 2,
  kExitCalibration = 3,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed and validated command line. Optional fields are unset when the
/// flag was not given; defaults are applied by the subcommand.
struct CliConfig {
  Subcommand subcommand = Subcommand::Verify;
  std::optional<std::vector<std::size_t>> sizes;
  std::size_t reps = 11;
  std::size_t warmup = 2;
  std::uint64_t seed = 42;
  std::optional<std::size_t> threads;
  std::vector<PivotStrategy> pivots{PivotStrategy::Leftmost, PivotStrategy::Mean,
                                    PivotStrategy::Rightmost, PivotStrategy::Random};
  std::optional<std::size_t> cutoff;
  std::optional<std::size_t> depth_cap;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> calib;
  Workload crossover_workload = Workload::Matmul;
  bool help = false;
  std::string help_text;
};

/// Parses argv (without the program name). Throws UsageError naming the
/// offending flag. When --help is given, `help` is set and nothing is
/// validated.
CliConfig parse_flags(const std::vector<std::string>& args);

/// "10,20,30" -> {10, 20, 30}; must be non-empty and strictly increasing.
std::vector<std::size_t> parse_size_list(const std::string& flag, const std::string& text);

/// Worker count precedence: --threads, then the profile's P, then
/// PARKERNELS_THREADS, then detected hardware parallelism.
std::size_t resolve_workers(std::optional<std::size_t> flag, std::optional<std::size_t> profile,
                            const char* env_value, std::size_t detected);

/// Full program: parses, validates, dispatches. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parkernels::cli
