#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "parkernels/core.hpp"
#include "parkernels/cost_model.hpp"

namespace parkernels {

inline constexpr const char* kSerialLabel = "serial";
inline constexpr const char* kParallelLabel = "parallel";

/// "parallel left pivot", "parallel mean pivot", ...
std::string parallel_sort_label(PivotStrategy s);

/// Sizes of the quicksort results table the benchmark mirrors.
inline const std::vector<std::size_t> kDefaultSortSizes{1000, 1100, 1500, 2000};
inline const std::vector<std::size_t> kDefaultMatmulSizes{8, 16, 32, 64, 128, 256, 512};

struct BenchSpec {
  Workload workload = Workload::Sort;
  std::vector<std::size_t> sizes;
  std::size_t reps = 11;
  std::size_t warmup = 2;
  std::uint64_t seed = 42;
  std::vector<PivotStrategy> strategies;  // sort only
  std::optional<std::size_t> workers;     // overrides the profile's P
  std::optional<std::size_t> seq_cutoff;
  std::optional<std::size_t> depth_cap;

  void validate() const;
};

/// Seed of the single input generated for size n.
std::uint64_t input_seed(std::uint64_t bench_seed, std::size_t n) noexcept;

struct ResultRow {
  std::size_t n = 0;
  std::vector<RunStats> cells;  // one per column, same order
};

struct ResultTable {
  Workload workload = Workload::Sort;
  std::vector<std::string> columns;  // variant labels; "Elements" is implicit
  std::vector<ResultRow> rows;
  std::vector<std::string> notes;

  /// Throws InvalidInput if a row is missing a cell or rows are not
  /// strictly increasing.
  void validate() const;
};

/// Invoked once per (variant, size) with the generated input and the
/// verified output of the first timed repetition.
using BenchObserver = std::function<void(const std::string& variant, std::size_t n,
                                         std::span<const std::int64_t> input,
                                         std::span<const std::int64_t> output)>;

/// Columns: serial (Leftmost pivot) then one parallel column per requested
/// strategy in the order left, mean, right, random. Every timed run is
/// checked sorted and multiset-equal before its time is kept; a failure
/// throws Error(Correctness).
ResultTable run_sort_bench(const BenchSpec& spec, const OverheadParams& params,
                           const BenchObserver& observer = {});

/// Columns: serial, parallel. The parallel product is checked bit-identical
/// to the serial one at each size before any timing is kept.
ResultTable run_matmul_bench(const BenchSpec& spec, const OverheadParams& params);

/// Nanoseconds rendered as milliseconds with three decimals, rounded half up.
std::string format_ms(std::uint64_t ns);

void emit_csv(const ResultTable& table, std::ostream& out);
void emit_markdown(const ResultTable& table, std::ostream& out);
void emit_plotdata(const ResultTable& table, std::ostream& out);

}  // namespace parkernels
