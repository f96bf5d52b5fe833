#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "parkernels/core.hpp"
#include "parkernels/cost_model.hpp"

namespace parkernels {

struct CalibrationOptions {
  std::size_t reps = 11;
  /// Overrides detected hardware parallelism.
  std::optional<std::size_t> workers;
  std::vector<std::size_t> matmul_probe_sizes{64, 128, 256};
  std::vector<std::size_t> sort_probe_sizes{10'000, 100'000, 1'000'000};
  /// Element count of the range distributed when measuring dispatch cost.
  std::size_t dispatch_elements = 1'000'000;
  std::uint64_t seed = 0x5eed;
};

/// Measures fork, join and dispatch costs and fits per-workload serial rates.
/// Blocking; must not overlap with other measurements in the process.
/// Throws InvalidReps for reps < 3.
OverheadParams calibrate(const CalibrationOptions& options = {});

/// Least-squares slope through the origin: argmin_r sum (t_i - r * w_i)^2.
double fit_rate_through_origin(const std::vector<double>& work, const std::vector<double>& time_ns);

/// Smallest observable steady_clock increment, in nanoseconds.
std::uint64_t measure_timer_resolution_ns();

/// One timed run of `workload` at size n in `mode`, returning nanoseconds.
using CrossoverRunner = std::function<std::uint64_t(std::size_t n, ExecutionMode mode)>;

struct CrossoverPoint {
  std::size_t n = 0;
  RunStats serial;
  RunStats parallel;
};

struct CrossoverReport {
  Workload workload = Workload::Matmul;
  std::size_t workers = 1;
  std::vector<std::size_t> sizes_tested;
  std::vector<CrossoverPoint> points;  // one per tested size, same order
  std::optional<std::size_t> crossover_n;
};

/// For each size runs serial then Parallel(workers) `reps` times each and
/// reports the smallest size whose parallel median is strictly below the
/// serial median. Throws InvalidInput for empty or non-increasing sizes and
/// InvalidReps for reps < 3.
CrossoverReport find_crossover(Workload workload, const std::vector<std::size_t>& sizes,
                               std::size_t reps, std::size_t workers,
                               const CrossoverRunner& runner);

/// Runner that times the library kernels on seeded inputs (float matrices
/// for matmul, uniform integers in [0, 10^6] with Leftmost pivots for sort).
CrossoverRunner make_kernel_runner(Workload workload, std::uint64_t seed);

}  // namespace parkernels
