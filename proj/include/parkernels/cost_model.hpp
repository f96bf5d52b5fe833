#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "parkernels/core.hpp"

namespace parkernels {

/// Per-machine overhead profile feeding the serial/parallel dispatcher.
///
/// The three cost terms mirror the overheads a fork-join kernel pays:
/// creating and retiring a task, the join barrier, and moving work to the
/// cores (charged per element). serial_rate maps each workload to its
/// fitted nanoseconds per unit of work: n^3 multiply-adds for matmul and
/// n*log2(n) comparisons for sort.
struct OverheadParams {
  std::uint64_t c_fork_ns = 0;
  std::uint64_t c_sync_ns = 0;
  double c_dispatch_ns_per_elem = 0.0;
  std::size_t workers = 1;
  std::string calibrated_at;
  std::map<Workload, double> serial_rate;
  std::vector<std::string> warnings;

  /// True once every workload has a positive serial rate.
  bool calibrated() const noexcept;
  /// Throws InvalidInput if any invariant is violated.
  void validate() const;

  friend bool operator==(const OverheadParams&, const OverheadParams&) = default;
};

/// Units of work for size n: n^3 or n*log2(n), with work(0) = work(1) = 1.
double work_units(Workload workload, std::size_t n) noexcept;

/// Number of tasks the parallel variant spawns at size n with P workers.
/// Matmul forks one task per worker; sort forks a binary tree bounded by the
/// default depth cap and the sequential cutoff.
std::uint64_t parallel_tasks(Workload workload, std::size_t n, std::size_t workers) noexcept;

/// Predicted nanoseconds.
///   Serial:   rate * work(n)
///   Parallel: rate * work(n) / P + c_fork * tasks(n) + c_sync + c_dispatch * n
/// Throws NotCalibrated if the workload has no serial rate.
double predict_time(Workload workload, std::size_t n, ExecutionMode mode,
                    const OverheadParams& params);

/// Serial unless the parallel prediction with params.workers is strictly
/// smaller. P = 1 always yields Serial.
ExecutionMode choose_mode(Workload workload, std::size_t n, const OverheadParams& params);

}  // namespace parkernels
