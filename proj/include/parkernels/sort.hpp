#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "parkernels/core.hpp"
#include "parkernels/cost_model.hpp"
#include "parkernels/rng.hpp"

namespace parkernels {

struct PartitionResult {
  std::size_t s = 0;  // final pivot position
};

struct ParallelSortConfig {
  std::size_t workers = 1;
  /// Ranges of at most this many elements are sorted serially.
  std::size_t seq_cutoff = 2048;
  /// Maximum fork depth below the master's first partition.
  std::size_t depth_cap = 2;

  /// Throws InvalidWorkerCount / InvalidInput on a violated invariant.
  void validate() const;
};

inline constexpr std::size_t kDefaultSeqCutoff = 2048;

/// ceil(log2(P)) + 2.
std::size_t default_depth_cap(std::size_t workers) noexcept;
ParallelSortConfig default_sort_config(std::size_t workers);

/// Index in [q, r] of the pivot chosen by `strategy`. Mean picks the element
/// closest to the arithmetic mean of a[q..r] (ties: smallest index); Random
/// draws uniformly from rng.
std::size_t select_pivot(std::span<const std::int64_t> a, std::size_t q, std::size_t r,
                         PivotStrategy strategy, Xoshiro256ss& rng);

/// Lomuto-style partition around x = a[q]:
///
///   s := q
///   for i := q+1 .. r: if a[i] <= x then s := s+1; swap(a[s], a[i])
///   swap(a[q], a[s])
///
/// Afterwards a[q..s-1] <= a[s] < a[s+1..r].
PartitionResult partition(std::span<std::int64_t> a, std::size_t q, std::size_t r);

/// In-place quicksort. Recursion skips the pivot slot, i.e. it descends into
/// [q, s-1] and [s+1, r], so every call shrinks the range and all-equal input
/// terminates.
void quicksort_serial(std::span<std::int64_t> a, PivotStrategy strategy, Xoshiro256ss& rng);

/// Fork-join quicksort. The master selects and places the first pivot, then
/// both sides are sorted as forked tasks that keep splitting until depth_cap
/// or seq_cutoff, where they fall back to quicksort_serial. A forked task over
/// [begin, end] seeds its generator with splitmix64(parent_seed ^ begin).
/// With workers == 1 this is exactly quicksort_serial with Xoshiro256ss(seed).
void quicksort_parallel(std::span<std::int64_t> a, PivotStrategy strategy,
                        const ParallelSortConfig& cfg, std::uint64_t seed);

/// Dispatches on the cost model. The serial branch uses Xoshiro256ss(seed)
/// and the parallel branch default_sort_config(params.workers).
ExecutionMode sort_adaptive(std::span<std::int64_t> a, PivotStrategy strategy,
                            const OverheadParams& params, std::uint64_t seed);

}  // namespace parkernels
