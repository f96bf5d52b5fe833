#include "parkernels/sort.hpp"

#include <bit>
#include <string>
#include <utility>
#include <vector>

#include "parkernels/fork_join.hpp"

namespace parkernels {

namespace {

void check_range(std::size_t size, std::size_t q, std::size_t r, const char* who) {
  if (q > r || r >= size) {
    throw Error(ErrorKind::IndexRange, std::string(who) + ": range [" + std::to_string(q) + ", " +
                                           std::to_string(r) + "] invalid for length " +
                                           std::to_string(size));
  }
}

std::size_t closest_to_mean(std::span<const std::int64_t> a, std::size_t q, std::size_t r) {
  // |v - sum/len| is compared as |v*len - sum| in 128-bit integers, so the
  // choice is exact for every 64-bit input.
  __int128 sum = 0;
  for (std::size_t i = q; i <= r; ++i) sum += a[i];
  const __int128 len = static_cast<__int128>(r - q + 1);
  auto distance = [&](std::int64_t v) {
    const __int128 d = static_cast<__int128>(v) * len - sum;
    return d < 0 ? -d : d;
  };
  std::size_t best = q;
  __int128 best_d = distance(a[q]);
  for (std::size_t i = q + 1; i <= r; ++i) {
    const __int128 d = distance(a[i]);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

// Pivot selection, placement at q, and partition of a[q..r].
std::size_t place_pivot(std::span<std::int64_t> a, std::size_t q, std::size_t r,
                        PivotStrategy strategy, Xoshiro256ss& rng) {
  const std::size_t p = select_pivot(a, q, r, strategy, rng);
  std::swap(a[q], a[p]);
  return partition(a, q, r).s;
}

}  // namespace

void ParallelSortConfig::validate() const {
  if (workers == 0) {
    throw Error(ErrorKind::InvalidWorkerCount, "sort: worker count must be positive");
  }
  if (seq_cutoff == 0) throw Error(ErrorKind::InvalidInput, "sort: seq_cutoff must be >= 1");
}

std::size_t default_depth_cap(std::size_t workers) noexcept {
  if (workers <= 1) return 2;
  return static_cast<std::size_t>(std::bit_width(workers - 1)) + 2;
}

ParallelSortConfig default_sort_config(std::size_t workers) {
  ParallelSortConfig cfg;
  cfg.workers = workers;
  cfg.seq_cutoff = kDefaultSeqCutoff;
  cfg.depth_cap = default_depth_cap(workers);
  cfg.validate();
  return cfg;
}

std::size_t select_pivot(std::span<const std::int64_t> a, std::size_t q, std::size_t r,
                         PivotStrategy strategy, Xoshiro256ss& rng) {
  check_range(a.size(), q, r, "select_pivot");
  switch (strategy) {
    case PivotStrategy::Leftmost: return q;
    case PivotStrategy::Rightmost: return r;
    case PivotStrategy::Mean: return closest_to_mean(a, q, r);
    case PivotStrategy::Random:
      return q + static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(r - q)));
  }
  return q;
}

PartitionResult partition(std::span<std::int64_t> a, std::size_t q, std::size_t r) {
  check_range(a.size(), q, r, "partition");
  const std::int64_t x = a[q];
  std::size_t s = q;
  for (std::size_t i = q + 1; i <= r; ++i) {
    if (a[i] <= x) {
      ++s;
      std::swap(a[s], a[i]);
    }
  }
  std::swap(a[q], a[s]);
  return {s};
}

void quicksort_serial(std::span<std::int64_t> a, PivotStrategy strategy, Xoshiro256ss& rng) {
  // Explicit stack of half-open ranges. The right half is pushed first so the
  // left half is finished before the right one starts, exactly like the
  // recursive formulation, without its O(n) call depth on sorted input.
  std::vector<std::pair<std::size_t, std::size_t>> pending;
  if (a.size() >= 2) pending.emplace_back(0, a.size());
  while (!pending.empty()) {
    const auto [begin, end] = pending.back();
    pending.pop_back();
    const std::size_t s = place_pivot(a, begin, end - 1, strategy, rng);
    if (end - (s + 1) >= 2) pending.emplace_back(s + 1, end);
    if (s - begin >= 2) pending.emplace_back(begin, s);
  }
}

namespace {

struct ParallelSortTask {
  std::span<std::int64_t> a;
  PivotStrategy strategy;
  const ParallelSortConfig& cfg;

  void run(std::size_t begin, std::size_t end, std::uint64_t seed, std::size_t depth) const {
    const std::size_t len = end - begin;
    if (len < 2) return;
    Xoshiro256ss rng(seed);
    if (len <= cfg.seq_cutoff || depth >= cfg.depth_cap) {
      quicksort_serial(a.subspan(begin, len), strategy, rng);
      return;
    }
    const std::size_t s = place_pivot(a, begin, end - 1, strategy, rng);
    const std::uint64_t left_seed = splitmix64(seed ^ begin);
    const std::uint64_t right_seed = splitmix64(seed ^ (s + 1));
    fork2([&] { run(begin, s, left_seed, depth + 1); },
          [&] { run(s + 1, end, right_seed, depth + 1); });
  }
};

}  // namespace

void quicksort_parallel(std::span<std::int64_t> a, PivotStrategy strategy,
                        const ParallelSortConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (cfg.workers == 1) {
    Xoshiro256ss rng(seed);
    quicksort_serial(a, strategy, rng);
    return;
  }
  ParallelSortTask{a, strategy, cfg}.run(0, a.size(), seed, 0);
}

ExecutionMode sort_adaptive(std::span<std::int64_t> a, PivotStrategy strategy,
                            const OverheadParams& params, std::uint64_t seed) {
  const ExecutionMode mode = choose_mode(Workload::Sort, a.size(), params);
  if (mode.is_serial()) {
    Xoshiro256ss rng(seed);
    quicksort_serial(a, strategy, rng);
  } else {
    quicksort_parallel(a, strategy, default_sort_config(mode.workers()), seed);
  }
  return mode;
}

}  // namespace parkernels
