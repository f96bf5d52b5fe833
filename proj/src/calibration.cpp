#include "parkernels/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>
#include <numeric>
#include <thread>

#include "parkernels/fork_join.hpp"
#include "parkernels/matmul.hpp"
#include "parkernels/sort.hpp"

namespace parkernels {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point t0, Clock::time_point t1) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

template <typename F>
std::uint64_t time_once(F&& f) {
  const auto t0 = Clock::now();
  f();
  return elapsed_ns(t0, Clock::now());
}

template <typename T>
T lower_median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

template <typename F>
std::uint64_t median_time(std::size_t reps, F&& f) {
  std::vector<std::uint64_t> samples;
  samples.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) samples.push_back(time_once(f));
  return lower_median(std::move(samples));
}

std::string iso8601_now_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void spawn_and_join(std::size_t tasks) {
  std::vector<std::thread> threads;
  threads.reserve(tasks);
  for (std::size_t t = 0; t < tasks; ++t) threads.emplace_back([] {});
  for (auto& th : threads) th.join();
}

double serial_rate_for(Workload workload, const std::vector<std::size_t>& probes,
                       std::size_t reps, std::uint64_t seed) {
  std::vector<double> work;
  std::vector<double> times;
  for (std::size_t n : probes) {
    std::uint64_t t = 0;
    if (workload == Workload::Matmul) {
      const Matrix a = gen_random_matrix(seed, n, n, ElementKind::Float64);
      const Matrix b = gen_random_matrix(seed + 1, n, n, ElementKind::Float64);
      t = median_time(reps, [&] { (void)matmul_serial(a, b); });
    } else {
      const NumArray input = gen_random_array(seed, n, 0, 1'000'000);
      std::vector<std::uint64_t> samples;
      for (std::size_t r = 0; r < reps; ++r) {
        NumArray copy = input;
        Xoshiro256ss rng(seed);
        samples.push_back(time_once([&] { quicksort_serial(copy, PivotStrategy::Leftmost, rng); }));
      }
      t = lower_median(std::move(samples));
    }
    work.push_back(work_units(workload, n));
    times.push_back(static_cast<double>(std::max<std::uint64_t>(t, 1)));
  }
  return fit_rate_through_origin(work, times);
}

}  // namespace

double fit_rate_through_origin(const std::vector<double>& work, const std::vector<double>& time_ns) {
  if (work.empty() || work.size() != time_ns.size()) {
    throw Error(ErrorKind::InvalidInput, "rate fit needs matching, non-empty samples");
  }
  double wt = 0.0;
  double ww = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    wt += work[i] * time_ns[i];
    ww += work[i] * work[i];
  }
  if (!(ww > 0.0)) throw Error(ErrorKind::InvalidInput, "rate fit: zero work");
  return wt / ww;
}

std::uint64_t measure_timer_resolution_ns() {
  std::uint64_t best = ~std::uint64_t{0};
  for (int trial = 0; trial < 16; ++trial) {
    const auto t0 = Clock::now();
    auto t1 = Clock::now();
    while (t1 == t0) t1 = Clock::now();
    best = std::min(best, elapsed_ns(t0, t1));
  }
  return best;
}

OverheadParams calibrate(const CalibrationOptions& options) {
  if (options.reps < 3) {
    throw Error(ErrorKind::InvalidReps,
                "calibrate: reps must be >= 3, got " + std::to_string(options.reps));
  }
  const std::size_t workers = options.workers.value_or(hardware_workers());
  if (workers == 0) throw Error(ErrorKind::InvalidWorkerCount, "calibrate: workers must be >= 1");
  const std::size_t reps = options.reps;

  OverheadParams params;
  params.workers = workers;

  const std::uint64_t resolution = measure_timer_resolution_ns();
  if (resolution > 1000) {
    params.warnings.push_back("calibration unreliable: timer resolution " +
                              std::to_string(resolution) + " ns is coarser than 1 us");
  }

  spawn_and_join(1);  // first thread creation pays one-time runtime setup
  params.c_fork_ns = median_time(reps, [] { spawn_and_join(1); });

  const std::uint64_t barrier = median_time(reps, [&] { spawn_and_join(workers); });
  const std::uint64_t forks = workers * params.c_fork_ns;
  params.c_sync_ns = barrier > forks ? barrier - forks : 0;

  // Dispatch: distribute a read-only range over the workers, net of the
  // fork/join cost just measured.
  const std::size_t elements = std::max<std::size_t>(options.dispatch_elements, 1);
  const std::vector<std::int64_t> buffer(elements, 1);
  const auto blocks = partition_rows(elements, workers);
  std::vector<std::int64_t> partial(blocks.size());
  std::vector<double> per_elem;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t t = time_once([&] {
      fork_join(blocks.size(), [&](std::size_t b) {
        partial[b] = std::accumulate(buffer.begin() + static_cast<std::ptrdiff_t>(blocks[b].begin),
                                     buffer.begin() + static_cast<std::ptrdiff_t>(blocks[b].end),
                                     std::int64_t{0});
      });
    });
    const std::uint64_t net = t > barrier ? t - barrier : 0;
    per_elem.push_back(static_cast<double>(net) / static_cast<double>(elements));
  }
  params.c_dispatch_ns_per_elem = lower_median(std::move(per_elem));
  if (std::accumulate(partial.begin(), partial.end(), std::int64_t{0}) !=
      static_cast<std::int64_t>(elements)) {
    params.warnings.push_back("dispatch probe produced an inconsistent checksum");
  }

  params.serial_rate[Workload::Matmul] =
      serial_rate_for(Workload::Matmul, options.matmul_probe_sizes, reps, options.seed);
  params.serial_rate[Workload::Sort] =
      serial_rate_for(Workload::Sort, options.sort_probe_sizes, reps, options.seed);

  params.calibrated_at = iso8601_now_utc();
  return params;
}

CrossoverReport find_crossover(Workload workload, const std::vector<std::size_t>& sizes,
                               std::size_t reps, std::size_t workers,
                               const CrossoverRunner& runner) {
  if (sizes.empty()) throw Error(ErrorKind::InvalidInput, "find_crossover: no sizes given");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw Error(ErrorKind::InvalidInput, "find_crossover: sizes must be strictly increasing");
    }
  }
  if (reps < 3) throw Error(ErrorKind::InvalidReps, "find_crossover: reps must be >= 3");

  const auto parallel = ExecutionMode::parallel(workers);
  CrossoverReport report;
  report.workload = workload;
  report.workers = workers;
  report.sizes_tested = sizes;

  auto measure = [&](std::size_t n, ExecutionMode mode, const std::string& label) {
    std::vector<TimingSample> samples;
    for (std::size_t r = 0; r < reps; ++r) {
      samples.push_back({workload, label, n, runner(n, mode), r, 0});
    }
    return aggregate(samples);
  };

  for (std::size_t n : sizes) {
    CrossoverPoint point;
    point.n = n;
    point.serial = measure(n, ExecutionMode::serial(), "serial");
    point.parallel = measure(n, parallel, "parallel");
    if (!report.crossover_n && point.parallel.median_ns < point.serial.median_ns) {
      report.crossover_n = n;
    }
    report.points.push_back(std::move(point));
  }
  return report;
}

CrossoverRunner make_kernel_runner(Workload workload, std::uint64_t seed) {
  struct Cache {
    std::size_t n = 0;
    std::optional<Matrix> a, b;
    NumArray input;
  };
  auto cache = std::make_shared<Cache>();

  if (workload == Workload::Matmul) {
    return [cache, seed](std::size_t n, ExecutionMode mode) -> std::uint64_t {
      if (!cache->a || cache->n != n) {
        cache->n = n;
        cache->a = gen_random_matrix(splitmix64(seed ^ n), n, n, ElementKind::Float64);
        cache->b = gen_random_matrix(splitmix64(seed ^ n) + 1, n, n, ElementKind::Float64);
      }
      if (mode.is_serial()) return time_once([&] { (void)matmul_serial(*cache->a, *cache->b); });
      return time_once([&] { (void)matmul_parallel(*cache->a, *cache->b, mode.workers()); });
    };
  }
  return [cache, seed](std::size_t n, ExecutionMode mode) -> std::uint64_t {
    if (cache->n != n || cache->input.size() != n) {
      cache->n = n;
      cache->input = gen_random_array(splitmix64(seed ^ n), n, 0, 1'000'000);
    }
    NumArray copy = cache->input;
    if (mode.is_serial()) {
      Xoshiro256ss rng(seed);
      return time_once([&] { quicksort_serial(copy, PivotStrategy::Leftmost, rng); });
    }
    const auto cfg = default_sort_config(mode.workers());
    return time_once([&] { quicksort_parallel(copy, PivotStrategy::Leftmost, cfg, seed); });
  };
}

}  // namespace parkernels
