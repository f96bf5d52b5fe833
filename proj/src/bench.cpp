#include "parkernels/bench.hpp"

#include <chrono>

#include "parkernels/matmul.hpp"
#include "parkernels/rng.hpp"
#include "parkernels/sort.hpp"

namespace parkernels {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t since(Clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

std::size_t bench_workers(const BenchSpec& spec, const OverheadParams& params) {
  const std::size_t p = spec.workers.value_or(params.workers);
  if (p == 0) throw Error(ErrorKind::InvalidWorkerCount, "bench: worker count must be >= 1");
  return p;
}

struct SortVariant {
  std::string label;
  bool parallel = false;
  PivotStrategy strategy = PivotStrategy::Leftmost;
};

}  // namespace

std::string parallel_sort_label(PivotStrategy s) {
  return "parallel " + std::string(to_string(s)) + " pivot";
}

void BenchSpec::validate() const {
  if (reps < 1) throw Error(ErrorKind::InvalidReps, "bench: reps must be >= 1");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw Error(ErrorKind::InvalidInput, "bench: sizes must be strictly increasing");
    }
  }
  if (workload == Workload::Sort && strategies.empty()) {
    throw Error(ErrorKind::InvalidInput, "bench: sort needs at least one pivot strategy");
  }
  if (workers && *workers == 0) {
    throw Error(ErrorKind::InvalidWorkerCount, "bench: worker count must be >= 1");
  }
  if (seq_cutoff && *seq_cutoff == 0) {
    throw Error(ErrorKind::InvalidInput, "bench: cutoff must be >= 1");
  }
}

std::uint64_t input_seed(std::uint64_t bench_seed, std::size_t n) noexcept {
  return splitmix64(bench_seed ^ static_cast<std::uint64_t>(n));
}

void ResultTable::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].cells.size() != columns.size()) {
      throw Error(ErrorKind::InvalidInput,
                  "result table: row for n=" + std::to_string(rows[i].n) + " has " +
                      std::to_string(rows[i].cells.size()) + " cells, expected " +
                      std::to_string(columns.size()));
    }
    if (i > 0 && rows[i].n <= rows[i - 1].n) {
      throw Error(ErrorKind::InvalidInput, "result table: sizes must be strictly increasing");
    }
  }
}

ResultTable run_sort_bench(const BenchSpec& spec, const OverheadParams& params,
                           const BenchObserver& observer) {
  if (spec.workload != Workload::Sort) {
    throw Error(ErrorKind::InvalidInput, "run_sort_bench: spec workload is not sort");
  }
  spec.validate();
  const std::size_t workers = bench_workers(spec, params);
  ParallelSortConfig cfg = default_sort_config(workers);
  if (spec.seq_cutoff) cfg.seq_cutoff = *spec.seq_cutoff;
  if (spec.depth_cap) cfg.depth_cap = *spec.depth_cap;

  std::vector<SortVariant> variants{{kSerialLabel, false, PivotStrategy::Leftmost}};
  for (auto s : kAllPivotStrategies) {
    for (auto requested : spec.strategies) {
      if (requested == s) {
        variants.push_back({parallel_sort_label(s), true, s});
        break;
      }
    }
  }

  ResultTable table;
  table.workload = Workload::Sort;
  for (const auto& v : variants) table.columns.push_back(v.label);
  if (workers == 1) {
    table.notes.push_back("P=1: parallel variants do the same work as serial; differences are noise");
  }

  for (std::size_t n : spec.sizes) {
    const std::uint64_t seed = input_seed(spec.seed, n);
    const NumArray input = gen_random_array(seed, n, 0, 1'000'000);
    ResultRow row{n, {}};

    for (const auto& v : variants) {
      auto run_once = [&](NumArray& data) {
        const auto t0 = Clock::now();
        if (v.parallel) {
          quicksort_parallel(data, v.strategy, cfg, seed);
        } else {
          Xoshiro256ss rng(seed);
          quicksort_serial(data, v.strategy, rng);
        }
        return since(t0);
      };

      for (std::size_t w = 0; w < spec.warmup; ++w) {
        NumArray data = input;
        (void)run_once(data);
      }

      std::vector<TimingSample> samples;
      samples.reserve(spec.reps);
      for (std::size_t r = 0; r < spec.reps; ++r) {
        NumArray data = input;
        const std::uint64_t ns = run_once(data);
        if (!is_sorted(data) || !multiset_equal(data, input)) {
          throw Error(ErrorKind::Correctness, "sort verification failed: variant '" + v.label +
                                                  "', n=" + std::to_string(n) +
                                                  ", seed=" + std::to_string(seed));
        }
        if (r == 0 && observer) observer(v.label, n, input, data);
        samples.push_back({Workload::Sort, v.label, n, ns, r, seed});
      }
      row.cells.push_back(aggregate(samples));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_matmul_bench(const BenchSpec& spec, const OverheadParams& params) {
  if (spec.workload != Workload::Matmul) {
    throw Error(ErrorKind::InvalidInput, "run_matmul_bench: spec workload is not matmul");
  }
  spec.validate();
  const std::size_t workers = bench_workers(spec, params);

  ResultTable table;
  table.workload = Workload::Matmul;
  table.columns = {kSerialLabel, kParallelLabel};
  if (workers == 1) {
    table.notes.push_back("P=1: serial and parallel medians differ only by noise");
  }

  for (std::size_t n : spec.sizes) {
    if (n == 0) throw Error(ErrorKind::InvalidInput, "run_matmul_bench: matrix order must be >= 1");
    const std::uint64_t seed = input_seed(spec.seed, n);
    const Matrix a = gen_random_matrix(seed, n, n, ElementKind::Float64);
    const Matrix b = gen_random_matrix(splitmix64(seed), n, n, ElementKind::Float64);

    if (!matmul_parallel(a, b, workers).bit_identical(matmul_serial(a, b))) {
      throw Error(ErrorKind::Correctness, "matmul verification failed: n=" + std::to_string(n) +
                                              ", P=" + std::to_string(workers) +
                                              ", seed=" + std::to_string(seed));
    }

    ResultRow row{n, {}};
    for (const std::string label : {kSerialLabel, kParallelLabel}) {
      const bool parallel = label == kParallelLabel;
      auto run_once = [&] {
        const auto t0 = Clock::now();
        Matrix c = parallel ? matmul_parallel(a, b, workers) : matmul_serial(a, b);
        const std::uint64_t ns = since(t0);
        (void)c;
        return ns;
      };
      for (std::size_t w = 0; w < spec.warmup; ++w) (void)run_once();
      std::vector<TimingSample> samples;
      for (std::size_t r = 0; r < spec.reps; ++r) {
        samples.push_back({Workload::Matmul, label, n, run_once(), r, seed});
      }
      row.cells.push_back(aggregate(samples));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_ms(std::uint64_t ns) {
  const std::uint64_t us = ns / 1000 + (ns % 1000 >= 500 ? 1 : 0);
  std::string frac = std::to_string(us % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(us / 1000) + "." + frac;
}

namespace {

void check_stream(std::ostream& out, const char* what) {
  if (!out) throw Error(ErrorKind::Io, std::string("failed to write ") + what);
}

std::string underscored(std::string s) {
  for (auto& c : s) {
    if (c == ' ') c = '_';
  }
  return s;
}

}  // namespace

void emit_csv(const ResultTable& table, std::ostream& out) {
  table.validate();
  out << "Elements";
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.n;
    for (const auto& cell : row.cells) out << ',' << format_ms(cell.median_ns);
    out << '\n';
  }
  out.flush();
  check_stream(out, "CSV table");
}

void emit_markdown(const ResultTable& table, std::ostream& out) {
  table.validate();
  out << "| Elements |";
  for (const auto& c : table.columns) out << ' ' << c << " |";
  out << "\n|---:|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << "---:|";
  out << '\n';
  for (const auto& row : table.rows) {
    out << "| " << row.n << " |";
    for (const auto& cell : row.cells) out << ' ' << format_ms(cell.median_ns) << " |";
    out << '\n';
  }
  out.flush();
  check_stream(out, "markdown table");
}

void emit_plotdata(const ResultTable& table, std::ostream& out) {
  table.validate();
  out << "# Elements";
  for (const auto& c : table.columns) out << ' ' << underscored(c);
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.n;
    for (const auto& cell : row.cells) out << ' ' << format_ms(cell.median_ns);
    out << '\n';
  }
  out.flush();
  check_stream(out, "plot data");
}

}  // namespace parkernels
