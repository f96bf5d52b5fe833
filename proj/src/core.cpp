#include "parkernels/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "parkernels/rng.hpp"

namespace parkernels {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidRange: return "invalid-range";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::InconsistentInput: return "inconsistent-input";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::ElementKindMismatch: return "element-kind";
    case ErrorKind::InvalidWorkerCount: return "invalid-worker-count";
    case ErrorKind::IndexRange: return "index-range";
    case ErrorKind::InvalidReps: return "invalid-reps";
    case ErrorKind::NotCalibrated: return "not-calibrated";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Correctness: return "correctness";
    case ErrorKind::Io: return "io";
    case ErrorKind::Profile: return "profile";
  }
  return "unknown";
}

std::string_view to_string(PivotStrategy s) noexcept {
  switch (s) {
    case PivotStrategy::Leftmost: return "left";
    case PivotStrategy::Rightmost: return "right";
    case PivotStrategy::Mean: return "mean";
    case PivotStrategy::Random: return "random";
  }
  return "unknown";
}

std::optional<PivotStrategy> parse_pivot_strategy(std::string_view name) noexcept {
  for (auto s : kAllPivotStrategies) {
    if (to_string(s) == name) return s;
  }
  if (name == "leftmost") return PivotStrategy::Leftmost;
  if (name == "rightmost") return PivotStrategy::Rightmost;
  return std::nullopt;
}

std::string_view to_string(Workload w) noexcept {
  return w == Workload::Matmul ? "matmul" : "sort";
}

std::optional<Workload> parse_workload(std::string_view name) noexcept {
  if (name == "matmul") return Workload::Matmul;
  if (name == "sort") return Workload::Sort;
  return std::nullopt;
}

ExecutionMode ExecutionMode::parallel(std::size_t workers) {
  if (workers == 0) {
    throw Error(ErrorKind::InvalidWorkerCount, "parallel execution needs at least one worker");
  }
  return ExecutionMode(workers);
}

std::string to_string(ExecutionMode mode) {
  if (mode.is_serial()) return "serial";
  return "parallel(" + std::to_string(mode.workers()) + ")";
}

std::string_view to_string(ElementKind k) noexcept {
  return k == ElementKind::Int64 ? "int64" : "float64";
}

namespace {

void check_shape(std::size_t rows, std::size_t cols, std::size_t len) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::Shape, "matrix dimensions must be positive");
  }
  if (len != rows * cols) {
    throw Error(ErrorKind::Shape, "matrix element count " + std::to_string(len) +
                                      " does not match " + std::to_string(rows) + "x" +
                                      std::to_string(cols));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> elems)
    : rows_(rows), cols_(cols), elems_(std::move(elems)) {
  check_shape(rows, cols, std::get<0>(elems_).size());
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> elems)
    : rows_(rows), cols_(cols), elems_(std::move(elems)) {
  check_shape(rows, cols, std::get<1>(elems_).size());
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols, ElementKind kind) {
  if (kind == ElementKind::Int64) {
    return Matrix(rows, cols, std::vector<std::int64_t>(rows * cols, 0));
  }
  return Matrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

Matrix Matrix::identity(std::size_t n, ElementKind kind) {
  Matrix m = zeros(n, n, kind);
  for (std::size_t i = 0; i < n; ++i) {
    if (kind == ElementKind::Int64) {
      m.elems<std::int64_t>()[i * n + i] = 1;
    } else {
      m.elems<double>()[i * n + i] = 1.0;
    }
  }
  return m;
}

bool Matrix::bit_identical(const Matrix& other) const noexcept {
  if (rows_ != other.rows_ || cols_ != other.cols_ || kind() != other.kind()) return false;
  return std::visit(
      [&](const auto& mine) {
        using Vec = std::decay_t<decltype(mine)>;
        const auto& theirs = std::get<Vec>(other.elems_);
        return std::memcmp(mine.data(), theirs.data(),
                           mine.size() * sizeof(typename Vec::value_type)) == 0;
      },
      elems_);
}

NumArray gen_random_array(std::uint64_t seed, std::size_t n, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw Error(ErrorKind::InvalidRange,
                "invalid range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  Xoshiro256ss rng(seed);
  NumArray out(n);
  for (auto& v : out) v = rng.uniform(lo, hi);
  return out;
}

Matrix gen_random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols, ElementKind kind,
                         std::int64_t lo, std::int64_t hi) {
  if (kind == ElementKind::Int64) {
    return Matrix(rows, cols, gen_random_array(seed, rows * cols, lo, hi));
  }
  Xoshiro256ss rng(seed);
  std::vector<double> elems(rows * cols);
  for (auto& v : elems) {
    v = static_cast<double>(rng.next() >> 11) * 0x1.0p-52 - 1.0;
  }
  return Matrix(rows, cols, std::move(elems));
}

bool is_sorted(std::span<const std::int64_t> a) noexcept {
  return std::is_sorted(a.begin(), a.end());
}

bool multiset_equal(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) return false;
  NumArray x(a.begin(), a.end());
  NumArray y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

RunStats aggregate(std::span<const TimingSample> samples) {
  if (samples.empty()) throw Error(ErrorKind::EmptyInput, "aggregate: no samples");
  const auto& first = samples.front();
  for (const auto& s : samples) {
    if (s.workload != first.workload || s.variant_label != first.variant_label || s.n != first.n) {
      throw Error(ErrorKind::InconsistentInput,
                  "aggregate: samples mix workloads, variants or sizes");
    }
  }

  std::vector<std::uint64_t> d;
  d.reserve(samples.size());
  for (const auto& s : samples) d.push_back(s.duration_ns);
  std::sort(d.begin(), d.end());

  RunStats stats;
  stats.n = first.n;
  stats.variant_label = first.variant_label;
  stats.rep_count = d.size();
  stats.min_ns = d.front();
  stats.median_ns = d[(d.size() - 1) / 2];

  // Sorted order makes the floating sums independent of input order.
  double sum = 0.0;
  for (auto v : d) sum += static_cast<double>(v);
  stats.mean_ns = sum / static_cast<double>(d.size());
  double sq = 0.0;
  for (auto v : d) {
    const double dev = static_cast<double>(v) - stats.mean_ns;
    sq += dev * dev;
  }
  stats.stddev_ns = std::sqrt(sq / static_cast<double>(d.size()));
  return stats;
}

}  // namespace parkernels
