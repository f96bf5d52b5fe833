#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "parkernels/error.hpp"

namespace parkernels {

/// Keys to be sorted. Operations take spans over it so sub-ranges and
/// foreign buffers (numpy) can be sorted in place.
using NumArray = std::vector<std::int64_t>;

enum class PivotStrategy { Leftmost, Rightmost, Mean, Random };

inline constexpr PivotStrategy kAllPivotStrategies[] = {
    PivotStrategy::Leftmost, PivotStrategy::Mean, PivotStrategy::Rightmost,
    PivotStrategy::Random};

/// Short CLI name: left, right, mean, random.
std::string_view to_string(PivotStrategy s) noexcept;
std::optional<PivotStrategy> parse_pivot_strategy(std::string_view name) noexcept;

enum class Workload { Matmul, Sort };

std::string_view to_string(Workload w) noexcept;
std::optional<Workload> parse_workload(std::string_view name) noexcept;

class ExecutionMode {
 public:
  static constexpr ExecutionMode serial() noexcept { return ExecutionMode(0); }
  /// Throws InvalidWorkerCount for workers == 0.
  static ExecutionMode parallel(std::size_t workers);

  constexpr bool is_serial() const noexcept { return workers_ == 0; }
  constexpr bool is_parallel() const noexcept { return workers_ != 0; }
  /// 1 for Serial, P for Parallel.
  constexpr std::size_t workers() const noexcept { return workers_ == 0 ? 1 : workers_; }

  friend constexpr bool operator==(ExecutionMode, ExecutionMode) = default;

 private:
  explicit constexpr ExecutionMode(std::size_t workers) noexcept : workers_(workers) {}
  std::size_t workers_;  // 0 encodes Serial
};

std::string to_string(ExecutionMode mode);

enum class ElementKind { Int64, Float64 };

std::string_view to_string(ElementKind k) noexcept;

/// Dense row-major matrix of either 64-bit integers or doubles.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> elems);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> elems);

  static Matrix zeros(std::size_t rows, std::size_t cols, ElementKind kind);
  static Matrix identity(std::size_t n, ElementKind kind);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  ElementKind kind() const noexcept {
    return std::holds_alternative<std::vector<std::int64_t>>(elems_) ? ElementKind::Int64
                                                                   : ElementKind::Float64;
  }

  /// Typed view; throws ElementKindMismatch when T does not match kind().
  template <typename T>
  std::span<const T> elems() const {
    return std::span<const T>(storage<T>());
  }
  template <typename T>
  std::span<T> elems() {
    return std::span<T>(storage<T>());
  }

  template <typename T>
  T at(std::size_t r, std::size_t c) const {
    return elems<T>()[r * cols_ + c];
  }

  /// Bitwise equality of shape, kind and every element (NaN payloads included).
  bool bit_identical(const Matrix& other) const noexcept;

 private:
  template <typename T>
  std::vector<T>& storage() {
    auto* v = std::get_if<std::vector<T>>(&elems_);
    if (v == nullptr) throw Error(ErrorKind::ElementKindMismatch, "matrix element kind mismatch");
    return *v;
  }
  template <typename T>
  const std::vector<T>& storage() const {
    return const_cast<Matrix*>(this)->storage<T>();
  }

  std::size_t rows_;
  std::size_t cols_;
  std::variant<std::vector<std::int64_t>, std::vector<double>> elems_;
};

struct TimingSample {
  Workload workload = Workload::Sort;
  std::string variant_label;
  std::size_t n = 0;
  std::uint64_t duration_ns = 0;
  std::size_t rep_index = 0;
  std::uint64_t seed = 0;
};

struct RunStats {
  std::size_t n = 0;
  std::string variant_label;
  std::uint64_t median_ns = 0;
  double mean_ns = 0.0;
  double stddev_ns = 0.0;
  std::uint64_t min_ns = 0;
  std::size_t rep_count = 0;
};

/// Length-n array of integers uniform in [lo, hi], generated by
/// xoshiro256** seeded through splitmix64.
NumArray gen_random_array(std::uint64_t seed, std::size_t n, std::int64_t lo, std::int64_t hi);

/// Seeded square-or-rectangular matrix. Integers are uniform in [lo, hi];
/// floats are uniform in [-1, 1) with 53-bit resolution.
Matrix gen_random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols, ElementKind kind,
                         std::int64_t lo = -1000, std::int64_t hi = 1000);

bool is_sorted(std::span<const std::int64_t> a) noexcept;
bool multiset_equal(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Lower median, population mean and standard deviation, minimum.
RunStats aggregate(std::span<const TimingSample> samples);

}  // namespace parkernels
