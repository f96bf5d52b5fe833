#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "parkernels/core.hpp"
#include "parkernels/cost_model.hpp"

namespace parkernels {

/// Half-open block of output rows owned by one worker.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const RowRange&, const RowRange&) = default;
};

/// Balanced contiguous split of [0, rows) into min(P, rows) non-empty
/// blocks; the first rows % P blocks get the extra row.
std::vector<RowRange> partition_rows(std::size_t rows, std::size_t workers);

/// Naive product. Every c[i][j] is accumulated in ascending k, which is what
/// makes the parallel product bit-identical for floats. Integer products wrap
/// modulo 2^64.
Matrix matmul_serial(const Matrix& a, const Matrix& b);

/// Master-worker product: the caller partitions the output rows, forks one
/// task per block (running the first itself), and joins before returning.
/// No dot product is ever split across workers.
Matrix matmul_parallel(const Matrix& a, const Matrix& b, std::size_t workers);

struct MatmulOutcome {
  Matrix product;
  ExecutionMode mode;
};

/// Chooses Serial or Parallel(params.workers) through the cost model, then
/// runs it. Square operands use their order as n; otherwise n is the
/// geometric mean of the three dimensions.
MatmulOutcome matmul_adaptive(const Matrix& a, const Matrix& b, const OverheadParams& params);

}  // namespace parkernels
