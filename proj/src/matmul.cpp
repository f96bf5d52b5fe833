#include "parkernels/matmul.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "parkernels/fork_join.hpp"

namespace parkernels {

std::vector<RowRange> partition_rows(std::size_t rows, std::size_t workers) {
  if (workers == 0) {
    throw Error(ErrorKind::InvalidWorkerCount, "partition_rows: worker count must be positive");
  }
  const std::size_t blocks = std::min(workers, rows);
  std::vector<RowRange> out;
  out.reserve(blocks);
  if (blocks == 0) return out;
  const std::size_t base = rows / blocks;
  const std::size_t extra = rows % blocks;
  std::size_t begin = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    out.push_back({begin, begin + len});
    begin += len;
  }
  return out;
}

namespace {

void check_operands(const Matrix& a, const Matrix& b) {
  if (a.kind() != b.kind()) {
    throw Error(ErrorKind::ElementKindMismatch,
                std::string("matmul: element kinds differ (") + std::string(to_string(a.kind())) +
                    " vs " + std::string(to_string(b.kind())) + ")");
  }
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::Shape, "matmul: " + std::to_string(a.rows()) + "x" +
                                      std::to_string(a.cols()) + " times " +
                                      std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

// Row-at-a-time i-k-j loop. For a fixed (i, j) the terms a[i][k]*b[k][j] are
// added to c[i][j] in ascending k, starting from zero.
template <typename T>
void multiply_rows(const Matrix& a, const Matrix& b, Matrix& c, RowRange rows) {
  const auto A = a.elems<T>();
  const auto B = b.elems<T>();
  auto C = c.elems<T>();
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  for (std::size_t i = rows.begin; i < rows.end; ++i) {
    T* crow = C.data() + i * n;
    for (std::size_t k = 0; k < inner; ++k) {
      const T aik = A[i * inner + k];
      const T* brow = B.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) {
        if constexpr (std::is_integral_v<T>) {
          // Wrapping arithmetic: identical in every variant, never UB.
          crow[j] = static_cast<T>(static_cast<std::uint64_t>(crow[j]) +
                                   static_cast<std::uint64_t>(aik) *
                                       static_cast<std::uint64_t>(brow[j]));
        } else {
          crow[j] += aik * brow[j];
        }
      }
    }
  }
}

void multiply_block(const Matrix& a, const Matrix& b, Matrix& c, RowRange rows) {
  if (a.kind() == ElementKind::Int64) {
    multiply_rows<std::int64_t>(a, b, c, rows);
  } else {
    multiply_rows<double>(a, b, c, rows);
  }
}

}  // namespace

Matrix matmul_serial(const Matrix& a, const Matrix& b) {
  check_operands(a, b);
  Matrix c = Matrix::zeros(a.rows(), b.cols(), a.kind());
  multiply_block(a, b, c, {0, a.rows()});
  return c;
}

Matrix matmul_parallel(const Matrix& a, const Matrix& b, std::size_t workers) {
  if (workers == 0) {
    throw Error(ErrorKind::InvalidWorkerCount, "matmul_parallel: worker count must be positive");
  }
  check_operands(a, b);
  Matrix c = Matrix::zeros(a.rows(), b.cols(), a.kind());
  const auto blocks = partition_rows(a.rows(), workers);
  fork_join(blocks.size(), [&](std::size_t t) { multiply_block(a, b, c, blocks[t]); });
  return c;
}

MatmulOutcome matmul_adaptive(const Matrix& a, const Matrix& b, const OverheadParams& params) {
  check_operands(a, b);
  std::size_t n = a.rows();
  if (!(a.rows() == a.cols() && b.rows() == b.cols())) {
    const double volume = static_cast<double>(a.rows()) * static_cast<double>(a.cols()) *
                          static_cast<double>(b.cols());
    n = static_cast<std::size_t>(std::llround(std::cbrt(volume)));
  }
  const ExecutionMode mode = choose_mode(Workload::Matmul, n, params);
  if (mode.is_serial()) return {matmul_serial(a, b), mode};
  return {matmul_parallel(a, b, mode.workers()), mode};
}

}  // namespace parkernels
