#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace parkernels {

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::size_t sort_arrays = 1000;
  std::size_t sort_max_len = 5000;
  std::vector<std::size_t> workers{2, 4, 8};
  /// Small cutoff so arrays of a few thousand keys actually fork.
  std::size_t seq_cutoff = 64;
  std::size_t matmul_pairs = 100;
  std::vector<std::size_t> matmul_sizes{16, 64, 128, 256};
};

struct VerifyReport {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Correctness suites for sort and matmul: every pivot strategy serially and
/// in parallel over random and adversarial arrays, the partition trace
/// fixtures, parallel/serial bit-identity of matmul for integer and float
/// operands, and serial matmul against a plain triple loop at 8x8.
/// Progress lines go to `log`.
VerifyReport run_verification(const VerifyOptions& options, std::ostream& log);

}  // namespace parkernels
