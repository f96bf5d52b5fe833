#include "parkernels/verify.hpp"

#include <algorithm>
#include <numeric>

#include "parkernels/core.hpp"
#include "parkernels/matmul.hpp"
#include "parkernels/rng.hpp"
#include "parkernels/sort.hpp"

namespace parkernels {

namespace {

std::vector<std::pair<std::string, NumArray>> adversarial_arrays(std::size_t len) {
  NumArray ascending(len);
  std::iota(ascending.begin(), ascending.end(), std::int64_t{0});
  NumArray descending(ascending.rbegin(), ascending.rend());
  NumArray two_valued(len);
  for (std::size_t i = 0; i < len; ++i) two_valued[i] = (i * 7919) % 3 == 0 ? 5 : 9;
  return {
      {"empty", {}},
      {"single", {42}},
      {"sorted", ascending},
      {"reverse", descending},
      {"all-equal", NumArray(len, 7)},
      {"two-valued", two_valued},
  };
}

class Checker {
 public:
  explicit Checker(VerifyReport& report) : report_(report) {}

  void expect(bool ok, const std::string& what) {
    ++report_.checks;
    if (!ok && report_.failures.size() < 50) report_.failures.push_back(what);
  }

 private:
  VerifyReport& report_;
};

void verify_sort(const VerifyOptions& opt, Checker& check, std::ostream& log) {
  // Partition fixtures traced by hand.
  {
    NumArray a{3, 1, 4, 1, 5};
    const auto r = partition(a, 0, 4);
    check.expect(r.s == 2 && a == NumArray{1, 1, 3, 4, 5}, "partition([3,1,4,1,5]) trace");
    NumArray b{2, 2, 2};
    check.expect(partition(b, 0, 2).s == 2, "partition([2,2,2]) lands at the right end");
  }

  std::vector<std::pair<std::string, NumArray>> inputs;
  Xoshiro256ss lengths(opt.seed);
  for (std::size_t i = 0; i < opt.sort_arrays; ++i) {
    const auto len = static_cast<std::size_t>(
        lengths.uniform(0, static_cast<std::int64_t>(opt.sort_max_len)));
    inputs.emplace_back("random#" + std::to_string(i),
                        gen_random_array(splitmix64(opt.seed + i), len, 0, 1'000'000));
  }
  for (auto& adv : adversarial_arrays(std::max<std::size_t>(opt.sort_max_len, 1)))
    inputs.push_back(std::move(adv));

  for (const auto& [name, input] : inputs) {
    for (auto strategy : kAllPivotStrategies) {
      const std::string tag = name + " pivot=" + std::string(to_string(strategy));
      NumArray s = input;
      Xoshiro256ss rng(opt.seed);
      quicksort_serial(s, strategy, rng);
      check.expect(is_sorted(s) && multiset_equal(s, input), tag + " serial");
      for (std::size_t p : opt.workers) {
        ParallelSortConfig cfg = default_sort_config(p);
        cfg.seq_cutoff = opt.seq_cutoff;
        NumArray par = input;
        quicksort_parallel(par, strategy, cfg, opt.seed);
        check.expect(is_sorted(par) && multiset_equal(par, input),
                     tag + " parallel P=" + std::to_string(p));
      }
    }
  }
  log << "sort: " << inputs.size() << " inputs x 4 strategies x " << (1 + opt.workers.size())
      << " modes\n";
}

Matrix triple_loop(const Matrix& a, const Matrix& b) {
  std::vector<std::int64_t> c(a.rows() * b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k)
        c[i * b.cols() + j] += a.at<std::int64_t>(i, k) * b.at<std::int64_t>(k, j);
  return Matrix(a.rows(), b.cols(), std::move(c));
}

void verify_matmul(const VerifyOptions& opt, Checker& check, std::ostream& log) {
  for (std::size_t t = 0; t < opt.matmul_pairs; ++t) {
    const std::uint64_t seed = splitmix64(opt.seed ^ (0x8A7u + t));
    const Matrix a = gen_random_matrix(seed, 8, 8, ElementKind::Int64, -3, 3);
    const Matrix b = gen_random_matrix(seed + 1, 8, 8, ElementKind::Int64, -3, 3);
    check.expect(matmul_serial(a, b).bit_identical(triple_loop(a, b)),
                 "8x8 brute force pair " + std::to_string(t));
  }

  for (std::size_t n : opt.matmul_sizes) {
    for (auto kind : {ElementKind::Int64, ElementKind::Float64}) {
      for (std::size_t t = 0; t < opt.matmul_pairs; ++t) {
        const std::uint64_t seed = splitmix64(opt.seed ^ (n * 1000 + t));
        const Matrix a = gen_random_matrix(seed, n, n, kind);
        const Matrix b = gen_random_matrix(seed + 1, n, n, kind);
        const Matrix serial = matmul_serial(a, b);
        for (std::size_t p : opt.workers) {
          check.expect(matmul_parallel(a, b, p).bit_identical(serial),
                       "matmul n=" + std::to_string(n) + " " + std::string(to_string(kind)) +
                           " pair " + std::to_string(t) + " P=" + std::to_string(p));
        }
      }
      log << "matmul: n=" << n << ' ' << to_string(kind) << " done\n";
    }
  }
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options, std::ostream& log) {
  VerifyReport report;
  Checker check(report);
  verify_sort(options, check, log);
  verify_matmul(options, check, log);
  return report;
}

}  // namespace parkernels
