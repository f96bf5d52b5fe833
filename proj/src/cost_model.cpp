#include "parkernels/cost_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "parkernels/sort.hpp"

namespace parkernels {

bool OverheadParams::calibrated() const noexcept {
  for (auto w : {Workload::Matmul, Workload::Sort}) {
    auto it = serial_rate.find(w);
    if (it == serial_rate.end() || !(it->second > 0.0)) return false;
  }
  return true;
}

void OverheadParams::validate() const {
  if (workers == 0) throw Error(ErrorKind::InvalidInput, "overhead params: workers must be >= 1");
  if (!(c_dispatch_ns_per_elem >= 0.0) || !std::isfinite(c_dispatch_ns_per_elem)) {
    throw Error(ErrorKind::InvalidInput, "overhead params: dispatch cost must be finite and >= 0");
  }
  for (const auto& [w, rate] : serial_rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      throw Error(ErrorKind::InvalidInput, "overhead params: serial_rate for " +
                                               std::string(to_string(w)) + " must be positive");
    }
  }
}

double work_units(Workload workload, std::size_t n) noexcept {
  if (n <= 1) return 1.0;
  const double x = static_cast<double>(n);
  if (workload == Workload::Matmul) return x * x * x;
  return x * std::log2(x);
}

std::uint64_t parallel_tasks(Workload workload, std::size_t n, std::size_t workers) noexcept {
  if (workload == Workload::Matmul) return workers;
  // Halvings needed before a balanced split reaches the sequential cutoff.
  std::size_t levels = 0;
  if (n > kDefaultSeqCutoff) {
    const std::size_t chunks = (n + kDefaultSeqCutoff - 1) / kDefaultSeqCutoff;
    levels = static_cast<std::size_t>(std::bit_width(chunks - 1));
  }
  const std::size_t depth = std::min(levels, default_depth_cap(workers));
  return (std::uint64_t{1} << (depth + 1)) - 1;
}

double predict_time(Workload workload, std::size_t n, ExecutionMode mode,
                    const OverheadParams& params) {
  auto it = params.serial_rate.find(workload);
  if (it == params.serial_rate.end() || !(it->second > 0.0)) {
    throw Error(ErrorKind::NotCalibrated,
                "no serial rate calibrated for " + std::string(to_string(workload)));
  }
  const double serial = it->second * work_units(workload, n);
  if (mode.is_serial()) return serial;
  const double p = static_cast<double>(mode.workers());
  return serial / p +
         static_cast<double>(params.c_fork_ns) *
             static_cast<double>(parallel_tasks(workload, n, mode.workers())) +
         static_cast<double>(params.c_sync_ns) +
         params.c_dispatch_ns_per_elem * static_cast<double>(n);
}

ExecutionMode choose_mode(Workload workload, std::size_t n, const OverheadParams& params) {
  const double serial = predict_time(workload, n, ExecutionMode::serial(), params);
  if (params.workers <= 1) return ExecutionMode::serial();
  const auto par = ExecutionMode::parallel(params.workers);
  return serial <= predict_time(workload, n, par, params) ? ExecutionMode::serial() : par;
}

}  // namespace parkernels
