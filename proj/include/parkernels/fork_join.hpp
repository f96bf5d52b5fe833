#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parkernels {

/// Runs body(0) .. body(tasks-1) with the calling thread acting as master:
/// tasks 1.. are forked onto fresh threads, task 0 runs inline, and every
/// thread is joined before returning. The first exception thrown by any task
/// is rethrown after the join.
template <typename Body>
void fork_join(std::size_t tasks, Body&& body) {
  if (tasks == 0) return;
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto guarded = [&](std::size_t t) {
    try {
      body(t);
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(tasks - 1);
  for (std::size_t t = 1; t < tasks; ++t) workers.emplace_back(guarded, t);
  guarded(0);
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

/// Two-way fork: `left` runs on a new thread, `right` inline, then join.
template <typename Left, typename Right>
void fork2(Left&& left, Right&& right) {
  std::exception_ptr left_failure;
  std::thread worker([&] {
    try {
      left();
    } catch (...) {
      left_failure = std::current_exception();
    }
  });
  try {
    right();
  } catch (...) {
    worker.join();
    throw;
  }
  worker.join();
  if (left_failure) std::rethrow_exception(left_failure);
}

/// Detected hardware parallelism, never less than 1.
inline std::size_t hardware_workers() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

}  // namespace parkernels
