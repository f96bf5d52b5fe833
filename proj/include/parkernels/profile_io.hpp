#pragma once

#include <filesystem>
#include <string>

#include "parkernels/cost_model.hpp"

namespace parkernels {

inline constexpr const char* kDefaultProfilePath = "parkernels-calib.json";

/// Calibration profile document:
///
///   {
///     "c_fork_ns": 41000,
///     "c_sync_ns": 3000,
///     "c_dispatch_ns_per_elem": 0.42,
///     "p": 8,
///     "calibrated_at": "2026-10-16T09:30:00Z",
///     "serial_rate": {"matmul": 0.91, "sort": 3.7},
///     "warnings": []
///   }
std::string profile_to_json(const OverheadParams& params);

/// Throws Error(Profile) on malformed JSON, missing keys, wrong types or
/// violated invariants.
OverheadParams profile_from_json(const std::string& text);

void save_profile(const OverheadParams& params, const std::filesystem::path& path);
/// Throws Error(Profile) when the file is missing or unreadable.
OverheadParams load_profile(const std::filesystem::path& path);

}  // namespace parkernels
