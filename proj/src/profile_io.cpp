#include "parkernels/profile_io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace parkernels {

using nlohmann::json;

std::string profile_to_json(const OverheadParams& params) {
  json doc;
  doc["c_fork_ns"] = params.c_fork_ns;
  doc["c_sync_ns"] = params.c_sync_ns;
  doc["c_dispatch_ns_per_elem"] = params.c_dispatch_ns_per_elem;
  doc["p"] = params.workers;
  doc["calibrated_at"] = params.calibrated_at;
  json rates = json::object();
  for (const auto& [w, rate] : params.serial_rate) rates[std::string(to_string(w))] = rate;
  doc["serial_rate"] = rates;
  doc["warnings"] = params.warnings;
  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::Profile, "calibration profile: " + what);
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) bad(std::string("missing key '") + key + "'");
  return *it;
}

std::uint64_t require_uint(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_unsigned()) bad(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

OverheadParams profile_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");

  OverheadParams params;
  params.c_fork_ns = require_uint(doc, "c_fork_ns");
  params.c_sync_ns = require_uint(doc, "c_sync_ns");
  const json& dispatch = require(doc, "c_dispatch_ns_per_elem");
  if (!dispatch.is_number()) bad("'c_dispatch_ns_per_elem' must be a number");
  params.c_dispatch_ns_per_elem = dispatch.get<double>();
  params.workers = static_cast<std::size_t>(require_uint(doc, "p"));

  const json& when = require(doc, "calibrated_at");
  if (!when.is_string()) bad("'calibrated_at' must be a string");
  params.calibrated_at = when.get<std::string>();
  static const std::regex iso(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2}))");
  if (!std::regex_match(params.calibrated_at, iso)) bad("'calibrated_at' is not ISO-8601");

  const json& rates = require(doc, "serial_rate");
  if (!rates.is_object()) bad("'serial_rate' must be an object");
  for (const auto& [key, value] : rates.items()) {
    auto w = parse_workload(key);
    if (!w) bad("unknown workload '" + key + "' in serial_rate");
    if (!value.is_number()) bad("serial_rate." + key + " must be a number");
    params.serial_rate[*w] = value.get<double>();
  }

  if (auto it = doc.find("warnings"); it != doc.end()) {
    if (!it->is_array()) bad("'warnings' must be an array");
    for (const auto& w : *it) {
      if (!w.is_string()) bad("'warnings' entries must be strings");
      params.warnings.push_back(w.get<std::string>());
    }
  }

  try {
    params.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  if (!params.calibrated()) bad("serial_rate must hold positive rates for matmul and sort");
  return params;
}

void save_profile(const OverheadParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << profile_to_json(params);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

OverheadParams load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Profile, "calibration profile not found: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return profile_from_json(text.str());
}

}  // namespace parkernels
