#include "parkernels/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "parkernels/bench.hpp"
#include "parkernels/calibration.hpp"
#include "parkernels/fork_join.hpp"
#include "parkernels/profile_io.hpp"
#include "parkernels/verify.hpp"

namespace parkernels::cli {

namespace {

template <typename T>
T parse_number(const std::string& flag, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw UsageError(flag + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) parts.push_back(item);
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

std::vector<PivotStrategy> parse_pivots(const std::string& text) {
  std::vector<PivotStrategy> out;
  for (const auto& part : split_commas(text)) {
    auto s = parse_pivot_strategy(part);
    if (!s) {
      throw UsageError("--pivots: unknown pivot '" + part + "' (expected left, mean, right, random)");
    }
    for (auto seen : out) {
      if (seen == *s) throw UsageError("--pivots: '" + part + "' listed twice");
    }
    out.push_back(*s);
  }
  if (out.empty()) throw UsageError("--pivots: at least one pivot strategy is required");
  return out;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "md" || text == "markdown") return OutputFormat::Markdown;
  if (text == "plot") return OutputFormat::Plot;
  throw UsageError("--format: expected csv, md or plot, got '" + text + "'");
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& flag, const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& part : split_commas(text)) sizes.push_back(parse_number<std::size_t>(flag, part));
  if (sizes.empty()) throw UsageError(flag + ": list is empty");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw UsageError(flag + ": values must be strictly increasing");
  }
  return sizes;
}

namespace {

struct RawFlags {
  std::string sizes, pivots, format, threads, cutoff, depth_cap, reps, warmup, seed, workload;
  std::string out, calib;
};

struct Entry {
  const char* name;
  const char* help;
  Subcommand kind;
};

constexpr Entry kEntries[] = {
    {"calibrate", "Measure overheads and write a calibration profile", Subcommand::Calibrate},
    {"bench-sort", "Time serial and parallel quicksort per pivot strategy", Subcommand::BenchSort},
    {"bench-matmul", "Time serial and parallel matrix multiplication", Subcommand::BenchMatmul},
    {"crossover", "Locate the smallest size where parallel beats serial", Subcommand::Crossover},
    {"verify", "Run the sort and matmul correctness suites", Subcommand::Verify},
};

std::vector<std::pair<CLI::App*, Subcommand>> configure(CLI::App& app, RawFlags& f) {
  app.require_subcommand(1);
  std::vector<std::pair<CLI::App*, Subcommand>> subs;
  for (const auto& e : kEntries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--sizes", f.sizes, "Comma-separated, strictly increasing problem sizes");
    sub->add_option("--reps", f.reps, "Timed repetitions per cell (default 11)");
    sub->add_option("--warmup", f.warmup, "Untimed warmup runs per cell (default 2)");
    sub->add_option("--seed", f.seed, "Workload seed (default 42)");
    sub->add_option("--threads", f.threads, "Worker count P (overrides profile and detection)");
    sub->add_option("--pivots", f.pivots, "Pivot strategies: left,mean,right,random");
    sub->add_option("--cutoff", f.cutoff, "Sequential cutoff for parallel sort");
    sub->add_option("--depth-cap", f.depth_cap, "Maximum fork depth for parallel sort");
    sub->add_option("--format", f.format, "Output format: csv, md or plot");
    sub->add_option("--out", f.out, "Output file (calibrate: profile path)");
    sub->add_option("--calib", f.calib, "Calibration profile to read");
    if (e.kind == Subcommand::Crossover) {
      sub->add_option("--workload", f.workload, "matmul (default) or sort");
    }
    subs.emplace_back(sub, e.kind);
  }
  return subs;
}

constexpr const char* kDescription =
    "Parallel kernels with overhead-calibrated serial/parallel dispatch";

std::string usage_text() {
  CLI::App app{kDescription, "parkernels"};
  RawFlags flags;
  configure(app, flags);
  return app.help();
}

}  // namespace

CliConfig parse_flags(const std::vector<std::string>& args) {
  CLI::App app{kDescription, "parkernels"};
  RawFlags f;
  const auto subs = configure(app, f);
  auto& [sizes, pivots, format, threads, cutoff, depth_cap, reps, warmup, seed, workload, out,
         calib] = f;

  CliConfig cfg;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cfg.help = true;
    cfg.help_text = app.help();
    return cfg;
  } catch (const CLI::CallForAllHelp&) {
    cfg.help = true;
    cfg.help_text = app.help("", CLI::AppFormatMode::All);
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [sub, kind] : subs) {
    if (sub->parsed()) cfg.subcommand = kind;
  }

  if (!sizes.empty()) cfg.sizes = parse_size_list("--sizes", sizes);
  if (!reps.empty()) cfg.reps = parse_number<std::size_t>("--reps", reps);
  if (!warmup.empty()) cfg.warmup = parse_number<std::size_t>("--warmup", warmup);
  if (!seed.empty()) cfg.seed = parse_number<std::uint64_t>("--seed", seed);
  if (!threads.empty()) {
    cfg.threads = parse_number<std::size_t>("--threads", threads);
    if (*cfg.threads == 0) throw UsageError("--threads: must be >= 1");
  }
  if (!pivots.empty()) cfg.pivots = parse_pivots(pivots);
  if (!cutoff.empty()) {
    cfg.cutoff = parse_number<std::size_t>("--cutoff", cutoff);
    if (*cfg.cutoff == 0) throw UsageError("--cutoff: must be >= 1");
  }
  if (!depth_cap.empty()) cfg.depth_cap = parse_number<std::size_t>("--depth-cap", depth_cap);
  if (!format.empty()) cfg.format = parse_format(format);
  if (!out.empty()) cfg.out = out;
  if (!calib.empty()) cfg.calib = calib;
  if (!workload.empty()) {
    auto w = parse_workload(workload);
    if (!w) throw UsageError("--workload: expected matmul or sort, got '" + workload + "'");
    cfg.crossover_workload = *w;
  }

  if (cfg.reps < 1) throw UsageError("--reps: must be >= 1");
  if ((cfg.subcommand == Subcommand::Calibrate || cfg.subcommand == Subcommand::Crossover) &&
      cfg.reps < 3) {
    throw UsageError("--reps: calibrate and crossover need at least 3 repetitions");
  }
  if (cfg.subcommand == Subcommand::BenchMatmul && cfg.sizes && cfg.sizes->front() == 0) {
    throw UsageError("--sizes: matrix order must be >= 1");
  }
  return cfg;
}

std::size_t resolve_workers(std::optional<std::size_t> flag, std::optional<std::size_t> profile,
                            const char* env_value, std::size_t detected) {
  if (flag) return *flag;
  if (profile) return *profile;
  if (env_value != nullptr && *env_value != '\0') {
    const auto p = parse_number<std::size_t>("PARKERNELS_THREADS", env_value);
    if (p == 0) throw UsageError("PARKERNELS_THREADS: must be >= 1");
    return p;
  }
  return detected == 0 ? 1 : detected;
}

namespace {

void emit(const ResultTable& table, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::Csv: emit_csv(table, out); break;
    case OutputFormat::Markdown: emit_markdown(table, out); break;
    case OutputFormat::Plot: emit_plotdata(table, out); break;
  }
}

/// Writes to --out when given, otherwise to `fallback`.
template <typename F>
void with_destination(const CliConfig& cfg, std::ostream& fallback, F&& write) {
  if (!cfg.out) {
    write(fallback);
    return;
  }
  std::ofstream file(*cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + cfg.out->string() + " for writing");
  write(file);
}

OverheadParams require_profile(const CliConfig& cfg) {
  const std::filesystem::path path = cfg.calib.value_or(kDefaultProfilePath);
  if (!cfg.calib && !std::filesystem::exists(path)) {
    throw Error(ErrorKind::Profile,
                "no calibration profile: pass --calib or run 'parkernels calibrate' to create " +
                    path.string());
  }
  return load_profile(path);
}

const char* env_threads() { return std::getenv("PARKERNELS_THREADS"); }

int do_calibrate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  CalibrationOptions options;
  options.reps = cfg.reps;
  options.seed = cfg.seed;
  options.workers = resolve_workers(cfg.threads, std::nullopt, env_threads(), hardware_workers());
  const std::filesystem::path path = cfg.out.value_or(kDefaultProfilePath);
  const OverheadParams params = calibrate(options);
  save_profile(params, path);
  for (const auto& w : params.warnings) err << "warning: " << w << '\n';
  out << "wrote calibration profile " << path.string() << " (P=" << params.workers
      << ", fork=" << params.c_fork_ns << " ns, sync=" << params.c_sync_ns << " ns)\n";
  return kExitOk;
}

BenchSpec spec_from(const CliConfig& cfg, Workload workload, std::size_t workers) {
  BenchSpec spec;
  spec.workload = workload;
  spec.sizes = cfg.sizes.value_or(workload == Workload::Sort ? kDefaultSortSizes
                                                             : kDefaultMatmulSizes);
  spec.reps = cfg.reps;
  spec.warmup = cfg.warmup;
  spec.seed = cfg.seed;
  spec.strategies = cfg.pivots;
  spec.workers = workers;
  spec.seq_cutoff = cfg.cutoff;
  spec.depth_cap = cfg.depth_cap;
  return spec;
}

int do_bench(const CliConfig& cfg, Workload workload, std::ostream& out, std::ostream& err) {
  const OverheadParams params = require_profile(cfg);
  const std::size_t workers =
      resolve_workers(cfg.threads, params.workers, env_threads(), hardware_workers());
  const BenchSpec spec = spec_from(cfg, workload, workers);
  spec.validate();
  const ResultTable table = workload == Workload::Sort ? run_sort_bench(spec, params)
                                                       : run_matmul_bench(spec, params);
  for (const auto& note : table.notes) err << "note: " << note << '\n';
  with_destination(cfg, out, [&](std::ostream& dst) { emit(table, cfg.format, dst); });
  return kExitOk;
}

std::vector<std::size_t> default_crossover_sizes(Workload workload) {
  if (workload == Workload::Sort) return {1000, 10'000, 100'000, 1'000'000, 10'000'000};
  std::vector<std::size_t> sizes;
  for (std::size_t n = 8; n <= 1024; n *= 2) sizes.push_back(n);
  return sizes;
}

int do_crossover(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<std::size_t> profile_workers;
  const std::filesystem::path path = cfg.calib.value_or(kDefaultProfilePath);
  if (cfg.calib || std::filesystem::exists(path)) profile_workers = load_profile(path).workers;
  const std::size_t workers =
      resolve_workers(cfg.threads, profile_workers, env_threads(), hardware_workers());
  const Workload workload = cfg.crossover_workload;
  const auto sizes = cfg.sizes.value_or(default_crossover_sizes(workload));

  const CrossoverReport report =
      find_crossover(workload, sizes, cfg.reps, workers, make_kernel_runner(workload, cfg.seed));

  ResultTable table;
  table.workload = workload;
  table.columns = {kSerialLabel, kParallelLabel};
  for (const auto& p : report.points) table.rows.push_back({p.n, {p.serial, p.parallel}});
  with_destination(cfg, out, [&](std::ostream& dst) { emit(table, cfg.format, dst); });
  err << "crossover " << to_string(workload) << " P=" << workers << ": ";
  if (report.crossover_n) {
    err << "n=" << *report.crossover_n << '\n';
  } else {
    err << "none found\n";
  }
  return kExitOk;
}

int do_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.seed = cfg.seed;
  if (cfg.threads) options.workers = {*cfg.threads};
  if (cfg.cutoff) options.seq_cutoff = *cfg.cutoff;
  if (cfg.sizes) options.matmul_sizes = *cfg.sizes;
  const VerifyReport report = run_verification(options, err);
  out << "verify: " << report.checks << " checks, " << report.failures.size() << " failures\n";
  for (const auto& f : report.failures) out << "FAIL " << f << '\n';
  return report.ok() ? kExitOk : kExitCorrectness;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = parse_flags(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n";
    err << usage_text();
    return kExitUsage;
  }
  if (cfg.help) {
    out << cfg.help_text;
    return kExitOk;
  }

  try {
    switch (cfg.subcommand) {
      case Subcommand::Calibrate: return do_calibrate(cfg, out, err);
      case Subcommand::BenchSort: return do_bench(cfg, Workload::Sort, out, err);
      case Subcommand::BenchMatmul: return do_bench(cfg, Workload::Matmul, out, err);
      case Subcommand::Crossover: return do_crossover(cfg, out, err);
      case Subcommand::Verify: return do_verify(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Profile: return kExitCalibration;
      case ErrorKind::Correctness:
      case ErrorKind::Io: return kExitCorrectness;
      default: return kExitUsage;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCorrectness;
  }
  return kExitUsage;
}

}  // namespace parkernels::cli
