#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "parkernels/bench.hpp"
#include "parkernels/calibration.hpp"
#include "parkernels/matmul.hpp"
#include "parkernels/profile_io.hpp"
#include "parkernels/sort.hpp"

namespace py = pybind11;
using namespace parkernels;

namespace {

using IntArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

// In-place views require an existing, writeable, contiguous int64 buffer.
std::span<std::int64_t> mutable_keys(py::array& a) {
  if (!py::isinstance<py::array_t<std::int64_t>>(a) || a.ndim() != 1 ||
      !(a.flags() & py::array::c_style) || !a.writeable()) {
    throw py::type_error("expected a writeable, contiguous 1-D int64 numpy array");
  }
  return {static_cast<std::int64_t*>(a.mutable_data()), static_cast<std::size_t>(a.size())};
}

std::span<const std::int64_t> keys(const IntArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

py::array to_numpy(NumArray v) {
  auto* heap = new NumArray(std::move(v));
  py::capsule owner(heap, [](void* p) { delete static_cast<NumArray*>(p); });
  return py::array_t<std::int64_t>({heap->size()}, {sizeof(std::int64_t)}, heap->data(), owner);
}

Matrix to_matrix(const py::array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  if (py::isinstance<py::array_t<std::int64_t>>(a)) {
    auto c = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>::ensure(a);
    return Matrix(rows, cols, std::vector<std::int64_t>(c.data(), c.data() + c.size()));
  }
  auto c = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
  if (!c) throw py::type_error("matrix elements must be int64 or convertible to float64");
  return Matrix(rows, cols, std::vector<double>(c.data(), c.data() + c.size()));
}

py::array from_matrix(const Matrix& m) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(m.rows()),
                                       static_cast<py::ssize_t>(m.cols())};
  if (m.kind() == ElementKind::Int64) {
    py::array_t<std::int64_t> out(shape);
    std::copy(m.elems<std::int64_t>().begin(), m.elems<std::int64_t>().end(), out.mutable_data());
    return out;
  }
  py::array_t<double> out(shape);
  std::copy(m.elems<double>().begin(), m.elems<double>().end(), out.mutable_data());
  return out;
}

template <typename Emit>
std::string render(const ResultTable& t, Emit emit) {
  std::ostringstream out;
  emit(t, out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_parkernels, m) {
  m.doc() = "Fork-join matrix multiplication and quicksort with an overhead-calibrated dispatcher";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string message = std::string(to_string(e.kind())) + ": " + e.what();
      PyErr_SetString(error.ptr(), message.c_str());
    }
  });

  py::enum_<PivotStrategy>(m, "PivotStrategy")
      .value("LEFTMOST", PivotStrategy::Leftmost)
      .value("RIGHTMOST", PivotStrategy::Rightmost)
      .value("MEAN", PivotStrategy::Mean)
      .value("RANDOM", PivotStrategy::Random);

  py::enum_<Workload>(m, "Workload").value("MATMUL", Workload::Matmul).value("SORT", Workload::Sort);

  py::class_<ExecutionMode>(m, "ExecutionMode")
      .def_static("serial", &ExecutionMode::serial)
      .def_static("parallel", &ExecutionMode::parallel, py::arg("workers"))
      .def_property_readonly("is_serial", &ExecutionMode::is_serial)
      .def_property_readonly("workers", &ExecutionMode::workers)
      .def("__eq__", [](ExecutionMode a, ExecutionMode b) { return a == b; })
      .def("__repr__", [](ExecutionMode mode) { return to_string(mode); });

  py::class_<OverheadParams>(m, "OverheadParams")
      .def(py::init<>())
      .def_readwrite("c_fork_ns", &OverheadParams::c_fork_ns)
      .def_readwrite("c_sync_ns", &OverheadParams::c_sync_ns)
      .def_readwrite("c_dispatch_ns_per_elem", &OverheadParams::c_dispatch_ns_per_elem)
      .def_readwrite("workers", &OverheadParams::workers)
      .def_readwrite("calibrated_at", &OverheadParams::calibrated_at)
      .def_readwrite("serial_rate", &OverheadParams::serial_rate)
      .def_readwrite("warnings", &OverheadParams::warnings)
      .def("to_json", &profile_to_json)
      .def_static("from_json", &profile_from_json)
      .def("save", [](const OverheadParams& p, const std::filesystem::path& path) { save_profile(p, path); })
      .def_static("load", &load_profile);

  // core
  m.def("gen_random_array",
        [](std::uint64_t seed, std::size_t n, std::int64_t lo, std::int64_t hi) {
          return to_numpy(gen_random_array(seed, n, lo, hi));
        },
        py::arg("seed"), py::arg("n"), py::arg("lo"), py::arg("hi"));
  m.def("splitmix64", &splitmix64, py::arg("x"));
  m.def("is_sorted", [](const IntArray& a) { return is_sorted(keys(a)); });
  m.def("multiset_equal",
        [](const IntArray& a, const IntArray& b) { return multiset_equal(keys(a), keys(b)); });
  m.def("aggregate", [](const std::vector<std::uint64_t>& durations) {
    std::vector<TimingSample> samples;
    for (std::size_t i = 0; i < durations.size(); ++i) {
      samples.push_back({Workload::Sort, "sample", 0, durations[i], i, 0});
    }
    const RunStats s = aggregate(samples);
    return py::dict(py::arg("median_ns") = s.median_ns, py::arg("mean_ns") = s.mean_ns,
                    py::arg("stddev_ns") = s.stddev_ns, py::arg("min_ns") = s.min_ns,
                    py::arg("rep_count") = s.rep_count);
  });

  // matmul
  m.def("partition_rows", [](std::size_t rows, std::size_t workers) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto r : partition_rows(rows, workers)) out.emplace_back(r.begin, r.end);
    return out;
  });
  m.def("matmul_serial", [](const py::array& a, const py::array& b) {
    const Matrix ma = to_matrix(a), mb = to_matrix(b);
    Matrix c = [&] {
      py::gil_scoped_release nogil;
      return matmul_serial(ma, mb);
    }();
    return from_matrix(c);
  });
  m.def("matmul_parallel",
        [](const py::array& a, const py::array& b, std::size_t workers) {
          const Matrix ma = to_matrix(a), mb = to_matrix(b);
          Matrix c = [&] {
            py::gil_scoped_release nogil;
            return matmul_parallel(ma, mb, workers);
          }();
          return from_matrix(c);
        },
        py::arg("a"), py::arg("b"), py::arg("workers"));
  m.def("matmul_adaptive", [](const py::array& a, const py::array& b, const OverheadParams& p) {
    const Matrix ma = to_matrix(a), mb = to_matrix(b);
    auto out = [&] {
      py::gil_scoped_release nogil;
      return matmul_adaptive(ma, mb, p);
    }();
    return py::make_tuple(from_matrix(out.product), out.mode);
  });

  // sort
  m.def("select_pivot",
        [](const IntArray& a, std::size_t q, std::size_t r, PivotStrategy s, std::uint64_t seed) {
          Xoshiro256ss rng(seed);
          return select_pivot(keys(a), q, r, s, rng);
        },
        py::arg("a"), py::arg("q"), py::arg("r"), py::arg("strategy"), py::arg("seed") = 0);
  m.def("partition", [](py::array& a, std::size_t q, std::size_t r) {
    return partition(mutable_keys(a), q, r).s;
  });
  m.def("quicksort_serial",
        [](py::array& a, PivotStrategy s, std::uint64_t seed) {
          auto view = mutable_keys(a);
          py::gil_scoped_release nogil;
          Xoshiro256ss rng(seed);
          quicksort_serial(view, s, rng);
        },
        py::arg("a"), py::arg("strategy"), py::arg("seed") = 0);
  m.def("quicksort_parallel",
        [](py::array& a, PivotStrategy s, std::size_t workers, std::optional<std::size_t> cutoff,
           std::optional<std::size_t> depth_cap, std::uint64_t seed) {
          auto view = mutable_keys(a);
          ParallelSortConfig cfg = default_sort_config(workers == 0 ? 1 : workers);
          cfg.workers = workers;
          if (cutoff) cfg.seq_cutoff = *cutoff;
          if (depth_cap) cfg.depth_cap = *depth_cap;
          py::gil_scoped_release nogil;
          quicksort_parallel(view, s, cfg, seed);
        },
        py::arg("a"), py::arg("strategy"), py::arg("workers"), py::arg("seq_cutoff") = py::none(),
        py::arg("depth_cap") = py::none(), py::arg("seed") = 0);
  m.def("sort_adaptive",
        [](py::array& a, PivotStrategy s, const OverheadParams& p, std::uint64_t seed) {
          auto view = mutable_keys(a);
          py::gil_scoped_release nogil;
          return sort_adaptive(view, s, p, seed);
        },
        py::arg("a"), py::arg("strategy"), py::arg("params"), py::arg("seed") = 0);

  // overhead
  m.def("predict_time", &predict_time, py::arg("workload"), py::arg("n"), py::arg("mode"),
        py::arg("params"));
  m.def("choose_mode", &choose_mode, py::arg("workload"), py::arg("n"), py::arg("params"));
  m.def("calibrate",
        [](std::size_t reps, std::optional<std::size_t> workers,
           std::vector<std::size_t> matmul_probes, std::vector<std::size_t> sort_probes) {
          CalibrationOptions o;
          o.reps = reps;
          o.workers = workers;
          if (!matmul_probes.empty()) o.matmul_probe_sizes = std::move(matmul_probes);
          if (!sort_probes.empty()) o.sort_probe_sizes = std::move(sort_probes);
          py::gil_scoped_release nogil;
          return calibrate(o);
        },
        py::arg("reps") = 11, py::arg("workers") = py::none(),
        py::arg("matmul_probes") = std::vector<std::size_t>{},
        py::arg("sort_probes") = std::vector<std::size_t>{});
  m.def("find_crossover",
        [](Workload w, const std::vector<std::size_t>& sizes, std::size_t reps,
           std::size_t workers, const std::function<std::uint64_t(std::size_t, ExecutionMode)>& runner) {
          const auto report = find_crossover(w, sizes, reps, workers, runner);
          py::list medians;
          for (const auto& p : report.points) {
            medians.append(py::make_tuple(p.n, p.serial.median_ns, p.parallel.median_ns));
          }
          return py::dict(py::arg("crossover_n") = report.crossover_n,
                          py::arg("sizes_tested") = report.sizes_tested,
                          py::arg("medians") = medians);
        },
        py::arg("workload"), py::arg("sizes"), py::arg("reps"), py::arg("workers"),
        py::arg("runner"));

  // bench
  py::class_<ResultTable>(m, "ResultTable")
      .def_readonly("columns", &ResultTable::columns)
      .def_readonly("notes", &ResultTable::notes)
      .def_property_readonly("sizes",
                             [](const ResultTable& t) {
                               std::vector<std::size_t> n;
                               for (const auto& r : t.rows) n.push_back(r.n);
                               return n;
                             })
      .def_property_readonly("medians_ns",
                             [](const ResultTable& t) {
                               std::vector<std::vector<std::uint64_t>> out;
                               for (const auto& r : t.rows) {
                                 auto& row = out.emplace_back();
                                 for (const auto& c : r.cells) row.push_back(c.median_ns);
                               }
                               return out;
                             })
      .def("to_csv", [](const ResultTable& t) { return render(t, emit_csv); })
      .def("to_markdown", [](const ResultTable& t) { return render(t, emit_markdown); })
      .def("to_plotdata", [](const ResultTable& t) { return render(t, emit_plotdata); });

  m.def("run_sort_bench",
        [](const std::vector<std::size_t>& sizes, const std::vector<PivotStrategy>& strategies,
           const OverheadParams& params, std::size_t reps, std::size_t warmup,
           std::uint64_t seed, std::optional<std::size_t> workers) {
          BenchSpec spec;
          spec.workload = Workload::Sort;
          spec.sizes = sizes;
          spec.strategies = strategies;
          spec.reps = reps;
          spec.warmup = warmup;
          spec.seed = seed;
          spec.workers = workers;
          py::gil_scoped_release nogil;
          return run_sort_bench(spec, params);
        },
        py::arg("sizes"), py::arg("strategies"), py::arg("params"), py::arg("reps") = 11,
        py::arg("warmup") = 2, py::arg("seed") = 42, py::arg("workers") = py::none());
  m.def("run_matmul_bench",
        [](const std::vector<std::size_t>& sizes, const OverheadParams& params, std::size_t reps,
           std::size_t warmup, std::uint64_t seed, std::optional<std::size_t> workers) {
          BenchSpec spec;
          spec.workload = Workload::Matmul;
          spec.sizes = sizes;
          spec.reps = reps;
          spec.warmup = warmup;
          spec.seed = seed;
          spec.workers = workers;
          py::gil_scoped_release nogil;
          return run_matmul_bench(spec, params);
        },
        py::arg("sizes"), py::arg("params"), py::arg("reps") = 11, py::arg("warmup") = 2,
        py::arg("seed") = 42, py::arg("workers") = py::none());
}
