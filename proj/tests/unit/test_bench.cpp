#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "parkernels/bench.hpp"

using namespace parkernels;

namespace {

OverheadParams profile(std::size_t workers) {
  OverheadParams p;
  p.workers = workers;
  p.c_fork_ns = 30'000;
  p.serial_rate = {{Workload::Matmul, 0.5}, {Workload::Sort, 4.0}};
  p.calibrated_at = "2026-10-16T00:00:00Z";
  return p;
}

BenchSpec sort_spec(std::vector<std::size_t> sizes) {
  BenchSpec s;
  s.workload = Workload::Sort;
  s.sizes = std::move(sizes);
  s.reps = 3;
  s.warmup = 1;
  s.strategies = {PivotStrategy::Random, PivotStrategy::Leftmost, PivotStrategy::Rightmost,
                  PivotStrategy::Mean};
  return s;
}

RunStats cell(std::uint64_t median_ns) {
  RunStats s;
  s.median_ns = median_ns;
  s.min_ns = median_ns;
  s.rep_count = 1;
  return s;
}

ResultTable table3_fixture() {
  ResultTable t;
  t.workload = Workload::Sort;
  t.columns = {"serial", "parallel left pivot", "parallel mean pivot", "parallel right pivot",
               "parallel random pivot"};
  t.rows.push_back({1000, {cell(2'246'000), cell(1'400'000), cell(1'247'000), cell(1'370'000),
                           cell(2'293'000)}});
  return t;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string f; std::getline(in, f, sep);) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("format_ms") {
  CHECK(format_ms(2'246'000) == "2.246");
  CHECK(format_ms(1'400'000) == "1.400");
  CHECK(format_ms(0) == "0.000");
  CHECK(format_ms(499) == "0.000");
  CHECK(format_ms(500) == "0.001");
  CHECK(format_ms(1'999'500) == "2.000");
  CHECK(format_ms(12'345'678'901) == "12345.679");
}

TEST_CASE("emit_csv") {
  SUBCASE("table fixture row") {
    std::ostringstream out;
    emit_csv(table3_fixture(), out);
    CHECK(out.str() ==
          "Elements,serial,parallel left pivot,parallel mean pivot,parallel right pivot,"
          "parallel random pivot\n1000,2.246,1.400,1.247,1.370,2.293\n");
  }
  SUBCASE("empty table is header only") {
    auto t = table3_fixture();
    t.rows.clear();
    std::ostringstream out;
    emit_csv(t, out);
    CHECK(lines(out.str()).size() == 1);
  }
  SUBCASE("matmul table with one size") {
    ResultTable t;
    t.workload = Workload::Matmul;
    t.columns = {kSerialLabel, kParallelLabel};
    t.rows.push_back({64, {cell(1000), cell(2000)}});
    std::ostringstream out;
    emit_csv(t, out);
    CHECK(out.str() == "Elements,serial,parallel\n64,0.001,0.002\n");
  }
  SUBCASE("malformed table is rejected") {
    auto t = table3_fixture();
    t.rows[0].cells.pop_back();
    std::ostringstream out;
    CHECK_THROWS_AS(emit_csv(t, out), Error);
  }
  SUBCASE("write failure surfaces as an I/O error") {
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    try {
      emit_csv(table3_fixture(), out);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }
}

TEST_CASE("emit_markdown") {
  auto t = table3_fixture();
  t.rows.push_back({2000, {cell(3'838'000), cell(2'074'000), cell(1'933'000), cell(2'151'000),
                           cell(3'136'000)}});
  std::ostringstream out;
  emit_markdown(t, out);
  const auto ls = lines(out.str());
  CHECK(ls.size() == t.rows.size() + 2);
  CHECK(ls[0] ==
        "| Elements | serial | parallel left pivot | parallel mean pivot | parallel right pivot | "
        "parallel random pivot |");
  CHECK(ls[2] == "| 1000 | 2.246 | 1.400 | 1.247 | 1.370 | 2.293 |");

  t.rows.clear();
  std::ostringstream empty;
  emit_markdown(t, empty);
  CHECK(lines(empty.str()).size() == 2);
}

TEST_CASE("emit_plotdata") {
  std::ostringstream out;
  emit_plotdata(table3_fixture(), out);
  const auto ls = lines(out.str());
  CHECK(ls[0] ==
        "# Elements serial parallel_left_pivot parallel_mean_pivot parallel_right_pivot "
        "parallel_random_pivot");
  CHECK(ls[1] == "1000 2.246 1.400 1.247 1.370 2.293");

  auto t = table3_fixture();
  t.rows.clear();
  std::ostringstream empty;
  emit_plotdata(t, empty);
  CHECK(empty.str() == ls[0] + "\n");
}

TEST_CASE("the three emitters agree on every numeric cell") {
  const auto table = run_sort_bench(sort_spec({50, 300, 1000}), profile(2));
  std::ostringstream csv, md, plot;
  emit_csv(table, csv);
  emit_markdown(table, md);
  emit_plotdata(table, plot);
  const auto c = lines(csv.str());
  const auto m = lines(md.str());
  const auto p = lines(plot.str());
  REQUIRE(c.size() == 4);
  REQUIRE(m.size() == 5);
  REQUIRE(p.size() == 4);
  for (std::size_t r = 1; r < c.size(); ++r) {
    const auto cf = split(c[r], ',');
    const auto pf = split(p[r], ' ');
    std::vector<std::string> mf;
    for (auto f : split(m[r + 1], '|')) {
      f.erase(std::remove(f.begin(), f.end(), ' '), f.end());
      if (!f.empty()) mf.push_back(f);
    }
    CHECK(cf == pf);
    CHECK(cf == mf);
  }
}

TEST_CASE("run_sort_bench") {
  SUBCASE("table has the full column set in canonical order") {
    const auto t = run_sort_bench(sort_spec({1000, 1100, 1500, 2000}), profile(4));
    CHECK(t.columns == std::vector<std::string>{"serial", "parallel left pivot",
                                                "parallel mean pivot", "parallel right pivot",
                                                "parallel random pivot"});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].n == 1000);
    CHECK(t.rows[3].n == 2000);
    for (const auto& row : t.rows) {
      for (const auto& c : row.cells) CHECK(c.rep_count == 3);
    }
  }
  SUBCASE("a single tiny size still yields positive cells") {
    auto spec = sort_spec({10});
    spec.reps = 1;
    spec.warmup = 0;
    const auto t = run_sort_bench(spec, profile(2));
    REQUIRE(t.rows.size() == 1);
    for (const auto& c : t.rows[0].cells) CHECK(c.median_ns > 0);
  }
  SUBCASE("subset of strategies") {
    auto spec = sort_spec({100});
    spec.strategies = {PivotStrategy::Mean};
    const auto t = run_sort_bench(spec, profile(2));
    CHECK(t.columns == std::vector<std::string>{"serial", "parallel mean pivot"});
  }
  SUBCASE("inputs and outputs are reproducible for a fixed seed") {
    using Key = std::pair<std::string, std::size_t>;
    auto capture = [](std::map<Key, std::pair<NumArray, NumArray>>& into) {
      return [&into](const std::string& v, std::size_t n, std::span<const std::int64_t> in,
                     std::span<const std::int64_t> out) {
        into[{v, n}] = {NumArray(in.begin(), in.end()), NumArray(out.begin(), out.end())};
      };
    };
    std::map<Key, std::pair<NumArray, NumArray>> first, second;
    auto spec = sort_spec({500, 3000});
    spec.seq_cutoff = 64;
    (void)run_sort_bench(spec, profile(4), capture(first));
    (void)run_sort_bench(spec, profile(4), capture(second));
    CHECK(first.size() == 10);
    CHECK(first == second);
    const auto& [in, out] = first.at({"serial", 3000});
    CHECK(in == gen_random_array(input_seed(spec.seed, 3000), 3000, 0, 1'000'000));
    CHECK(is_sorted(out));
  }
  SUBCASE("P=1 is flagged in the notes") {
    const auto t = run_sort_bench(sort_spec({100}), profile(1));
    CHECK_FALSE(t.notes.empty());
  }
  SUBCASE("spec validation") {
    auto spec = sort_spec({30, 10});
    CHECK_THROWS_AS((void)run_sort_bench(spec, profile(2)), Error);
    spec = sort_spec({10});
    spec.strategies.clear();
    CHECK_THROWS_AS((void)run_sort_bench(spec, profile(2)), Error);
    spec = sort_spec({10});
    spec.reps = 0;
    CHECK_THROWS_AS((void)run_sort_bench(spec, profile(2)), Error);
    spec = sort_spec({10});
    spec.workload = Workload::Matmul;
    CHECK_THROWS_AS((void)run_sort_bench(spec, profile(2)), Error);
  }
}

TEST_CASE("run_matmul_bench") {
  BenchSpec spec;
  spec.workload = Workload::Matmul;
  spec.sizes = {64, 128};
  spec.reps = 3;
  spec.warmup = 0;
  spec.workers = 2;
  const auto t = run_matmul_bench(spec, profile(8));
  CHECK(t.columns == std::vector<std::string>{"serial", "parallel"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1].n == 128);
  CHECK(t.notes.empty());

  spec.workers = 1;
  spec.sizes = {16};
  CHECK_FALSE(run_matmul_bench(spec, profile(8)).notes.empty());

  spec.sizes = {0};
  CHECK_THROWS_AS((void)run_matmul_bench(spec, profile(8)), Error);
}
