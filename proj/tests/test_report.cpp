#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/report.hpp"

using namespace mrgnn;

namespace {

RunReport sample_report(Variant v, std::uint64_t seed, double objective, double time) {
  RunReport r;
  r.variant = v;
  r.problem = Problem::MIS;
  r.graph = {6, 2, 3, "gen"};
  r.master_seed = seed;
  r.objective = objective;
  r.metrics = {objective, 1, 0.0, 4, 3};
  r.solution = {1, 0, 1, 0, 1, 1};
  r.time_local_am = v == Variant::MrGnnAm ? time / 2 : 0.0;
  r.time_main = time - r.time_local_am;
  r.time_total = time;
  r.shifts.proportions = {0.5, 0.25, 0.25};
  r.shifts.counts = {2, 1, 1};
  r.shifts.total_shifts = 4;
  r.levels_used = {0, 2};
  r.final_loss = objective + 0.25;
  r.trace.epochs_run = 3;
  r.trace.losses = {1.0, 0.5, 0.25};
  r.trace.snapshot_epochs = {0, 3};
  Eigen::VectorXd p0 = Eigen::VectorXd::Constant(6, 0.5), p1 = Eigen::VectorXd::Constant(6, 0.95);
  r.trace.snapshots = {p0, p1};
  if (v == Variant::MrGnnAm) r.local_am_energies = {-2.0, -1.0};
  return r;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path fresh_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("summary columns are frozen") {
  const auto& cols = summary_columns();
  CHECK(cols.size() == 23);
  CHECK(cols.front() == "run");
  CHECK(cols[7] == "objective");
  CHECK(cols.back() == "levels_used");
}

TEST_CASE("summary csv has one row per run") {
  std::vector<RunReport> rs{sample_report(Variant::MrGnn, 1, -3.0, 2.0), sample_report(Variant::MrGnnAm, 1, -4.0, 3.0)};
  std::string csv = summary_csv(rs);
  CHECK(count_lines(csv) == 3);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header.rfind("run,variant,problem,n,d,", 0) == 0);
  CHECK(row.rfind("0,mrgnn,mis,6,2,3,1,-3,1,", 0) == 0);
  CHECK(row.substr(row.size() - 4) == ",0;2");
}

TEST_CASE("loss trace csv") {
  CHECK(loss_trace_csv(sample_report(Variant::RGnn, 0, -1.0, 1.0)) == "epoch,loss\n0,1\n1,0.5\n2,0.25\n");
}

TEST_CASE("json round trip keeps the scalar fields") {
  auto dir = fresh_dir("mrgnn_test_report_json");
  std::vector<RunReport> rs{sample_report(Variant::MrGnnAm, 7, -4.5, 3.0)};
  emit_report(rs, dir, {10, 0, false});
  RunReport back = load_report_json(dir / "run_0.json");
  const RunReport& r = rs[0];
  CHECK(back.variant == r.variant);
  CHECK(back.problem == r.problem);
  CHECK(back.graph.n == 6);
  CHECK(back.graph.source == "gen");
  CHECK(back.master_seed == 7);
  CHECK(back.objective == r.objective);
  CHECK(back.metrics.violations == 1);
  CHECK(back.solution == r.solution);
  CHECK(back.time_total == r.time_total);
  CHECK(back.shifts.counts == r.shifts.counts);
  CHECK(back.levels_used == r.levels_used);
  CHECK(back.local_am_energies == r.local_am_energies);
  CHECK(back.trace.epochs_run == 3);

  CHECK(report_json(r, false).find("generated_at") == std::string::npos);
  CHECK(report_json(r, true).find("generated_at") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit_report writes every artifact") {
  auto dir = fresh_dir("mrgnn_test_report_emit");
  std::vector<RunReport> rs{sample_report(Variant::MrGnn, 1, -3.0, 2.0), sample_report(Variant::MrGnnAm, 1, -4.0, 3.0)};
  auto files = emit_report(rs, dir, {4, 1, false});
  CHECK(files.size() == 9);
  for (const char* f : {"summary.csv", "run_1.json", "loss_1.csv", "scatter_0.csv", "scatter_1.svg"})
    CHECK(std::filesystem::exists(dir / f));
  std::ifstream sc(dir / "scatter_0.csv");
  std::string all((std::istreambuf_iterator<char>(sc)), {});
  CHECK(count_lines(all) == 1 + 2 * 4);  // two snapshots, four sampled nodes

  auto loaded = load_report_dir(dir);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1].variant == Variant::MrGnnAm);
  CHECK_THROWS_AS(emit_report(std::span<const RunReport>{}, dir), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST_CASE("compare pairs runs by graph and seed") {
  std::vector<RunReport> rs{sample_report(Variant::MrGnn, 1, -100.0, 10.0), sample_report(Variant::MrGnnAm, 1, -110.0, 12.0),
                            sample_report(Variant::MrGnn, 2, -50.0, 5.0), sample_report(Variant::RGnn, 2, -60.0, 1.0),
                            sample_report(Variant::MrGnn, 3, 0.0, 0.0), sample_report(Variant::MrGnnAm, 3, -1.0, 1.0)};
  auto rows = compare_reports(rs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].master_seed == 1);
  CHECK(rows[0].delta_rel == doctest::Approx(10.0));
  CHECK(rows[0].delta_t == doctest::Approx(20.0));
  CHECK(std::isnan(rows[1].delta_rel));
  CHECK(std::isnan(rows[1].delta_t));
  std::string csv = comparison_csv(rows);
  CHECK(count_lines(csv) == 3);
  CHECK(csv.find("mis,6,2,3,1,-100,-110,10,10,12,20\n") != std::string::npos);
}

TEST_CASE("malformed report files are parse errors") {
  auto dir = fresh_dir("mrgnn_test_report_bad");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "run_0.json") << "{\"variant\": \"mrgnn\"}";
  CHECK_THROWS_AS(load_report_json(dir / "run_0.json"), ParseError);
  CHECK_THROWS_AS(load_report_dir(dir / "missing"), IoError);
  std::filesystem::remove_all(dir);
}
