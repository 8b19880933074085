#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mrgnn/pipeline.hpp"

namespace mrgnn {

struct EmitOptions {
  std::size_t scatter_nodes = 200;
  std::uint64_t scatter_seed = 0;
  bool with_timestamp = true;  ///< "generated_at" field in JSON detail files
};

/// Column order of summary.csv; frozen.
const std::vector<std::string>& summary_columns();

std::string summary_csv(std::span<const RunReport> reports);
std::string loss_trace_csv(const RunReport& report);
std::string report_json(const RunReport& report, bool with_timestamp);

/// Writes summary.csv plus, per run i, run_<i>.json, loss_<i>.csv,
/// scatter_<i>.csv and scatter_<i>.svg.
std::vector<std::filesystem::path> emit_report(std::span<const RunReport> reports,
                                               const std::filesystem::path& out_dir,
                                               const EmitOptions& opt = {});

/// Reads the scalar fields (and solution) back from a run JSON file.
RunReport load_report_json(const std::filesystem::path& path);
std::vector<RunReport> load_report_dir(const std::filesystem::path& dir);

struct ComparisonRow {
  Problem problem = Problem::MaxCut;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t master_seed = 0;
  double loss_mrgnn = 0.0;
  double loss_mrgnn_am = 0.0;
  double delta_rel = 0.0;
  double time_mrgnn = 0.0;
  double time_mrgnn_am = 0.0;
  double delta_t = 0.0;
};

/// Pairs mrgnn and mrgnn+am runs that share problem, graph and master seed.
/// Deltas are NaN when the mrgnn reference is zero.
std::vector<ComparisonRow> compare_reports(std::span<const RunReport> reports);
std::string comparison_csv(std::span<const ComparisonRow> rows);

}  // namespace mrgnn
