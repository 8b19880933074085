#include "mrgnn/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "mrgnn/error.hpp"
#include "mrgnn/rng.hpp"
#include "text_util.hpp"

namespace mrgnn {

using nlohmann::json;
using detail::format_double;

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "run",          "variant",        "problem",   "n",           "d",
      "graph_seed",   "master_seed",    "objective", "violations",  "balance",
      "cut_size",     "set_size",       "time_local_am", "time_local_gnn", "time_main",
      "time_total",   "shift_early",    "shift_mid", "shift_late",  "total_shifts",
      "epochs_run",   "sample",         "levels_used"};
  return cols;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_levels(const std::vector<std::size_t>& levels) {
  std::string s;
  for (std::size_t i = 0; i < levels.size(); ++i) s += (i ? ";" : "") + std::to_string(levels[i]);
  return s;
}

}  // namespace

std::string summary_csv(std::span<const RunReport> reports) {
  std::string out;
  const auto& cols = summary_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    std::vector<std::string> f = {
        std::to_string(i),
        variant_name(r.variant),
        problem_name(r.problem),
        std::to_string(r.graph.n),
        std::to_string(r.graph.d),
        std::to_string(r.graph.seed),
        std::to_string(r.master_seed),
        format_double(r.objective),
        std::to_string(r.metrics.violations),
        format_double(r.metrics.balance),
        std::to_string(r.metrics.cut_size),
        std::to_string(r.metrics.set_size),
        format_double(r.time_local_am),
        format_double(r.time_local_gnn),
        format_double(r.time_main),
        format_double(r.time_total),
        format_double(r.shifts.proportions[0]),
        format_double(r.shifts.proportions[1]),
        format_double(r.shifts.proportions[2]),
        std::to_string(r.shifts.total_shifts),
        std::to_string(r.trace.epochs_run),
        std::to_string(r.sample_index),
        join_levels(r.levels_used)};
    for (std::size_t k = 0; k < f.size(); ++k) out += (k ? "," : "") + csv_field(f[k]);
    out += "\n";
  }
  return out;
}

std::string loss_trace_csv(const RunReport& report) {
  std::string out = "epoch,loss\n";
  for (std::size_t e = 0; e < report.trace.losses.size(); ++e)
    out += std::to_string(e) + "," + format_double(report.trace.losses[e]) + "\n";
  return out;
}

std::string report_json(const RunReport& r, bool with_timestamp) {
  json j;
  j["variant"] = variant_name(r.variant);
  j["problem"] = problem_name(r.problem);
  j["graph"] = {{"n", r.graph.n}, {"d", r.graph.d}, {"seed", r.graph.seed}, {"source", r.graph.source}};
  j["master_seed"] = r.master_seed;
  j["objective"] = r.objective;
  j["metrics"] = {{"objective", r.metrics.objective},
                  {"violations", r.metrics.violations},
                  {"balance", r.metrics.balance},
                  {"cut_size", r.metrics.cut_size},
                  {"set_size", r.metrics.set_size}};
  j["solution"] = to_bitstring(r.solution);
  j["times"] = {{"local_am", r.time_local_am},
                {"local_gnn", r.time_local_gnn},
                {"main", r.time_main},
                {"total", r.time_total}};
  j["shifts"] = {{"proportions", r.shifts.proportions},
                 {"counts", r.shifts.counts},
                 {"total", r.shifts.total_shifts}};
  j["levels_used"] = r.levels_used;
  j["sample"] = r.sample_index;
  j["final_loss"] = r.final_loss;
  j["epochs_run"] = r.trace.epochs_run;
  j["local_am_energies"] = r.local_am_energies;
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = buf;
  }
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::size_t> sample_nodes(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (k >= n) return idx;
  Rng rng(mix_seed(seed));
  for (std::size_t i = 0; i < k; ++i) {
    auto j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::string scatter_csv(const RunReport& r, const std::vector<std::size_t>& nodes) {
  std::string out = "epoch,node,score\n";
  for (std::size_t s = 0; s < r.trace.snapshots.size(); ++s)
    for (auto v : nodes)
      out += std::to_string(r.trace.snapshot_epochs[s]) + "," + std::to_string(v) + "," +
             format_double(r.trace.snapshots[s](static_cast<Eigen::Index>(v))) + "\n";
  return out;
}

std::string scatter_svg(const RunReport& r, const std::vector<std::size_t>& nodes) {
  const double w = 640, h = 360, pad = 40;
  const double max_epoch = r.trace.snapshot_epochs.empty()
                               ? 1.0
                               : std::max<double>(1.0, static_cast<double>(r.trace.snapshot_epochs.back()));
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" viewBox=\"0 0 640 360\">\n";
  out += "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n";
  out += "<line x1=\"40\" y1=\"320\" x2=\"620\" y2=\"320\" stroke=\"black\"/>\n";
  out += "<line x1=\"40\" y1=\"20\" x2=\"40\" y2=\"320\" stroke=\"black\"/>\n";
  out += "<text x=\"330\" y=\"350\" font-size=\"12\" text-anchor=\"middle\">epoch</text>\n";
  out += "<text x=\"12\" y=\"170\" font-size=\"12\" transform=\"rotate(-90 12 170)\" text-anchor=\"middle\">assignment score</text>\n";
  out += "<g fill-opacity=\"0.5\">\n";
  for (std::size_t s = 0; s < r.trace.snapshots.size(); ++s) {
    const double x = pad + (w - 2 * pad + 20) * static_cast<double>(r.trace.snapshot_epochs[s]) / max_epoch;
    for (auto v : nodes) {
      const double score = r.trace.snapshots[s](static_cast<Eigen::Index>(v));
      const double y = (h - pad) - (h - 2 * pad + 20) * score;
      const bool extreme = score < 0.1 || score > 0.9;
      out += "<circle cx=\"" + format_double(std::round(x * 10) / 10) + "\" cy=\"" +
             format_double(std::round(y * 10) / 10) + "\" r=\"1.2\" fill=\"" +
             (extreme ? "#c0392b" : "#2c3e50") + "\"/>\n";
    }
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(std::span<const RunReport> reports,
                                               const std::filesystem::path& out_dir,
                                               const EmitOptions& opt) {
  if (reports.empty()) throw InvalidInput("no reports to emit");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::filesystem::path& p, const std::string& content) {
    detail::write_file(p, content);
    written.push_back(p);
  };
  put(out_dir / "summary.csv", summary_csv(reports));
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const std::string id = std::to_string(i);
    put(out_dir / ("run_" + id + ".json"), report_json(r, opt.with_timestamp));
    put(out_dir / ("loss_" + id + ".csv"), loss_trace_csv(r));
    auto nodes = sample_nodes(r.solution.size(), opt.scatter_nodes, opt.scatter_seed);
    put(out_dir / ("scatter_" + id + ".csv"), scatter_csv(r, nodes));
    put(out_dir / ("scatter_" + id + ".svg"), scatter_svg(r, nodes));
  }
  return written;
}

RunReport load_report_json(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(detail::read_file(path));
    RunReport r;
    r.variant = parse_variant(j.at("variant").get<std::string>());
    r.problem = parse_problem(j.at("problem").get<std::string>());
    const auto& g = j.at("graph");
    r.graph = {g.at("n").get<std::size_t>(), g.at("d").get<std::size_t>(),
               g.at("seed").get<std::uint64_t>(), g.value("source", std::string{})};
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.objective = j.at("objective").get<double>();
    const auto& m = j.at("metrics");
    r.metrics = {m.at("objective").get<double>(), m.at("violations").get<std::size_t>(),
                 m.at("balance").get<double>(), m.at("cut_size").get<std::size_t>(),
                 m.at("set_size").get<std::size_t>()};
    for (char c : j.at("solution").get<std::string>()) r.solution.push_back(c == '1');
    const auto& t = j.at("times");
    r.time_local_am = t.at("local_am").get<double>();
    r.time_local_gnn = t.at("local_gnn").get<double>();
    r.time_main = t.at("main").get<double>();
    r.time_total = t.at("total").get<double>();
    const auto& s = j.at("shifts");
    r.shifts.proportions = s.at("proportions").get<std::array<double, 3>>();
    r.shifts.counts = s.at("counts").get<std::array<std::size_t, 3>>();
    r.shifts.total_shifts = s.at("total").get<std::size_t>();
    r.levels_used = j.at("levels_used").get<std::vector<std::size_t>>();
    r.sample_index = j.at("sample").get<std::size_t>();
    r.final_loss = j.at("final_loss").get<double>();
    r.trace.epochs_run = j.at("epochs_run").get<std::size_t>();
    r.local_am_energies = j.at("local_am_energies").get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 1);
  }
}

std::vector<RunReport> load_report_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("run_", 0) == 0 && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  // Numeric order of the run index keeps output stable.
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    auto idx = [](const std::filesystem::path& p) {
      return std::stoull(p.stem().string().substr(4));
    };
    return idx(a) < idx(b);
  });
  std::vector<RunReport> out;
  for (const auto& f : files) out.push_back(load_report_json(f));
  return out;
}

std::vector<ComparisonRow> compare_reports(std::span<const RunReport> reports) {
  using Key = std::tuple<int, std::size_t, std::size_t, std::uint64_t, std::uint64_t>;
  std::map<Key, std::pair<const RunReport*, const RunReport*>> pairs;
  for (const auto& r : reports) {
    Key k{static_cast<int>(r.problem), r.graph.n, r.graph.d, r.graph.seed, r.master_seed};
    if (r.variant == Variant::MrGnn) pairs[k].first = &r;
    if (r.variant == Variant::MrGnnAm) pairs[k].second = &r;
  }
  std::vector<ComparisonRow> rows;
  for (const auto& [k, p] : pairs) {
    if (!p.first || !p.second) continue;
    ComparisonRow row;
    row.problem = p.first->problem;
    row.n = p.first->graph.n;
    row.d = p.first->graph.d;
    row.graph_seed = p.first->graph.seed;
    row.master_seed = p.first->master_seed;
    row.loss_mrgnn = p.first->objective;
    row.loss_mrgnn_am = p.second->objective;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.delta_rel = row.loss_mrgnn != 0.0 ? delta_rel(row.loss_mrgnn_am, row.loss_mrgnn) : nan;
    row.time_mrgnn = p.first->time_total;
    row.time_mrgnn_am = p.second->time_total;
    row.delta_t = row.time_mrgnn > 0.0 ? delta_t(row.time_mrgnn_am, row.time_mrgnn) : nan;
    rows.push_back(row);
  }
  return rows;
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::string out =
      "problem,n,d,graph_seed,master_seed,loss_mrgnn,loss_mrgnn_am,delta_rel,time_mrgnn,time_mrgnn_am,delta_t\n";
  for (const auto& r : rows)
    out += std::string(problem_name(r.problem)) + "," + std::to_string(r.n) + "," + std::to_string(r.d) +
           "," + std::to_string(r.graph_seed) + "," + std::to_string(r.master_seed) + "," +
           format_double(r.loss_mrgnn) + "," + format_double(r.loss_mrgnn_am) + "," +
           format_double(r.delta_rel) + "," + format_double(r.time_mrgnn) + "," +
           format_double(r.time_mrgnn_am) + "," + format_double(r.delta_t) + "\n";
  return out;
}

}  // namespace mrgnn
