#include "mrgnn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <iostream>
#include <optional>

#include "mrgnn/annealer.hpp"
#include "mrgnn/config.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/graph.hpp"
#include "mrgnn/louvain.hpp"
#include "mrgnn/oracle.hpp"
#include "mrgnn/pipeline.hpp"
#include "mrgnn/qubo.hpp"
#include "mrgnn/report.hpp"
#include "text_util.hpp"

namespace mrgnn {

namespace {

struct SolveFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> variants;
  std::optional<std::string> problem;
  std::optional<std::size_t> am_limit;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> sweeps;
  std::optional<std::size_t> max_epochs;
  std::optional<std::size_t> samples;
};

int cmd_gen(std::size_t n, std::size_t d, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  Graph g = gen_d_regular(n, d, seed);
  save_edge_list(g, out_path);
  out << "wrote " << g.num_nodes() << " nodes, " << g.num_edges() << " edges to " << out_path << "\n";
  return 0;
}

int cmd_compress(const std::string& graph_path, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  Graph g = load_edge_list(graph_path);
  PipelineConfig pc;
  pc.seed = seed;
  Hierarchy h = compress(g, pc);
  save_hierarchy(h, out_dir);
  out << "levels:";
  for (const auto& l : h.levels) out << " " << l.graph.num_nodes();
  out << "\n";
  return 0;
}

int cmd_anneal(const std::string& qubo_path, const std::string& config_path, std::optional<std::uint64_t> seed,
               std::optional<std::size_t> restarts, std::optional<std::size_t> sweeps, std::ostream& out) {
  QuboMatrix q = load_qubo(qubo_path);
  AnnealConfig ac;
  ac.restarts = 50;
  if (!config_path.empty()) {
    // Accepts either a full experiment config or a bare annealer section.
    auto text = detail::read_file(config_path);
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError({"anneal config is not a JSON object"});
    if (j.contains("problem")) {
      ac = parse_experiment_config(text).pipeline.anneal;
    } else {
      nlohmann::json wrapped = {{"problem", "maxcut"}, {"graph", {{"n", 4}, {"d", 3}}}, {"am", j}};
      ac = parse_experiment_config(wrapped.dump()).pipeline.anneal;
    }
  }
  ac.var_limit = var_limit_from_env(ac.var_limit);
  if (seed) ac.seed = *seed;
  if (restarts) ac.restarts = *restarts;
  if (sweeps) ac.sweeps = *sweeps;
  AnnealResult r = solve_am(q, ac);
  out << "energy " << detail::format_double(r.energy_best) << "\n";
  out << "solution " << to_bitstring(r.x_best) << "\n";
  return 0;
}

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(f.config);
  auto& pc = cfg.pipeline;
  if (f.seed) pc.seed = *f.seed;
  if (f.out) cfg.output = *f.out;
  if (!f.variants.empty()) {
    cfg.variants.clear();
    for (const auto& v : f.variants) cfg.variants.push_back(parse_variant(v));
  }
  if (f.problem) pc.problem = parse_problem(*f.problem);
  if (f.am_limit) pc.am_limit = *f.am_limit;
  if (f.restarts) pc.anneal.restarts = *f.restarts;
  if (f.sweeps) pc.anneal.sweeps = *f.sweeps;
  if (f.max_epochs) pc.main.max_epochs = *f.max_epochs;
  if (f.samples) pc.samples = *f.samples;
  validate(cfg);

  Graph g;
  GraphDescriptor desc;
  if (cfg.graph.path) {
    g = load_edge_list(*cfg.graph.path);
    desc = describe(g, cfg.graph.seed, cfg.graph.path->string());
  } else {
    g = gen_d_regular(cfg.graph.n, cfg.graph.d, cfg.graph.seed);
    desc = describe(g, cfg.graph.seed, "d-regular");
  }
  std::optional<Hierarchy> h;
  if (cfg.hierarchy) h = load_hierarchy(g, *cfg.hierarchy);

  std::vector<RunReport> reports;
  for (Variant v : cfg.variants) {
    if (v != Variant::RGnn && !h) h = compress(g, pc);
    reports.push_back(solve_variant(v, g, pc, h ? &*h : nullptr, desc));
    const auto& r = reports.back();
    out << variant_name(v) << ": objective " << detail::format_double(r.objective) << ", violations "
        << r.metrics.violations << ", time " << detail::format_double(r.time_total) << "s\n";
  }
  EmitOptions eo;
  eo.scatter_nodes = cfg.scatter_nodes;
  eo.scatter_seed = pc.seed;
  emit_report(reports, cfg.output, eo);
  out << "reports written to " << cfg.output.string() << "\n";
  return 0;
}

int cmd_compare(const std::string& dir, std::ostream& out) {
  auto reports = load_report_dir(dir);
  auto rows = compare_reports(reports);
  if (rows.empty()) throw InvalidInput("no mrgnn / mrgnn+am report pairs found in " + dir);
  const std::string csv = comparison_csv(rows);
  detail::write_file(std::filesystem::path(dir) / "compare.csv", csv);
  out << csv;
  return 0;
}

int cmd_oracle(const std::string& graph_path, const std::string& problem, std::optional<double> penalty,
               const std::string& gp_mode, std::ostream& out) {
  Graph g = load_edge_list(graph_path);
  Problem p = parse_problem(problem);
  GpSignMode mode = gp_mode == "literal" ? GpSignMode::Literal : GpSignMode::Corrected;
  if (gp_mode != "literal" && gp_mode != "corrected") throw InvalidInput("gp mode must be corrected or literal");
  QuboMatrix q = build_qubo(p, g, penalty.value_or(default_penalty(p)), mode);
  OracleResult r = brute_force(q);
  out << "optimum " << detail::format_double(r.h_opt) << "\n";
  out << "optima " << r.optima_count << "\n";
  out << "solution " << to_bitstring(r.x_opt) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiresolution annealer-guided GNN solver toolkit", "mrgnn"};
  app.require_subcommand(1);

  std::size_t gen_n = 0, gen_d = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random d-regular graph");
  gen->add_option("n", gen_n, "node count")->required();
  gen->add_option("d", gen_d, "degree")->required();
  gen->add_option("seed", gen_seed, "seed")->required();
  gen->add_option("out", gen_out, "output edge list")->required();

  std::string cmp_graph, cmp_out = "hierarchy";
  std::uint64_t cmp_seed = 0;
  auto* comp = app.add_subcommand("compress", "Run Louvain and persist the hierarchy");
  comp->add_option("graph", cmp_graph, "edge list")->required();
  comp->add_option("--seed", cmp_seed, "seed");
  comp->add_option("--out", cmp_out, "output directory");

  std::string an_qubo, an_config;
  std::optional<std::uint64_t> an_seed;
  std::optional<std::size_t> an_restarts, an_sweeps;
  auto* anneal = app.add_subcommand("anneal", "Solve a serialized QUBO with momentum annealing");
  anneal->add_option("qubo", an_qubo, "QUBO triplet file")->required();
  anneal->add_option("--config", an_config, "JSON annealer settings");
  anneal->add_option("--seed", an_seed, "seed");
  anneal->add_option("--restarts", an_restarts, "restart count");
  anneal->add_option("--sweeps", an_sweeps, "sweeps per run");

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "Run solver variants and write reports");
  solve->add_option("--config", sf.config, "experiment config (JSON)")->required();
  solve->add_option("--seed", sf.seed, "master seed");
  solve->add_option("--out", sf.out, "output directory");
  solve->add_option("--variant", sf.variants, "rgnn, mrgnn or mrgnn+am (repeatable)");
  solve->add_option("--problem", sf.problem, "maxcut, mis or gp");
  solve->add_option("--am-limit", sf.am_limit, "largest level size handed to the annealer");
  solve->add_option("--restarts", sf.restarts, "annealer restarts");
  solve->add_option("--sweeps", sf.sweeps, "annealer sweeps");
  solve->add_option("--max-epochs", sf.max_epochs, "main solver epoch cap");
  solve->add_option("--samples", sf.samples, "main solver samples");

  std::string cmp_dir;
  auto* compare = app.add_subcommand("compare", "Tabulate delta_rel and delta_t across reports");
  compare->add_option("report-dir", cmp_dir, "directory written by solve")->required();

  std::string or_graph, or_problem, or_mode = "corrected";
  std::optional<double> or_penalty;
  auto* oracle = app.add_subcommand("oracle", "Brute-force a small instance");
  oracle->add_option("graph", or_graph, "edge list")->required();
  oracle->add_option("problem", or_problem, "maxcut, mis or gp")->required();
  oracle->add_option("--penalty", or_penalty, "penalty weight");
  oracle->add_option("--gp-mode", or_mode, "corrected or literal");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_d, gen_seed, gen_out, out);
    if (*comp) return cmd_compress(cmp_graph, cmp_seed, cmp_out, out);
    if (*anneal) return cmd_anneal(an_qubo, an_config, an_seed, an_restarts, an_sweeps, out);
    if (*solve) return cmd_solve(sf, out);
    if (*compare) return cmd_compare(cmp_dir, out);
    if (*oracle) return cmd_oracle(or_graph, or_problem, or_penalty, or_mode, out);
  } catch (const Error& e) {
    err << kind_name(e.kind()) << ": " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace mrgnn
