#include "mrgnn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "mrgnn/error.hpp"
#include "mrgnn/mapping.hpp"
#include "mrgnn/rng.hpp"

namespace mrgnn {

const char* variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::RGnn: return "rgnn";
    case Variant::MrGnn: return "mrgnn";
    case Variant::MrGnnAm: return "mrgnn+am";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "rgnn" || s == "rGNN") return Variant::RGnn;
  if (s == "mrgnn" || s == "mrGNN") return Variant::MrGnn;
  if (s == "mrgnn+am" || s == "mrGNN+AM" || s == "mrgnn_am") return Variant::MrGnnAm;
  throw InvalidInput("unknown variant '" + s + "' (expected rgnn, mrgnn or mrgnn+am)");
}

std::uint64_t SeedPlan::louvain() const { return derive_seed(master, 1); }
std::uint64_t SeedPlan::anneal(std::size_t level) const { return derive_seed(master, 100 + level); }
std::uint64_t SeedPlan::local(std::size_t level) const { return derive_seed(master, 10000 + level); }
std::uint64_t SeedPlan::main(std::size_t sample) const { return derive_seed(master, 1000000 + sample); }

GraphDescriptor describe(const Graph& g, std::uint64_t seed, std::string source) {
  GraphDescriptor d{g.num_nodes(), 0, seed, std::move(source)};
  if (g.num_nodes() > 0) {
    const auto d0 = g.neighbors(0).size();
    bool regular = true;
    for (std::size_t v = 0; v < g.num_nodes() && regular; ++v)
      regular = g.neighbors(static_cast<NodeId>(v)).size() == d0 && g.self_loop(static_cast<NodeId>(v)) == 0.0;
    if (regular) d.d = d0;
  }
  return d;
}

Hierarchy compress(const Graph& g, const PipelineConfig& cfg) {
  return louvain_detect(g, SeedPlan{cfg.seed}.louvain());
}

std::vector<std::size_t> select_levels(const Hierarchy& h, const Graph& g, const PipelineConfig& cfg) {
  std::vector<std::size_t> admissible = admissible_levels(h, cfg.effective_am_limit());
  switch (cfg.levels.kind) {
    case LevelsPolicy::Kind::AllAdmissible:
      return admissible;
    case LevelsPolicy::Kind::AllSmaller: {
      std::vector<std::size_t> out;
      for (auto i : admissible)
        if (h.levels[i].graph.num_nodes() < g.num_nodes()) out.push_back(i);
      return out;
    }
    case LevelsPolicy::Kind::Explicit:
      for (auto i : cfg.levels.explicit_levels)
        if (std::find(admissible.begin(), admissible.end(), i) == admissible.end())
          throw InvalidInput("hierarchy level " + std::to_string(i) + " is not admissible");
      return cfg.levels.explicit_levels;
  }
  return admissible;
}

namespace {

constexpr double kTieBreak = 0.1;

struct Candidate {
  MainResult result;
  SolutionMetrics metrics;
  std::size_t sample;
};

/// Prefers zero-violation runs with the lowest objective, then fewest violations.
bool better(const Candidate& a, const Candidate& b) {
  const bool a_ok = a.metrics.violations == 0, b_ok = b.metrics.violations == 0;
  if (a_ok != b_ok) return a_ok;
  if (!a_ok && a.metrics.violations != b.metrics.violations) return a.metrics.violations < b.metrics.violations;
  return a.metrics.objective < b.metrics.objective;
}

void run_main(RunReport& report, const Graph& g, const QuboMatrix& q,
              const std::optional<FeatureMatrix>& features, const PipelineConfig& cfg) {
  if (cfg.samples < 1) throw InvalidInput("samples must be >= 1");
  const SeedPlan seeds{cfg.seed};
  std::optional<Candidate> best;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    TrainConfig tc = cfg.main;
    tc.seed = seeds.main(s);
    // Degree-share mapping hands structurally identical nodes of one community
    // identical rows, and an equivariant GNN can never split them. A small
    // per-sample perturbation breaks those ties without drowning R.
    std::optional<FeatureMatrix> f = features;
    if (f) *f += kTieBreak * init_features(g.num_nodes(), static_cast<std::size_t>(f->cols()), derive_seed(tc.seed, 1));
    Candidate c{train_main(g, q, f, tc), {}, s};
    c.metrics = evaluate(report.problem, g, c.result.x, cfg.effective_penalty(), cfg.gp_mode);
    report.time_main += c.result.trace.elapsed;
    if (!best || better(c, *best)) best = std::move(c);
  }
  report.solution = std::move(best->result.x);
  report.metrics = best->metrics;
  report.objective = hamiltonian(q, report.solution);
  report.sample_index = best->sample;
  report.trace = std::move(best->result.trace);
  report.final_loss = report.trace.losses.empty() ? 0.0 : report.trace.losses.back();
  if (report.trace.snapshots.size() >= 2) report.shifts = shift_analysis(report.trace);
  report.time_total = report.time_local_am + report.time_local_gnn + report.time_main;
}

RunReport multires(Variant variant, Problem problem, const Graph& g, const PipelineConfig& cfg,
                   const Hierarchy* hierarchy, const GraphDescriptor& desc,
                   std::optional<std::vector<std::size_t>> forced_levels = std::nullopt) {
  Hierarchy local_h;
  if (!hierarchy) {
    local_h = compress(g, cfg);
    hierarchy = &local_h;
  }
  std::vector<std::size_t> levels = forced_levels ? *forced_levels : select_levels(*hierarchy, g, cfg);
  if (levels.empty()) {
    std::clog << "warning: no admissible hierarchy levels; falling back to rgnn\n";
    RunReport r = solve_rgnn(problem, g, cfg, desc);
    r.variant = variant;
    return r;
  }

  const SeedPlan seeds{cfg.seed};
  const double penalty = cfg.effective_penalty();
  RunReport report;
  report.variant = variant;
  report.problem = problem;
  report.graph = desc.n ? desc : describe(g);
  report.master_seed = cfg.seed;
  report.levels_used = levels;

  const std::vector<double> deg = degrees(g);
  std::vector<ResolutionFeatures> parts;
  for (std::size_t level : levels) {
    const Graph& gi = hierarchy->levels.at(level).graph;
    const QuboMatrix qi = build_qubo(problem, gi, penalty, cfg.gp_mode);
    Binary x_am;
    TrainConfig tc = cfg.local;
    tc.seed = seeds.local(level);
    if (variant == Variant::MrGnnAm) {
      AnnealConfig ac = cfg.anneal;
      ac.seed = seeds.anneal(level);
      AnnealResult am = solve_am(qi, ac);
      report.time_local_am += am.elapsed;
      report.local_am_energies.push_back(am.energy_best);
      x_am = am.x_best;
      report.local_am_solutions.push_back(std::move(am.x_best));
    } else {
      tc.mse_weight = 0.0;
    }
    LocalResult local = train_local(gi, qi, x_am, tc);
    report.time_local_gnn += local.trace.elapsed;
    report.local_gnn_solutions.push_back(std::move(local.x_local));
    parts.push_back(distribute(*hierarchy, level, local.embeddings, deg));
  }
  FeatureMatrix r = aggregate(parts);
  // Local embeddings are unbounded; bring R into the range of fresh random
  // features so the main solver's sigmoid head does not start saturated.
  if (const double m = r.cwiseAbs().maxCoeff(); m > 0.0)
    r *= 1.0 / (std::sqrt(static_cast<double>(r.cols())) * m);
  run_main(report, g, build_qubo(problem, g, penalty, cfg.gp_mode), r, cfg);
  return report;
}

}  // namespace

RunReport solve_rgnn(Problem problem, const Graph& g, const PipelineConfig& cfg,
                     const GraphDescriptor& desc) {
  RunReport report;
  report.variant = Variant::RGnn;
  report.problem = problem;
  report.graph = desc.n ? desc : describe(g);
  report.master_seed = cfg.seed;
  run_main(report, g, build_qubo(problem, g, cfg.effective_penalty(), cfg.gp_mode), std::nullopt, cfg);
  return report;
}

RunReport solve_mrgnn(Problem problem, const Graph& g, const PipelineConfig& cfg,
                      const Hierarchy* hierarchy, const GraphDescriptor& desc) {
  return multires(Variant::MrGnn, problem, g, cfg, hierarchy, desc);
}

RunReport solve_mrgnn_am(Problem problem, const Graph& g, const PipelineConfig& cfg,
                         const Hierarchy* hierarchy, const GraphDescriptor& desc) {
  return multires(Variant::MrGnnAm, problem, g, cfg, hierarchy, desc);
}

RunReport solve_variant(Variant v, const Graph& g, const PipelineConfig& cfg,
                        const Hierarchy* hierarchy, const GraphDescriptor& desc) {
  switch (v) {
    case Variant::RGnn: return solve_rgnn(cfg.problem, g, cfg, desc);
    case Variant::MrGnn: return solve_mrgnn(cfg.problem, g, cfg, hierarchy, desc);
    case Variant::MrGnnAm: return solve_mrgnn_am(cfg.problem, g, cfg, hierarchy, desc);
  }
  throw InvalidInput("unknown variant");
}

RunReport level_ablation(Problem problem, const Graph& g, const PipelineConfig& cfg, std::size_t k,
                         const Hierarchy* hierarchy, const GraphDescriptor& desc) {
  Hierarchy local_h;
  if (!hierarchy) {
    local_h = compress(g, cfg);
    hierarchy = &local_h;
  }
  auto admissible = admissible_levels(*hierarchy, cfg.effective_am_limit());
  if (std::find(admissible.begin(), admissible.end(), k) == admissible.end())
    throw InvalidInput("level " + std::to_string(k) + " is not an admissible hierarchy level");
  return multires(Variant::MrGnnAm, problem, g, cfg, hierarchy, desc, std::vector<std::size_t>{k});
}

double level_loss_difference(const RunReport& single, const RunReport& all) {
  return std::abs(single.objective - all.objective);
}

}  // namespace mrgnn
