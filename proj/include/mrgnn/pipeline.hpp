#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrgnn/annealer.hpp"
#include "mrgnn/gnn.hpp"
#include "mrgnn/louvain.hpp"
#include "mrgnn/metrics.hpp"
#include "mrgnn/qubo.hpp"

namespace mrgnn {

enum class Variant { RGnn, MrGnn, MrGnnAm };

const char* variant_name(Variant v) noexcept;
Variant parse_variant(const std::string& s);

/// Which hierarchy levels feed the local solvers.
struct LevelsPolicy {
  enum class Kind { AllSmaller, AllAdmissible, Explicit };
  Kind kind = Kind::AllSmaller;
  std::vector<std::size_t> explicit_levels;
};

struct PipelineConfig {
  Problem problem = Problem::MaxCut;
  std::optional<double> penalty;  ///< unset: problem default
  GpSignMode gp_mode = GpSignMode::Corrected;
  AnnealConfig anneal;
  TrainConfig local = TrainConfig::local_defaults();
  TrainConfig main = TrainConfig::main_defaults();
  std::optional<std::size_t> am_limit;  ///< level admissibility; unset: anneal.var_limit
  LevelsPolicy levels;
  std::size_t samples = 5;
  std::uint64_t seed = 0;

  double effective_penalty() const { return penalty.value_or(default_penalty(problem)); }
  std::size_t effective_am_limit() const { return am_limit.value_or(anneal.var_limit); }
};

struct GraphDescriptor {
  std::size_t n = 0;
  std::size_t d = 0;  ///< 0 when the graph is not regular
  std::uint64_t seed = 0;
  std::string source;
};

struct RunReport {
  Variant variant = Variant::RGnn;
  Problem problem = Problem::MaxCut;
  GraphDescriptor graph;
  std::uint64_t master_seed = 0;
  double objective = 0.0;
  SolutionMetrics metrics;
  Binary solution;
  double time_local_am = 0.0;
  double time_local_gnn = 0.0;
  double time_main = 0.0;
  double time_total = 0.0;
  ShiftAnalysis shifts;
  std::vector<std::size_t> levels_used;
  std::size_t sample_index = 0;
  double final_loss = 0.0;  ///< relaxed training loss at the last epoch of the chosen sample
  TrainTrace trace;         ///< main-solver trace of the chosen sample
  std::vector<double> local_am_energies;
  std::vector<Binary> local_am_solutions;
  std::vector<Binary> local_gnn_solutions;
};

/// Deterministic seed streams derived from the master seed.
struct SeedPlan {
  std::uint64_t master;
  std::uint64_t louvain() const;
  std::uint64_t anneal(std::size_t level) const;
  std::uint64_t local(std::size_t level) const;
  std::uint64_t main(std::size_t sample) const;
};

Hierarchy compress(const Graph& g, const PipelineConfig& cfg);

/// Levels of `h` used under `cfg.levels`; empty when none is admissible.
std::vector<std::size_t> select_levels(const Hierarchy& h, const Graph& g, const PipelineConfig& cfg);

RunReport solve_rgnn(Problem problem, const Graph& g, const PipelineConfig& cfg,
                     const GraphDescriptor& desc = {});
RunReport solve_mrgnn(Problem problem, const Graph& g, const PipelineConfig& cfg,
                      const Hierarchy* hierarchy = nullptr, const GraphDescriptor& desc = {});
RunReport solve_mrgnn_am(Problem problem, const Graph& g, const PipelineConfig& cfg,
                         const Hierarchy* hierarchy = nullptr, const GraphDescriptor& desc = {});
RunReport solve_variant(Variant v, const Graph& g, const PipelineConfig& cfg,
                        const Hierarchy* hierarchy = nullptr, const GraphDescriptor& desc = {});

/// mrGNN+AM restricted to hierarchy level k.
RunReport level_ablation(Problem problem, const Graph& g, const PipelineConfig& cfg, std::size_t k,
                         const Hierarchy* hierarchy = nullptr, const GraphDescriptor& desc = {});

/// Absolute difference between the binarized objectives of a single-level run and an all-levels run.
double level_loss_difference(const RunReport& single, const RunReport& all);

GraphDescriptor describe(const Graph& g, std::uint64_t seed = 0, std::string source = {});

}  // namespace mrgnn
