#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrgnn/qubo.hpp"

namespace mrgnn {

inline constexpr std::size_t kDefaultVarLimit = 100000;

/// Reads MRGNN_VAR_LIMIT from the environment, falling back to `fallback`.
std::size_t var_limit_from_env(std::size_t fallback = kDefaultVarLimit);

struct AnnealConfig {
  std::size_t sweeps = 1000;
  std::size_t restarts = 1000;
  /// Unset temperatures come from the largest off-diagonal |q_ij|: s down to 0.2 s.
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::uint64_t seed = 0;
  std::size_t var_limit = kDefaultVarLimit;
  /// Final replica coupling; unset means 0.3 times the largest sparse off-diagonal row sum.
  std::optional<double> coupling_max;

  void validate() const;
};

struct AnnealResult {
  Binary x_best;
  double energy_best = 0.0;
  std::vector<double> energy_trace;  ///< best energy of each restart
  double elapsed = 0.0;              ///< seconds
};

/// Single-flip Metropolis annealing, one run.
AnnealResult simulated_anneal(const QuboMatrix& q, const AnnealConfig& cfg);

/// Two-replica momentum annealing, one run. Each sweep redraws every variable
/// of one replica in parallel against the frozen other replica; a coupling
/// term that grows linearly over the sweeps pulls the replicas together.
/// The dense uniform coupling is applied against the updating replica's own
/// running count.
AnnealResult momentum_anneal(const QuboMatrix& q, const AnnealConfig& cfg);

/// `cfg.restarts` momentum-annealing runs with per-restart seeds; keeps the best.
AnnealResult solve_am(const QuboMatrix& q, const AnnealConfig& cfg);

}  // namespace mrgnn
