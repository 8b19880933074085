#pragma once

#include "mrgnn/graph.hpp"
#include "mrgnn/qubo.hpp"

namespace mrgnn {

inline constexpr std::size_t kBruteForceMaxN = 24;

struct OracleResult {
  Binary x_opt;
  double h_opt = 0.0;
  std::size_t optima_count = 0;
};

/// Exhaustive minimum over all 2^n assignments in Gray-code order. n <= 24.
OracleResult brute_force(const QuboMatrix& q);

/// Minimum-degree greedy independent set (ties: lowest id).
Binary greedy_mis(const Graph& g);

/// Combinatorial optima by direct subset enumeration, independent of any QUBO.
/// Unweighted edge counts; n <= 24.
std::size_t max_cut_value(const Graph& g);
std::size_t independence_number(const Graph& g);
/// Smallest cut among subsets of size floor(n/2) (equivalently ceil(n/2)).
std::size_t min_balanced_cut(const Graph& g);

}  // namespace mrgnn
