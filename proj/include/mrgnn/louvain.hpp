#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mrgnn/graph.hpp"

namespace mrgnn {

/// Dense 0-based community assignment; every id in [0, k) is non-empty.
struct Partition {
  std::vector<NodeId> assignment;
  std::size_t k = 0;

  static Partition from_assignment(std::vector<NodeId> labels);
};

struct HierarchyLevel {
  Graph graph;                         ///< coarsened graph, one node per community
  Partition partition;                 ///< relative to the previous level (or the original graph)
  std::vector<NodeId> original_to_node;  ///< original node -> node of this level
  std::vector<std::vector<NodeId>> members;  ///< node of this level -> original nodes, sorted
};

/// Louvain output: levels ordered from finest to coarsest.
struct Hierarchy {
  std::size_t original_size = 0;
  std::vector<HierarchyLevel> levels;
};

struct LouvainOptions {
  double tolerance = 1e-7;
  std::size_t max_passes = 1000;
};

/// Per-pass modularity values of one level's local-move phase; exposed for tests.
struct LouvainTrace {
  std::vector<std::vector<double>> pass_modularity;
};

Hierarchy louvain_detect(const Graph& g, std::uint64_t seed, const LouvainOptions& opt = {},
                         LouvainTrace* trace = nullptr);

double modularity(const Graph& g, const Partition& p);

Graph coarsen(const Graph& g, const Partition& p);

/// Indices of levels with at most `am_limit` nodes, in order. Logs a warning when empty.
std::vector<std::size_t> admissible_levels(const Hierarchy& h, std::size_t am_limit);

/// Rebuilds a hierarchy from the original graph and per-level partitions.
Hierarchy hierarchy_from_partitions(const Graph& g, const std::vector<Partition>& parts);

/// Writes level_<i>.part ("node community" lines) and level_<i>.edges per level.
void save_hierarchy(const Hierarchy& h, const std::filesystem::path& dir);
Hierarchy load_hierarchy(const Graph& g, const std::filesystem::path& dir);

}  // namespace mrgnn
