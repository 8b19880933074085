#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mrgnn {

using NodeId = std::int32_t;

struct Edge {
  NodeId u;
  NodeId v;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  double w;
};

/// Undirected weighted graph, immutable after construction.
///
/// Edges are stored once in canonical form (u <= v), sorted. Adjacency is a CSR
/// index over both directions. Self-loops (only permitted on coarsened graphs)
/// are kept out of the neighbor lists and tracked per node instead.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::vector<Edge> edges, bool self_loops_allowed = false);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool self_loops_allowed() const noexcept { return self_loops_allowed_; }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  double self_loop(NodeId v) const { return loops_[v]; }

  /// Weighted degree; a self-loop contributes twice its weight.
  double degree(NodeId v) const { return degrees_[v]; }

  /// Sum of all edge weights, self-loops included once.
  double total_weight() const noexcept { return total_weight_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  bool self_loops_allowed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adj_;
  std::vector<double> loops_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
};

/// Random d-regular graph from the pairing model, restarting on any self-loop
/// or multi-edge.
Graph gen_d_regular(std::size_t n, std::size_t d, std::uint64_t seed);

std::vector<double> degrees(const Graph& g);

/// Text format: first line n, then one "u v w" line per edge.
Graph parse_edge_list(const std::string& text, bool self_loops_allowed = false);
std::string format_edge_list(const Graph& g);
Graph load_edge_list(const std::filesystem::path& path, bool self_loops_allowed = false);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

}  // namespace mrgnn
