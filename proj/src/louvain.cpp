#include "mrgnn/louvain.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>

#include "mrgnn/error.hpp"
#include "mrgnn/rng.hpp"
#include "text_util.hpp"

namespace mrgnn {

Partition Partition::from_assignment(std::vector<NodeId> labels) {
  // Renumber densely in order of first appearance.
  std::map<NodeId, NodeId> remap;
  for (auto& l : labels) {
    auto [it, inserted] = remap.emplace(l, static_cast<NodeId>(remap.size()));
    l = it->second;
  }
  Partition p;
  p.k = remap.size();
  p.assignment = std::move(labels);
  return p;
}

double modularity(const Graph& g, const Partition& p) {
  const double m2 = 2.0 * g.total_weight();
  if (!(m2 > 0.0)) throw InvalidInput("modularity is undefined on a graph without edges");
  if (p.assignment.size() != g.num_nodes()) throw InvalidInput("partition size mismatch");
  std::vector<double> in(p.k, 0.0), tot(p.k, 0.0);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) tot[p.assignment[v]] += g.degree(static_cast<NodeId>(v));
  for (const auto& e : g.edges())
    if (p.assignment[e.u] == p.assignment[e.v]) in[p.assignment[e.u]] += 2.0 * e.w;
  double q = 0.0;
  for (std::size_t c = 0; c < p.k; ++c) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
  return q;
}

Graph coarsen(const Graph& g, const Partition& p) {
  if (p.assignment.size() != g.num_nodes()) throw InvalidInput("partition size mismatch");
  std::map<std::pair<NodeId, NodeId>, double> w;
  for (const auto& e : g.edges()) {
    NodeId a = p.assignment[e.u], b = p.assignment[e.v];
    if (a > b) std::swap(a, b);
    w[{a, b}] += e.w;
  }
  std::vector<Edge> edges;
  edges.reserve(w.size());
  for (const auto& [ab, weight] : w) edges.push_back({ab.first, ab.second, weight});
  return Graph(p.k, std::move(edges), true);
}

namespace {

/// One local-move phase on `g`. Returns the (renumbered) community assignment.
Partition local_moves(const Graph& g, std::uint64_t seed, const LouvainOptions& opt,
                      std::vector<double>* pass_q) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> comm(n);
  std::iota(comm.begin(), comm.end(), 0);
  const double m2 = 2.0 * g.total_weight();
  if (!(m2 > 0.0)) return Partition::from_assignment(std::move(comm));

  std::vector<double> tot(n), in(n);
  for (std::size_t v = 0; v < n; ++v) {
    tot[v] = g.degree(static_cast<NodeId>(v));
    in[v] = 2.0 * g.self_loop(static_cast<NodeId>(v));
  }
  auto current_q = [&] {
    double q = 0.0;
    for (std::size_t c = 0; c < n; ++c)
      if (tot[c] > 0.0 || in[c] > 0.0) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
    return q;
  };

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[j]);
  }

  std::vector<double> link(n, 0.0);
  std::vector<NodeId> touched;
  double q = current_q();
  if (pass_q) pass_q->push_back(q);
  for (std::size_t pass = 0; pass < opt.max_passes; ++pass) {
    std::size_t moves = 0;
    for (NodeId v : order) {
      const NodeId old = comm[v];
      const double k = g.degree(v);
      const double loop = g.self_loop(v);
      touched.clear();
      for (const auto& nb : g.neighbors(v)) {
        NodeId c = comm[nb.node];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += nb.w;
      }
      tot[old] -= k;
      in[old] -= 2.0 * link[old] + 2.0 * loop;

      const double stay_gain = link[old] - tot[old] * k / m2;
      NodeId best = old;
      bool found = false;
      double cand_gain = 0.0;
      NodeId cand = old;
      for (NodeId c : touched) {
        if (c == old) continue;
        double gain = link[c] - tot[c] * k / m2;
        if (!found || gain > cand_gain || (gain == cand_gain && c < cand)) {
          cand_gain = gain;
          cand = c;
          found = true;
        }
      }
      if (found && cand_gain > stay_gain) best = cand;
      tot[best] += k;
      in[best] += 2.0 * link[best] + 2.0 * loop;
      comm[v] = best;
      if (best != old) ++moves;
      for (NodeId c : touched) link[c] = 0.0;
    }
    double next = current_q();
    if (pass_q) pass_q->push_back(next);
    double gain = next - q;
    q = next;
    if (moves == 0 || gain < opt.tolerance) break;
  }
  return Partition::from_assignment(std::move(comm));
}

HierarchyLevel make_level(const Graph& fine, Partition p, const std::vector<NodeId>& prev_map) {
  HierarchyLevel level;
  level.graph = coarsen(fine, p);
  level.original_to_node.resize(prev_map.size());
  for (std::size_t v = 0; v < prev_map.size(); ++v)
    level.original_to_node[v] = p.assignment[prev_map[v]];
  level.members.assign(p.k, {});
  for (std::size_t v = 0; v < prev_map.size(); ++v)
    level.members[level.original_to_node[v]].push_back(static_cast<NodeId>(v));
  level.partition = std::move(p);
  return level;
}

}  // namespace

Hierarchy louvain_detect(const Graph& g, std::uint64_t seed, const LouvainOptions& opt,
                         LouvainTrace* trace) {
  if (g.num_nodes() == 0) throw InvalidInput("cannot decompose an empty graph");
  Hierarchy h;
  h.original_size = g.num_nodes();
  std::vector<NodeId> to_current(g.num_nodes());
  std::iota(to_current.begin(), to_current.end(), 0);
  const Graph* current = &g;
  for (std::size_t depth = 0;; ++depth) {
    std::vector<double> pass_q;
    Partition p = local_moves(*current, derive_seed(seed, depth), opt, &pass_q);
    if (p.k == current->num_nodes() && !h.levels.empty()) break;
    if (trace) trace->pass_modularity.push_back(std::move(pass_q));
    const bool merged = p.k < current->num_nodes();
    h.levels.push_back(make_level(*current, std::move(p), to_current));
    to_current = h.levels.back().original_to_node;
    current = &h.levels.back().graph;
    if (!merged) break;
  }
  return h;
}

std::vector<std::size_t> admissible_levels(const Hierarchy& h, std::size_t am_limit) {
  if (am_limit == 0) throw InvalidInput("annealer limit must be positive");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < h.levels.size(); ++i)
    if (h.levels[i].graph.num_nodes() <= am_limit) out.push_back(i);
  if (out.empty())
    std::clog << "warning: no hierarchy level fits under the annealer limit of " << am_limit
              << " nodes\n";
  return out;
}

Hierarchy hierarchy_from_partitions(const Graph& g, const std::vector<Partition>& parts) {
  Hierarchy h;
  h.original_size = g.num_nodes();
  std::vector<NodeId> to_current(g.num_nodes());
  std::iota(to_current.begin(), to_current.end(), 0);
  const Graph* current = &g;
  for (const auto& p : parts) {
    if (p.assignment.size() != current->num_nodes())
      throw InvalidInput("partition does not match level size");
    h.levels.push_back(make_level(*current, p, to_current));
    to_current = h.levels.back().original_to_node;
    current = &h.levels.back().graph;
  }
  return h;
}

void save_hierarchy(const Hierarchy& h, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < h.levels.size(); ++i) {
    const auto& level = h.levels[i];
    std::string part;
    for (std::size_t v = 0; v < level.partition.assignment.size(); ++v)
      part += std::to_string(v) + " " + std::to_string(level.partition.assignment[v]) + "\n";
    detail::write_file(dir / ("level_" + std::to_string(i) + ".part"), part);
    save_edge_list(level.graph, dir / ("level_" + std::to_string(i) + ".edges"));
  }
}

Hierarchy load_hierarchy(const Graph& g, const std::filesystem::path& dir) {
  std::vector<Partition> parts;
  std::size_t expected = g.num_nodes();
  for (std::size_t i = 0;; ++i) {
    auto path = dir / ("level_" + std::to_string(i) + ".part");
    if (!std::filesystem::exists(path)) break;
    std::string text = detail::read_file(path);
    std::vector<NodeId> labels(expected, -1);
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      auto toks = detail::split_ws(std::string_view(text.data() + pos, end - pos));
      pos = end + 1;
      ++line_no;
      if (toks.empty()) continue;
      std::size_t node = 0;
      NodeId c = 0;
      if (toks.size() != 2 || !detail::parse_number(toks[0], node) ||
          !detail::parse_number(toks[1], c) || node >= expected || c < 0)
        throw ParseError("expected \"node community\" in " + path.string(), line_no);
      labels[node] = c;
    }
    if (std::find(labels.begin(), labels.end(), -1) != labels.end())
      throw InvalidInput(path.string() + " does not assign every node");
    parts.push_back(Partition::from_assignment(std::move(labels)));
    expected = parts.back().k;
  }
  if (parts.empty()) throw IoError("no hierarchy levels found in " + dir.string());
  return hierarchy_from_partitions(g, parts);
}

}  // namespace mrgnn
