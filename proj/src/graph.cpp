#include "mrgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mrgnn/error.hpp"
#include "mrgnn/rng.hpp"
#include "text_util.hpp"

namespace mrgnn {

Graph::Graph(std::size_t n, std::vector<Edge> edges, bool self_loops_allowed)
    : n_(n), self_loops_allowed_(self_loops_allowed), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n_ ||
        static_cast<std::size_t>(e.v) >= n_)
      throw InvalidInput("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") out of range for " + std::to_string(n_) + " nodes");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw InvalidInput("edge weights must be positive and finite");
    if (e.u == e.v && !self_loops_allowed_)
      throw InvalidInput("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw InvalidInput("duplicate edge (" + std::to_string(edges_[i].u) + ", " +
                         std::to_string(edges_[i].v) + ")");

  loops_.assign(n_, 0.0);
  degrees_.assign(n_, 0.0);
  std::vector<std::size_t> count(n_, 0);
  for (const auto& e : edges_) {
    total_weight_ += e.w;
    if (e.u == e.v) {
      loops_[e.u] += e.w;
      degrees_[e.u] += 2.0 * e.w;
    } else {
      ++count[e.u];
      ++count[e.v];
      degrees_[e.u] += e.w;
      degrees_[e.v] += e.w;
    }
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + count[v];
  adj_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted, so each neighbor list comes out sorted by node id.
  for (const auto& e : edges_) {
    if (e.u == e.v) continue;
    adj_[fill[e.u]++] = {e.v, e.w};
  }
  for (const auto& e : edges_) {
    if (e.u == e.v) continue;
    adj_[fill[e.v]++] = {e.u, e.w};
  }
  for (std::size_t v = 0; v < n_; ++v)
    std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

Graph gen_d_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d >= n) throw InvalidInput("degree must be smaller than node count");
  if ((n * d) % 2 != 0) throw InvalidInput("n*d must be even");
  Rng rng(mix_seed(seed));
  std::vector<NodeId> stubs(n * d);
  for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<NodeId>(i / d);

  for (;;) {
    // Fisher-Yates with our own index draw so the result does not depend on
    // the standard library's shuffle implementation.
    for (std::size_t i = stubs.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
      std::swap(stubs[i - 1], stubs[j]);
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      NodeId a = std::min(stubs[i], stubs[i + 1]);
      NodeId b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || !seen.emplace(a, b).second) {
        ok = false;
        break;
      }
      edges.push_back({a, b, 1.0});
    }
    if (ok) return Graph(n, std::move(edges));
  }
}

std::vector<double> degrees(const Graph& g) {
  std::vector<double> out(g.num_nodes());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = g.degree(static_cast<NodeId>(v));
  return out;
}

Graph parse_edge_list(const std::string& text, bool self_loops_allowed) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (!have_n) {
      if (toks.size() != 1 || !detail::parse_number(toks[0], n))
        throw ParseError("expected node count", line_no);
      have_n = true;
      continue;
    }
    Edge e;
    if (toks.size() < 2 || toks.size() > 3 || !detail::parse_number(toks[0], e.u) ||
        !detail::parse_number(toks[1], e.v) ||
        (toks.size() == 3 && !detail::parse_number(toks[2], e.w)))
      throw ParseError("expected \"u v w\"", line_no);
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n)
      throw ParseError("node id out of range", line_no);
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw ParseError("weight must be positive", line_no);
    if (e.u == e.v && !self_loops_allowed) throw ParseError("self-loop not allowed", line_no);
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw ParseError("duplicate edge", line_no);
    edges.push_back(e);
  }
  if (!have_n) throw ParseError("missing node count", line_no == 0 ? 1 : line_no);
  return Graph(n, std::move(edges), self_loops_allowed);
}

std::string format_edge_list(const Graph& g) {
  std::string out = std::to_string(g.num_nodes()) + "\n";
  for (const auto& e : g.edges())
    out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + detail::format_double(e.w) + "\n";
  return out;
}

Graph load_edge_list(const std::filesystem::path& path, bool self_loops_allowed) {
  return parse_edge_list(detail::read_file(path), self_loops_allowed);
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  detail::write_file(path, format_edge_list(g));
}

}  // namespace mrgnn
