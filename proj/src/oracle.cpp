#include "mrgnn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "mrgnn/error.hpp"

namespace mrgnn {

OracleResult brute_force(const QuboMatrix& q) {
  const std::size_t n = q.size();
  if (n > kBruteForceMaxN)
    throw InvalidInput("brute force is capped at " + std::to_string(kBruteForceMaxN) + " variables");
  Binary x(n, 0);
  std::size_t ones = 0;
  double h = q.offset();
  OracleResult best{x, h, 1};
  double scale = 1.0;
  for (const auto& t : q.entries()) scale = std::max(scale, std::abs(t.q));
  const double eps = 1e-9 * scale * static_cast<double>(std::max<std::size_t>(n, 1));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto i = static_cast<std::size_t>(std::countr_zero(k));
    h += flip_delta(q, x, i, ones);
    ones = x[i] ? ones - 1 : ones + 1;
    x[i] ^= 1;
    if (h < best.h_opt - eps) {
      best = {x, h, 1};
    } else if (h <= best.h_opt + eps) {
      ++best.optima_count;
    }
  }
  best.h_opt = hamiltonian(q, best.x_opt);
  return best;
}

Binary greedy_mis(const Graph& g) {
  const std::size_t n = g.num_nodes();
  Binary x(n, 0);
  std::vector<std::uint8_t> removed(n, 0);
  std::vector<std::size_t> deg(n);
  std::set<std::pair<std::size_t, NodeId>> queue;  // (current degree, id)
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = g.neighbors(static_cast<NodeId>(v)).size();
    queue.emplace(deg[v], static_cast<NodeId>(v));
  }
  auto drop = [&](NodeId v) {
    queue.erase({deg[v], v});
    removed[v] = 1;
  };
  while (!queue.empty()) {
    const NodeId v = queue.begin()->second;
    x[v] = 1;
    drop(v);
    for (const auto& nb : g.neighbors(v)) {
      if (removed[nb.node]) continue;
      drop(nb.node);
      for (const auto& nb2 : g.neighbors(nb.node)) {
        if (removed[nb2.node]) continue;
        queue.erase({deg[nb2.node], nb2.node});
        queue.emplace(--deg[nb2.node], nb2.node);
      }
    }
  }
  return x;
}

namespace {

template <class Fn>
void for_each_subset(const Graph& g, Fn&& fn) {
  const std::size_t n = g.num_nodes();
  if (n > kBruteForceMaxN) throw InvalidInput("subset enumeration is capped at 24 nodes");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) fn(mask);
}

std::size_t cut_of(const Graph& g, std::uint64_t mask) {
  std::size_t c = 0;
  for (const auto& e : g.edges())
    if (e.u != e.v && (((mask >> e.u) ^ (mask >> e.v)) & 1)) ++c;
  return c;
}

}  // namespace

std::size_t max_cut_value(const Graph& g) {
  std::size_t best = 0;
  for_each_subset(g, [&](std::uint64_t m) { best = std::max(best, cut_of(g, m)); });
  return best;
}

std::size_t independence_number(const Graph& g) {
  std::size_t best = 0;
  for_each_subset(g, [&](std::uint64_t m) {
    for (const auto& e : g.edges())
      if (e.u != e.v && ((m >> e.u) & 1) && ((m >> e.v) & 1)) return;
    best = std::max(best, static_cast<std::size_t>(std::popcount(m)));
  });
  return best;
}

std::size_t min_balanced_cut(const Graph& g) {
  const std::size_t half = g.num_nodes() / 2;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for_each_subset(g, [&](std::uint64_t m) {
    if (static_cast<std::size_t>(std::popcount(m)) == half) best = std::min(best, cut_of(g, m));
  });
  return best;
}

}  // namespace mrgnn
