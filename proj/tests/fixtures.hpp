#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mrgnn/graph.hpp"

namespace fixtures {

using mrgnn::Edge;
using mrgnn::Graph;
using mrgnn::NodeId;

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({NodeId(i), NodeId(i + 1), 1.0});
  return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({NodeId(i), NodeId((i + 1) % n), 1.0});
  return Graph(n, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({NodeId(i), NodeId(j), 1.0});
  return Graph(n, e);
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.push_back({i, (i + 1) % 5, 1.0});          // outer cycle
    e.push_back({i, i + 5, 1.0});                // spokes
    e.push_back({5 + i, 5 + (i + 2) % 5, 1.0});  // inner pentagram
  }
  return Graph(10, e);
}

/// Two k-cliques (nodes 0..k-1 and k..2k-1) joined by the edge (k-1, k).
inline Graph two_cliques(std::size_t k) {
  std::vector<Edge> e;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) e.push_back({NodeId(c * k + i), NodeId(c * k + j), 1.0});
  e.push_back({NodeId(k - 1), NodeId(k), 1.0});
  return Graph(2 * k, e);
}

/// Two disjoint triangles, optionally bridged by (2, 3).
inline Graph two_triangles(bool bridge) {
  std::vector<Edge> e{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}};
  if (bridge) e.push_back({2, 3, 1.0});
  return Graph(6, e);
}

/// Erdos-Renyi G(n, p).
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < p) e.push_back({NodeId(i), NodeId(j), 1.0});
  return Graph(n, e);
}

/// Mixed structures for property suites: random, cycles, paths, regular.
inline Graph mixed_graph(std::size_t n, std::uint64_t seed) {
  switch (seed % 4) {
    case 0: return random_graph(n, 0.3, seed);
    case 1: return random_graph(n, 0.6, seed);
    case 2: return cycle(n);
    default: return (n * 3) % 2 == 0 ? mrgnn::gen_d_regular(n, 3, seed) : path(n);
  }
}

}  // namespace fixtures
