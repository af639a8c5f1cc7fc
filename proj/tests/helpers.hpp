#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "onng/core.hpp"
#include "onng/rng.hpp"

namespace onng::test {

inline double next_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

inline Dataset make_random_dataset(std::size_t n, std::uint32_t dim, std::uint64_t seed,
                                   Metric metric = Metric::Euclidean) {
  Dataset data(dim, metric);
  data.reserve(n);
  std::uint64_t state = seed;
  std::vector<float> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& f : row) f = static_cast<float>(next_unit(state));
    data.add(row);
  }
  return data;
}

// Exact KNNG by full sort. Deliberately a different code path from the
// library's partial_sort scan so tests have an independent oracle.
inline Graph exact_knn_graph(const Dataset& data, int k) {
  const std::size_t n = data.size();
  Graph g(n);
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) {
    std::iota(order.begin(), order.end(), NodeId{0});
    std::vector<double> dist(n);
    for (NodeId v = 0; v < n; ++v) dist[v] = data.distance_between(u, v);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return a < b;
    });
    int added = 0;
    for (NodeId v : order) {
      if (v == u) continue;
      if (added == k) break;
      g.insert(u, Edge{v, static_cast<float>(dist[v])});
      ++added;
    }
  }
  return g;
}

// Arbitrary random digraph with true edge lengths, roughly `per_node` edges out.
inline Graph random_graph(const Dataset& data, int per_node, std::uint64_t seed) {
  const std::size_t n = data.size();
  Graph g(n);
  std::uint64_t state = seed;
  for (NodeId u = 0; u < n; ++u) {
    for (int j = 0; j < per_node; ++j) {
      const NodeId v = static_cast<NodeId>(splitmix64(state) % n);
      if (v == u) continue;
      g.insert(u, Edge{v, static_cast<float>(data.distance_between(u, v))});
    }
  }
  return g;
}

inline std::vector<NodeId> all_ids(std::size_t n) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  return ids;
}

}  // namespace onng::test
