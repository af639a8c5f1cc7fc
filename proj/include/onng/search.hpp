#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "onng/core.hpp"
#include "onng/vptree.hpp"

namespace onng {

/// Scan-cap growth for dynamic degree adjustment: 10^(we * epsilon) + e0.
/// Strictly increasing in epsilon; equals 1 + e0 at epsilon = 0.
inline double effective_edge_limit(double epsilon, int e0, double we) {
  return std::pow(10.0, we * epsilon) + static_cast<double>(e0);
}

struct DynamicDegree {
  int e0 = 30;
  double we = 20.0;
};

struct SearchParams {
  int k = 20;
  double epsilon = 0.1;
  /// Dynamic degree adjustment; mutually exclusive with max_edges_override.
  std::optional<DynamicDegree> dynamic;
  /// Explicit per-node scan cap; unset and no dynamic means unlimited.
  std::optional<int> max_edges_override;
  /// Debug: collect every node whose distance to the query was evaluated.
  bool record_evaluated = false;
};

struct Hit {
  NodeId id;
  double distance;
};

inline bool operator==(const Hit& a, const Hit& b) {
  return a.id == b.id && a.distance == b.distance;
}

struct SearchResult {
  /// Ascending by (distance, id); at most k entries.
  std::vector<Hit> hits;
  std::uint64_t distance_computations = 0;
  std::vector<NodeId> evaluated;  // filled only when record_evaluated
};

/// `count` distinct node ids drawn from [0, n_nodes), reproducible for a
/// given seed.
std::vector<NodeId> seeds_random(std::size_t n_nodes, int count, std::uint64_t rng_seed);

/// Best-first graph exploration from the given seeds. The frontier expands
/// while the nearest frontier node lies within radius * (1 + epsilon); each
/// node's edge list is scanned in stored order and cut off once the scan
/// count exceeds the edge cap. Edge-length reads are free; only
/// query-to-vector evaluations count toward distance_computations.
SearchResult knn_search(const Graph& g, const Dataset& data, std::span<const NodeId> seeds,
                        const float* q, const SearchParams& params);

/// Tree-seeded convenience wrapper; routing evaluations are included in the
/// result counter.
SearchResult knn_search_with_tree(const Graph& g, const Dataset& data, const VpTree& tree,
                                  const float* q, const SearchParams& params);

}  // namespace onng
