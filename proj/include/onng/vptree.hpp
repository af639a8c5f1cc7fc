#pragma once

#include <cstdint>
#include <vector>

#include "onng/core.hpp"

namespace onng {

/// Seed ids plus the distance evaluations spent picking them.
struct SeedPick {
  std::vector<NodeId> ids;
  std::uint64_t computations = 0;
};

/// Vantage-point tree over a dataset. Internal nodes route by
/// pivot-distance-vs-radius; leaves hold up to 100 members and cache the 10
/// members nearest their pivot as search seeds.
class VpTree {
 public:
  static constexpr std::size_t kLeafCapacity = 100;
  static constexpr std::size_t kSeedsPerLeaf = 10;

  struct Node {
    NodeId pivot = 0;
    double radius = 0.0;           // internal only
    std::int32_t inner = -1;       // child index; -1 on both marks a leaf
    std::int32_t outer = -1;
    std::vector<NodeId> members;   // leaf only
    std::vector<NodeId> seeds;     // leaf only
  };

  /// Builds the tree; pivot choices are drawn from `build_seed`.
  static VpTree build(const Dataset& data, std::uint64_t build_seed = 0);

  /// Restores a tree from serialized nodes (root at index 0).
  static VpTree from_nodes(std::vector<Node> nodes);

  /// Routes q from the root to one leaf and returns that leaf's cached
  /// seeds; computations equals the number of internal pivots evaluated.
  SeedPick route(const Dataset& data, const float* q) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }

 private:
  std::int32_t build_partition(const Dataset& data, std::vector<NodeId> members,
                               std::uint64_t& rng_state);

  std::vector<Node> nodes_;
};

}  // namespace onng
