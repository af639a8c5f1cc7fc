#include "onng/vptree.hpp"

#include <algorithm>
#include <utility>

#include "onng/rng.hpp"

namespace onng {

VpTree VpTree::build(const Dataset& data, std::uint64_t build_seed) {
  if (data.empty()) throw InvariantError("vp-tree over empty dataset");
  VpTree tree;
  std::vector<NodeId> all(data.size());
  for (NodeId i = 0; i < data.size(); ++i) all[i] = i;
  std::uint64_t rng_state = build_seed;
  tree.build_partition(data, std::move(all), rng_state);
  return tree;
}

std::int32_t VpTree::build_partition(const Dataset& data, std::vector<NodeId> members,
                                     std::uint64_t& rng_state) {
  const std::int32_t index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();

  const NodeId pivot = members[splitmix64(rng_state) % members.size()];

  if (members.size() > kLeafCapacity) {
    std::vector<std::pair<double, NodeId>> by_dist;
    by_dist.reserve(members.size());
    for (NodeId m : members) by_dist.emplace_back(data.distance_between(pivot, m), m);
    std::sort(by_dist.begin(), by_dist.end());

    const double radius = by_dist[by_dist.size() / 2].first;
    // Inner takes strictly-closer members so routing (d < radius goes inner)
    // agrees with the split. All-ties collapse to a leaf.
    std::size_t split = 0;
    while (split < by_dist.size() && by_dist[split].first < radius) ++split;
    if (split > 0) {
      std::vector<NodeId> inner, outer;
      inner.reserve(split);
      outer.reserve(by_dist.size() - split);
      for (std::size_t i = 0; i < split; ++i) inner.push_back(by_dist[i].second);
      for (std::size_t i = split; i < by_dist.size(); ++i) outer.push_back(by_dist[i].second);

      nodes_[index].pivot = pivot;
      nodes_[index].radius = radius;
      const std::int32_t inner_index = build_partition(data, std::move(inner), rng_state);
      const std::int32_t outer_index = build_partition(data, std::move(outer), rng_state);
      nodes_[index].inner = inner_index;
      nodes_[index].outer = outer_index;
      return index;
    }
  }

  // Leaf: cache the members nearest the pivot as seeds.
  std::vector<std::pair<double, NodeId>> by_dist;
  by_dist.reserve(members.size());
  for (NodeId m : members) by_dist.emplace_back(data.distance_between(pivot, m), m);
  std::sort(by_dist.begin(), by_dist.end());

  Node& leaf = nodes_[index];
  leaf.pivot = pivot;
  leaf.members = std::move(members);
  const std::size_t take = std::min(kSeedsPerLeaf, by_dist.size());
  leaf.seeds.reserve(take);
  for (std::size_t i = 0; i < take; ++i) leaf.seeds.push_back(by_dist[i].second);
  return index;
}

VpTree VpTree::from_nodes(std::vector<Node> nodes) {
  VpTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

SeedPick VpTree::route(const Dataset& data, const float* q) const {
  if (nodes_.empty()) throw InvariantError("vp-tree is empty");
  SeedPick pick;
  std::int32_t at = 0;
  while (nodes_[at].inner >= 0) {
    const Node& node = nodes_[at];
    const double d = data.distance_to(q, node.pivot);
    ++pick.computations;
    at = d < node.radius ? node.inner : node.outer;
  }
  pick.ids = nodes_[at].seeds;
  return pick;
}

}  // namespace onng
