#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "onng/core.hpp"

namespace onng {

/// Hash table size for n nodes: 2^floor((floor(log2 n) + b) / 2).
/// Power of two so the hash reduces to one mask operation.
inline std::uint64_t hash_size(std::uint64_t n, unsigned b = 11) {
  if (n == 0) throw InvariantError("hash_size requires n >= 1");
  unsigned log2n = 0;
  while ((n >> (log2n + 1)) != 0) ++log2n;
  return std::uint64_t{1} << ((log2n + b) / 2);
}

/// Per-query visited-node set: an open hash table whose first entrant for a
/// slot lives in a flat array and later colliders go to the slot's overflow
/// list. Membership checks hit the array in the common case.
class VisitedSet {
 public:
  explicit VisitedSet(std::uint64_t node_count, unsigned b = 11)
      : mask_(hash_size(node_count, b) - 1),
        slots_(mask_ + 1, kEmpty),
        overflow_(mask_ + 1) {}

  void mark(NodeId i) {
    const std::uint64_t h = i & mask_;
    NodeId& slot = slots_[h];
    if (slot == kEmpty) {
      slot = i;
      return;
    }
    if (slot == i) return;
    auto& list = overflow_[h];
    for (NodeId v : list) {
      if (v == i) return;
    }
    list.push_back(i);
  }

  bool is_marked(NodeId i) const {
    const std::uint64_t h = i & mask_;
    if (slots_[h] == i) return true;
    for (NodeId v : overflow_[h]) {
      if (v == i) return true;
    }
    return false;
  }

  std::uint64_t table_size() const { return mask_ + 1; }

 private:
  static constexpr NodeId kEmpty = std::numeric_limits<NodeId>::max();

  std::uint64_t mask_;
  std::vector<NodeId> slots_;
  std::vector<std::vector<NodeId>> overflow_;
};

}  // namespace onng
