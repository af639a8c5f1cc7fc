#include <cstdint>
#include <unordered_set>

#include "doctest.h"
#include "onng/rng.hpp"
#include "onng/visited.hpp"

using namespace onng;

TEST_CASE("hash size formula") {
  CHECK(hash_size(1) == 32);
  CHECK(hash_size(2048) == 2048);
  CHECK(hash_size(1000000) == 32768);
  CHECK_THROWS_AS(hash_size(0), InvariantError);
  // Power of two for a spread of inputs.
  for (std::uint64_t n : {1ull, 2ull, 3ull, 100ull, 4095ull, 4096ull, 1000000000ull}) {
    const std::uint64_t s = hash_size(n);
    CHECK((s & (s - 1)) == 0);
  }
}

TEST_CASE("marking uses the slot first and the overflow list after") {
  // node_count 2048 gives table size 2048, so 3 and 2051 share slot 3.
  VisitedSet set(2048);
  REQUIRE(set.table_size() == 2048);

  CHECK_FALSE(set.is_marked(7));
  set.mark(5);
  CHECK(set.is_marked(5));

  set.mark(3);
  set.mark(2051);
  CHECK(set.is_marked(3));
  CHECK(set.is_marked(2051));
  CHECK_FALSE(set.is_marked(4099));  // same slot, never marked

  set.mark(3);  // idempotent
  CHECK(set.is_marked(3));
}

TEST_CASE("matches an abstract set over mixed operations") {
  const std::uint64_t n = 100000;
  VisitedSet set(n);
  std::unordered_set<NodeId> oracle;
  std::uint64_t state = 42;
  for (int op = 0; op < 200000; ++op) {
    const NodeId id = static_cast<NodeId>(splitmix64(state) % n);
    if (splitmix64(state) & 1) {
      set.mark(id);
      oracle.insert(id);
    } else {
      CHECK(set.is_marked(id) == (oracle.count(id) > 0));
    }
  }
}

TEST_CASE("forced collision chains stay consistent") {
  VisitedSet set(2048);
  const std::uint64_t s = set.table_size();
  std::unordered_set<NodeId> oracle;
  // Many ids congruent mod s pile onto one slot's list.
  for (NodeId i = 0; i < 40; ++i) {
    const NodeId id = 5 + static_cast<NodeId>(i * s);
    if (i % 3 != 0) {
      set.mark(id);
      oracle.insert(id);
    }
  }
  for (NodeId i = 0; i < 40; ++i) {
    const NodeId id = 5 + static_cast<NodeId>(i * s);
    CHECK(set.is_marked(id) == (oracle.count(id) > 0));
  }
}
