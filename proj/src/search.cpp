#include "onng/search.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>

#include "onng/rng.hpp"
#include "onng/visited.hpp"

namespace onng {

std::vector<NodeId> seeds_random(std::size_t n_nodes, int count, std::uint64_t rng_seed) {
  const std::size_t n = n_nodes;
  if (count <= 0) throw InvariantError("seed count must be positive");
  if (static_cast<std::size_t>(count) > n) throw InvariantError("more seeds requested than nodes");

  std::uint64_t state = rng_seed;
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(count));
  if (static_cast<std::size_t>(count) * 4 < n) {
    while (out.size() < static_cast<std::size_t>(count)) {
      const NodeId cand = static_cast<NodeId>(splitmix64(state) % n);
      if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
    }
    return out;
  }
  // Dense request: partial Fisher-Yates avoids rejection stalls.
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    const std::size_t j = i + splitmix64(state) % (n - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(static_cast<std::size_t>(count));
  return ids;
}

SearchResult knn_search(const Graph& g, const Dataset& data, std::span<const NodeId> seeds,
                        const float* q, const SearchParams& params) {
  if (g.node_count() != data.size()) throw InvariantError("graph and dataset sizes differ");
  if (params.k <= 0) throw InvariantError("k must be positive");
  if (params.epsilon <= -1.0) throw InvariantError("epsilon must exceed -1");
  if (params.dynamic && params.max_edges_override)
    throw InvariantError("dynamic degree and an explicit edge cap are mutually exclusive");
  if (seeds.empty()) throw InvariantError("no seeds");

  const double cap =
      params.dynamic ? effective_edge_limit(params.epsilon, params.dynamic->e0, params.dynamic->we)
      : params.max_edges_override ? static_cast<double>(*params.max_edges_override)
                                  : std::numeric_limits<double>::infinity();
  const double factor = 1.0 + params.epsilon;
  const std::size_t want = static_cast<std::size_t>(params.k);

  SearchResult out;
  VisitedSet visited(g.node_count());

  // Result pool keeps the current worst on top; radius is the k-th best
  // distance once the pool is full, infinite before that.
  auto worse = [](const Hit& a, const Hit& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  };
  std::priority_queue<Hit, std::vector<Hit>, decltype(worse)> pool(worse);
  double radius = std::numeric_limits<double>::infinity();
  auto offer = [&](NodeId id, double d) {
    if (pool.size() < want) {
      pool.push({id, d});
      if (pool.size() == want) radius = pool.top().distance;
    } else if (d < radius || (d == radius && id < pool.top().id)) {
      pool.pop();
      pool.push({id, d});
      radius = pool.top().distance;
    }
  };

  using FrontierEntry = std::pair<double, NodeId>;
  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, std::greater<>> frontier;

  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw InvariantError("seed id out of range");
    if (visited.is_marked(s)) continue;
    visited.mark(s);
    const double d = data.distance_to(q, s);
    ++out.distance_computations;
    if (params.record_evaluated) out.evaluated.push_back(s);
    frontier.emplace(d, s);
    offer(s, d);
  }

  while (!frontier.empty()) {
    const auto [d_s, s] = frontier.top();
    frontier.pop();
    if (d_s > radius * factor) break;
    const auto& edges = g.neighbors(s);
    for (std::size_t j = 0; j < edges.size(); ++j) {
      // The scan counter advances over visited neighbors too; the cap is a
      // real number and is not rounded.
      if (static_cast<double>(j + 1) > cap) break;
      const NodeId n = edges[j].target;
      if (visited.is_marked(n)) continue;
      visited.mark(n);
      const double d = data.distance_to(q, n);
      ++out.distance_computations;
      if (params.record_evaluated) out.evaluated.push_back(n);
      if (d <= radius * factor) frontier.emplace(d, n);
      offer(n, d);
    }
  }

  out.hits.resize(pool.size());
  for (std::size_t i = pool.size(); i-- > 0;) {
    out.hits[i] = pool.top();
    pool.pop();
  }
  return out;
}

SearchResult knn_search_with_tree(const Graph& g, const Dataset& data, const VpTree& tree,
                                  const float* q, const SearchParams& params) {
  const SeedPick pick = tree.route(data, q);
  SearchResult res = knn_search(g, data, pick.ids, q, params);
  res.distance_computations += pick.computations;
  return res;
}

}  // namespace onng
