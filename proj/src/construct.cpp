#include "onng/construct.hpp"

#include <algorithm>
#include <numeric>

#include "onng/rng.hpp"
#include "onng/search.hpp"

namespace onng {

Graph construct_anng(const Dataset& data, int kc, double epsilon_c, std::uint64_t seed) {
  if (data.empty()) throw InvariantError("cannot build a graph over an empty dataset");
  if (kc <= 0) throw InvariantError("kc must be positive");
  if (epsilon_c < 0.0) throw InvariantError("construction epsilon must be nonnegative");

  Graph g(data.size());
  SearchParams params;
  params.k = kc;
  params.epsilon = epsilon_c;

  std::uint64_t state = seed;
  for (std::size_t o = 1; o < data.size(); ++o) {
    const int n_seeds = static_cast<int>(std::min<std::size_t>(10, o));
    const auto seeds = seeds_random(o, n_seeds, splitmix64(state));
    const SearchResult found = knn_search(g, data, seeds, data.vec(static_cast<NodeId>(o)), params);
    for (const Hit& h : found.hits) {
      const float length = static_cast<float>(h.distance);
      g.insert(static_cast<NodeId>(o), Edge{h.id, length});
      g.insert(h.id, Edge{static_cast<NodeId>(o), length});
    }
  }
  return g;
}

Graph construct_adjusted_graph(const Graph& g, int eo, int ei) {
  if (eo < 0 || ei < 0) throw InvariantError("degree budgets must be nonnegative");
  Graph out(g.node_count());
  const std::size_t scan = static_cast<std::size_t>(std::max(eo, ei));
  for (NodeId o = 0; o < g.node_count(); ++o) {
    const auto& edges = g.neighbors(o);
    const std::size_t limit = std::min(scan, edges.size());
    for (std::size_t p = 1; p <= limit; ++p) {
      const Edge& e = edges[p - 1];
      if (p <= static_cast<std::size_t>(eo)) out.insert(o, e);
      if (p <= static_cast<std::size_t>(ei)) out.insert(e.target, Edge{o, e.length});
    }
  }
  return out;
}

SacPhase1 sac_phase1(const Graph& g, int eo, int ei) {
  if (eo < 1 || ei < 1) throw InvariantError("constrained adjustment needs eo >= 1 and ei >= 1");
  const std::size_t n = g.node_count();
  const Graph gt = construct_adjusted_graph(g, 0, ei);

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return gt.neighbors(a).size() < gt.neighbors(b).size();
  });

  SacPhase1 out{Graph(n), std::vector<std::uint32_t>(n, 0)};
  std::vector<std::uint32_t> indeg(n, 0);
  for (NodeId o : order) {
    for (const Edge& e : gt.neighbors(o)) {
      const bool within_budget = indeg[e.target] < static_cast<std::uint32_t>(ei) &&
                                 out.graph.neighbors(o).size() < static_cast<std::size_t>(eo);
      const bool rescue = indeg[e.target] == 0;
      if (!within_budget && !rescue) continue;
      if (out.graph.insert(o, e)) {
        ++indeg[e.target];
        if (!within_budget) ++out.rescue_out[o];
      }
    }
  }
  return out;
}

Graph construct_adjusted_graph_with_constraint(const Graph& g, int eo, int ei) {
  Graph out = sac_phase1(g, eo, ei).graph;
  for (NodeId o = 0; o < g.node_count(); ++o) {
    for (const Edge& e : g.neighbors(o)) {
      if (out.neighbors(o).size() >= static_cast<std::size_t>(eo)) break;
      out.insert(o, e);
    }
  }
  return out;
}

namespace {

bool has_path_witness(const Graph& g, NodeId ns, NodeId nd, double direct_length, NodeId& witness,
                      float& second_leg) {
  for (const Edge& first : g.neighbors(ns)) {
    const Edge* back = g.find_edge(first.target, nd);
    if (back != nullptr && back->length < direct_length) {
      witness = first.target;
      second_leg = back->length;
      return true;
    }
  }
  return false;
}

}  // namespace

bool has_path(const Graph& g, NodeId ns, NodeId nd, double direct_length) {
  NodeId witness = 0;
  float second_leg = 0.0f;
  return has_path_witness(g, ns, nd, direct_length, witness, second_leg);
}

Graph adjust_path(const Graph& g, std::vector<PathRemoval>* removals) {
  const std::size_t n = g.node_count();
  Graph gp(n);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<NodeId> alive;
  for (NodeId i = 0; i < n; ++i) {
    if (!g.neighbors(i).empty()) alive.push_back(i);
  }

  while (!alive.empty()) {
    std::vector<NodeId> next;
    next.reserve(alive.size());
    for (NodeId src : alive) {
      const auto& edges = g.neighbors(src);
      const Edge& e = edges[cursor[src]];
      NodeId witness = 0;
      float second_leg = 0.0f;
      if (has_path_witness(gp, src, e.target, e.length, witness, second_leg)) {
        if (removals != nullptr) removals->push_back({src, e.target, e.length, witness, second_leg});
      } else {
        gp.insert(src, e);
      }
      if (++cursor[src] < edges.size()) next.push_back(src);
    }
    alive = std::move(next);
  }
  return gp;
}

Graph derive_aknng(const Graph& anng, int kc) {
  if (kc <= 0) throw InvariantError("kc must be positive");
  return construct_adjusted_graph(anng, kc, 0);
}

Graph adjust_graph(const Graph& aknng, int eo, int ei, bool constrained, bool path_adjust) {
  Graph adjusted = constrained ? construct_adjusted_graph_with_constraint(aknng, eo, ei)
                               : construct_adjusted_graph(aknng, eo, ei);
  return path_adjust ? adjust_path(adjusted) : adjusted;
}

Graph construct_graph(const Graph& anng, const ConstructionParams& params) {
  if (params.kc <= params.eo || params.kc <= params.ei)
    throw InvariantError("kc must exceed both degree budgets");
  const Graph aknng = derive_aknng(anng, params.kc);
  return adjust_graph(aknng, params.eo, params.ei, params.constrained, true);
}

}  // namespace onng
