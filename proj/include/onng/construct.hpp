#pragma once

#include <cstdint>
#include <vector>

#include "onng/core.hpp"

namespace onng {

struct ConstructionParams {
  int kc = 50;          // truncated neighbor count per node
  double epsilon_c = 0.1;
  int eo = 10;          // expected outdegree
  int ei = 40;          // expected indegree
  bool constrained = false;
};

/// Incremental neighborhood-graph build: nodes enter in dataset order, each
/// searched on the partial graph (k = kc, unlimited per-node scan, random
/// seeds) and linked to its results in both directions.
Graph construct_anng(const Dataset& data, int kc, double epsilon_c, std::uint64_t seed = 0);

/// Per node, the eo shortest edges are kept as-is and the ei shortest are
/// added reversed, scanning the first max(eo, ei) stored edges with duplicate
/// suppression. (eo, 0) truncates; (0, ei) transposes the truncation.
Graph construct_adjusted_graph(const Graph& g, int eo, int ei);

struct SacPhase1 {
  Graph graph;
  /// Per source node: edges admitted solely because the target's running
  /// indegree was zero while the outdegree budget was already spent.
  std::vector<std::uint32_t> rescue_out;
};

/// Indegree-constrained selection pass: nodes processed by ascending reversed
/// outdegree (ties by id), each reversed edge admitted while the target's
/// running indegree stays under ei and the source's outdegree under eo, with
/// a zero-indegree override so no node is left unreachable.
SacPhase1 sac_phase1(const Graph& g, int eo, int ei);

/// sac_phase1 followed by the refill pass: each node takes its original
/// shortest edges until it has eo outgoing.
Graph construct_adjusted_graph_with_constraint(const Graph& g, int eo, int ei);

/// True iff some neighbor w of ns links to nd with stored length strictly
/// below direct_length. The direct length is supplied by the caller because
/// ns->nd is generally not an edge of g.
bool has_path(const Graph& g, NodeId ns, NodeId nd, double direct_length);

struct PathRemoval {
  NodeId src;
  NodeId dst;
  float length;
  NodeId witness;     // intermediate node whose second leg beat the edge
  float second_leg;   // stored length of witness->dst at removal time
};

/// Shortcut-edge pruning in rounds: every remaining node contributes its
/// shortest unprocessed edge per round (ascending id within a round); an edge
/// is kept iff the partially built output offers no two-edge alternative with
/// a strictly shorter second leg.
Graph adjust_path(const Graph& g, std::vector<PathRemoval>* removals = nullptr);

/// Truncation of each node's edge list to its kc shortest.
Graph derive_aknng(const Graph& anng, int kc);

/// Degree adjustment (plain or constrained) with optional path adjustment;
/// the optimizer re-runs this per candidate (eo, ei).
Graph adjust_graph(const Graph& aknng, int eo, int ei, bool constrained, bool path_adjust = true);

/// Full pipeline: truncate to kc, adjust degrees, prune paths.
Graph construct_graph(const Graph& anng, const ConstructionParams& params);

}  // namespace onng
