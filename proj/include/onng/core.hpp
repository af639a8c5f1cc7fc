#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace onng {

using NodeId = std::uint32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad file bytes, inconsistent dimensions, zero vectors
/// under the angular metric, and the like.
struct FormatError : Error {
  using Error::Error;
};

/// A requested precision target cannot be reached on the given graph.
struct UnreachableError : Error {
  using Error::Error;
};

/// A caller broke an internal contract (self loop, out-of-range id, ...).
struct InvariantError : Error {
  using Error::Error;
};

enum class Metric : std::uint8_t { Euclidean = 0, Angular = 1 };

/// Distance between two `dim`-component vectors. Components are float,
/// accumulation and the result are double. Angular is
/// arccos(clamp(cos_sim, -1, 1)) and rejects zero vectors.
double distance(Metric metric, const float* a, const float* b, std::size_t dim);
double distance(Metric metric, const std::vector<float>& a, const std::vector<float>& b);

/// Flat store of fixed-dimension float vectors addressed by dense NodeId.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::uint32_t dim, Metric metric) : dim_(dim), metric_(metric) {
    if (dim == 0) throw FormatError("dataset dimension must be positive");
  }

  void reserve(std::size_t n) { data_.reserve(n * dim_); }

  /// Appends one vector; all components must be finite.
  NodeId add(const float* v);
  NodeId add(const std::vector<float>& v);

  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }
  std::uint32_t dim() const { return dim_; }
  Metric metric() const { return metric_; }

  const float* vec(NodeId i) const { return data_.data() + std::size_t(i) * dim_; }

  double distance_between(NodeId i, NodeId j) const {
    return distance(metric_, vec(i), vec(j), dim_);
  }
  double distance_to(const float* q, NodeId i) const {
    return distance(metric_, q, vec(i), dim_);
  }

  /// Copy of the first n vectors (used by scaling studies).
  Dataset head(std::size_t n) const;

  const std::vector<float>& raw() const { return data_; }

 private:
  std::uint32_t dim_ = 0;
  Metric metric_ = Metric::Euclidean;
  std::vector<float> data_;
};

/// Directed edge carrying its precomputed length.
struct Edge {
  NodeId target;
  float length;
};

/// Adjacency order: ascending length, ties ascending target id.
inline bool edge_less(const Edge& a, const Edge& b) {
  if (a.length != b.length) return a.length < b.length;
  return a.target < b.target;
}

inline bool operator==(const Edge& a, const Edge& b) {
  return a.target == b.target && a.length == b.length;
}

/// Directed graph with per-node edge lists kept sorted by (length, target).
/// No self loops, no duplicate targets within a list.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  std::size_t node_count() const { return adj_.size(); }
  const std::vector<Edge>& neighbors(NodeId i) const { return adj_[i]; }
  std::size_t edge_count() const;

  /// Sorted, idempotent insertion. Returns false when the edge was already
  /// present.
  bool insert(NodeId source, Edge e);

  bool has_edge(NodeId source, Edge e) const;

  /// Lookup by target id; lists are ordered by length, so this scans.
  const Edge* find_edge(NodeId source, NodeId target) const;

  bool operator==(const Graph& other) const { return adj_ == other.adj_; }

 private:
  std::vector<std::vector<Edge>> adj_;
};

/// Inserts source->target with the length computed from the dataset metric.
void insert_edge(Graph& g, const Dataset& data, NodeId source, NodeId target);

/// Reverses every edge direction, keeping lengths.
Graph transpose(const Graph& g);

struct GraphStats {
  double mean_top5_outdegree = 0;    // mean outdegree of the ceil(5%) highest-outdegree nodes
  double mean_bottom5_indegree = 0;  // mean indegree of the ceil(5%) lowest-indegree nodes
  double mean_indegree_distance = 0; // mean edge length of the transpose truncated to 10 per node
  double mean_outdegree = 0;
};

GraphStats graph_stats(const Graph& g);

}  // namespace onng
