#include "onng/core.hpp"

#include <algorithm>
#include <cmath>

namespace onng {

double distance(Metric metric, const float* a, const float* b, std::size_t dim) {
  switch (metric) {
    case Metric::Euclidean: {
      double acc = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Metric::Angular: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double x = a[i], y = b[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
      }
      if (na == 0.0 || nb == 0.0)
        throw FormatError("angular distance is undefined for a zero vector");
      const double cosine = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
      return std::acos(cosine);
    }
  }
  throw InvariantError("unknown metric");
}

double distance(Metric metric, const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) throw FormatError("vector dimension mismatch");
  return distance(metric, a.data(), b.data(), a.size());
}

NodeId Dataset::add(const float* v) {
  if (dim_ == 0) throw InvariantError("dataset dimension unset");
  for (std::uint32_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(v[i])) throw FormatError("non-finite vector component");
  }
  data_.insert(data_.end(), v, v + dim_);
  return static_cast<NodeId>(size() - 1);
}

NodeId Dataset::add(const std::vector<float>& v) {
  if (v.size() != dim_) throw FormatError("vector dimension mismatch");
  return add(v.data());
}

Dataset Dataset::head(std::size_t n) const {
  if (n > size()) throw InvariantError("head size exceeds dataset size");
  Dataset out(dim_, metric_);
  out.data_.assign(data_.begin(), data_.begin() + n * dim_);
  return out;
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adj_) total += list.size();
  return total;
}

bool Graph::insert(NodeId source, Edge e) {
  if (source == e.target) throw InvariantError("self loop");
  if (source >= adj_.size() || e.target >= adj_.size())
    throw InvariantError("node id out of range");
  auto& list = adj_[source];
  auto it = std::lower_bound(list.begin(), list.end(), e, edge_less);
  if (it != list.end() && it->target == e.target && it->length == e.length) return false;
  list.insert(it, e);
  return true;
}

bool Graph::has_edge(NodeId source, Edge e) const {
  const auto& list = adj_[source];
  auto it = std::lower_bound(list.begin(), list.end(), e, edge_less);
  return it != list.end() && it->target == e.target && it->length == e.length;
}

const Edge* Graph::find_edge(NodeId source, NodeId target) const {
  for (const Edge& e : adj_[source]) {
    if (e.target == target) return &e;
  }
  return nullptr;
}

void insert_edge(Graph& g, const Dataset& data, NodeId source, NodeId target) {
  if (source >= data.size() || target >= data.size())
    throw InvariantError("node id out of range");
  if (source == target) throw InvariantError("self loop");
  const float length = static_cast<float>(data.distance_between(source, target));
  g.insert(source, Edge{target, length});
}

Graph transpose(const Graph& g) {
  Graph out(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const Edge& e : g.neighbors(u)) {
      out.insert(e.target, Edge{u, e.length});
    }
  }
  return out;
}

namespace {

std::size_t five_percent_count(std::size_t n) {
  return (n + 19) / 20;  // ceil(0.05 n)
}

}  // namespace

GraphStats graph_stats(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InvariantError("empty graph");

  std::vector<std::size_t> outdeg(n, 0), indeg(n, 0);
  std::size_t edges = 0;
  for (NodeId u = 0; u < n; ++u) {
    outdeg[u] = g.neighbors(u).size();
    edges += outdeg[u];
    for (const Edge& e : g.neighbors(u)) ++indeg[e.target];
  }

  const std::size_t m = five_percent_count(n);

  std::vector<std::size_t> by_out = outdeg;
  std::nth_element(by_out.begin(), by_out.begin() + (m - 1), by_out.end(),
                   std::greater<std::size_t>());
  std::partial_sort(by_out.begin(), by_out.begin() + m, by_out.end(),
                    std::greater<std::size_t>());
  double top_sum = 0;
  for (std::size_t i = 0; i < m; ++i) top_sum += static_cast<double>(by_out[i]);

  std::vector<std::size_t> by_in = indeg;
  std::partial_sort(by_in.begin(), by_in.begin() + m, by_in.end());
  double bottom_sum = 0;
  for (std::size_t i = 0; i < m; ++i) bottom_sum += static_cast<double>(by_in[i]);

  // Mean edge length of the transposed graph, each node truncated to its 10
  // shortest incoming edges.
  const Graph t = transpose(g);
  double length_sum = 0;
  std::size_t length_count = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto& list = t.neighbors(u);
    const std::size_t take = std::min<std::size_t>(10, list.size());
    for (std::size_t i = 0; i < take; ++i) length_sum += list[i].length;
    length_count += take;
  }

  GraphStats stats;
  stats.mean_top5_outdegree = top_sum / static_cast<double>(m);
  stats.mean_bottom5_indegree = bottom_sum / static_cast<double>(m);
  stats.mean_indegree_distance = length_count ? length_sum / static_cast<double>(length_count) : 0.0;
  stats.mean_outdegree = static_cast<double>(edges) / static_cast<double>(n);
  return stats;
}

}  // namespace onng
