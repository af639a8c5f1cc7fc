#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "onng/bench.hpp"
#include "onng/construct.hpp"
#include "onng/core.hpp"
#include "onng/io.hpp"
#include "onng/optimize.hpp"
#include "onng/search.hpp"
#include "onng/visited.hpp"
#include "onng/vptree.hpp"

namespace py = pybind11;
using namespace onng;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Dataset dataset_from_array(const FloatArray& arr, Metric metric) {
  if (arr.ndim() != 2) throw InvariantError("expected a 2-d float array");
  const auto n = static_cast<std::size_t>(arr.shape(0));
  const auto dim = static_cast<std::uint32_t>(arr.shape(1));
  Dataset data(dim, metric);
  data.reserve(n);
  const float* p = arr.data();
  for (std::size_t i = 0; i < n; ++i) data.add(p + i * dim);
  return data;
}

py::array dataset_to_array(const Dataset& data) {
  const auto n = static_cast<py::ssize_t>(data.size());
  const auto dim = static_cast<py::ssize_t>(data.dim());
  py::array_t<float> out({n, dim});
  std::copy(data.raw().begin(), data.raw().end(), out.mutable_data());
  return out;
}

const float* query_ptr(const Dataset& data, const FloatArray& q) {
  if (q.ndim() != 1 || static_cast<std::uint32_t>(q.shape(0)) != data.dim())
    throw InvariantError("query dimension mismatch");
  return q.data();
}

py::tuple hits_to_tuple(const SearchResult& res) {
  py::array_t<std::uint32_t> ids(static_cast<py::ssize_t>(res.hits.size()));
  py::array_t<double> dists(static_cast<py::ssize_t>(res.hits.size()));
  for (std::size_t i = 0; i < res.hits.size(); ++i) {
    ids.mutable_data()[i] = res.hits[i].id;
    dists.mutable_data()[i] = res.hits[i].distance;
  }
  return py::make_tuple(ids, dists, res.distance_computations);
}

SearchParams make_params(int k, double epsilon, std::optional<std::pair<int, double>> dynamic) {
  SearchParams params;
  params.k = k;
  params.epsilon = epsilon;
  if (dynamic) params.dynamic = DynamicDegree{dynamic->first, dynamic->second};
  return params;
}

}  // namespace

PYBIND11_MODULE(_onng, m) {
  m.doc() = "graph-based approximate nearest neighbor search";

  py::register_exception<FormatError>(m, "FormatError");
  py::register_exception<UnreachableError>(m, "UnreachableError");
  py::register_exception<InvariantError>(m, "InvariantError");

  py::enum_<Metric>(m, "Metric")
      .value("euclidean", Metric::Euclidean)
      .value("angular", Metric::Angular);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const FloatArray& arr, Metric metric) {
             return dataset_from_array(arr, metric);
           }),
           py::arg("vectors"), py::arg("metric") = Metric::Euclidean)
      .def("__len__", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim)
      .def_property_readonly("metric", &Dataset::metric)
      .def("to_numpy", &dataset_to_array)
      .def("distance_between", &Dataset::distance_between, py::arg("i"), py::arg("j"));

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t>(), py::arg("n"))
      .def("__len__", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("neighbors",
           [](const Graph& g, NodeId i) {
             if (i >= g.node_count()) throw InvariantError("node id out of range");
             std::vector<std::pair<NodeId, double>> out;
             for (const Edge& e : g.neighbors(i)) out.emplace_back(e.target, e.length);
             return out;
           },
           py::arg("i"))
      .def("insert",
           [](Graph& g, NodeId source, NodeId target, double length) {
             return g.insert(source, Edge{target, static_cast<float>(length)});
           },
           py::arg("source"), py::arg("target"), py::arg("length"))
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; });

  py::class_<VpTree>(m, "VpTree")
      .def_static("build", &VpTree::build, py::arg("data"), py::arg("seed") = 0,
                  py::call_guard<py::gil_scoped_release>());

  m.def("hash_size", &hash_size, py::arg("n"), py::arg("b") = 11);
  m.def("effective_edge_limit", &effective_edge_limit, py::arg("epsilon"), py::arg("e0"),
        py::arg("we"));

  m.def("construct_anng", &construct_anng, py::arg("data"), py::arg("kc"), py::arg("epsilon_c"),
        py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("derive_aknng", &derive_aknng, py::arg("anng"), py::arg("kc"));
  m.def("construct_adjusted_graph", &construct_adjusted_graph, py::arg("g"), py::arg("eo"),
        py::arg("ei"));
  m.def("construct_adjusted_graph_with_constraint", &construct_adjusted_graph_with_constraint,
        py::arg("g"), py::arg("eo"), py::arg("ei"));
  m.def("adjust_path", [](const Graph& g) { return adjust_path(g); }, py::arg("g"),
        py::call_guard<py::gil_scoped_release>());
  m.def("adjust_graph", &adjust_graph, py::arg("aknng"), py::arg("eo"), py::arg("ei"),
        py::arg("constrained") = false, py::arg("path_adjust") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def("transpose", &transpose, py::arg("g"));

  m.def("graph_stats", [](const Graph& g) {
    const GraphStats s = graph_stats(g);
    py::dict out;
    out["mean_outdegree"] = s.mean_outdegree;
    out["mean_top5_outdegree"] = s.mean_top5_outdegree;
    out["mean_bottom5_indegree"] = s.mean_bottom5_indegree;
    out["mean_indegree_distance"] = s.mean_indegree_distance;
    return out;
  });

  m.def(
      "search",
      [](const Graph& g, const Dataset& data, const VpTree& tree, const FloatArray& q, int k,
         double epsilon, std::optional<std::pair<int, double>> dynamic) {
        return hits_to_tuple(
            knn_search_with_tree(g, data, tree, query_ptr(data, q), make_params(k, epsilon, dynamic)));
      },
      py::arg("graph"), py::arg("data"), py::arg("tree"), py::arg("q"), py::arg("k") = 20,
      py::arg("epsilon") = 0.1, py::arg("dynamic") = py::none());

  m.def(
      "search_from_seeds",
      [](const Graph& g, const Dataset& data, const std::vector<NodeId>& seeds,
         const FloatArray& q, int k, double epsilon,
         std::optional<std::pair<int, double>> dynamic) {
        return hits_to_tuple(knn_search(g, data, std::span<const NodeId>(seeds),
                                        query_ptr(data, q), make_params(k, epsilon, dynamic)));
      },
      py::arg("graph"), py::arg("data"), py::arg("seeds"), py::arg("q"), py::arg("k") = 20,
      py::arg("epsilon") = 0.1, py::arg("dynamic") = py::none());

  m.def(
      "brute_force_knn",
      [](const Dataset& data, const FloatArray& q, int k) {
        const auto hits = brute_force_knn(data, query_ptr(data, q), k);
        std::vector<std::pair<NodeId, double>> out;
        for (const Hit& h : hits) out.emplace_back(h.id, h.distance);
        return out;
      },
      py::arg("data"), py::arg("q"), py::arg("k"));

  m.def(
      "optimize_degrees",
      [](const Graph& aknng, const Dataset& data, const Dataset& queries, double pl, double pu,
         int step, int k, bool constrained, std::uint64_t seed) {
        OptimizerConfig cfg;
        cfg.step = step;
        cfg.queries = queries;
        cfg.truth = compute_ground_truth(data, queries, 100);
        cfg.setup.k = k;
        cfg.tree_seed = seed;
        const OptimizeResult best =
            optimize_degrees(aknng, data, TargetRange{pl, pu}, cfg, constrained);
        return py::make_tuple(best.eo, best.ei, best.loss);
      },
      py::arg("aknng"), py::arg("data"), py::arg("queries"), py::arg("pl") = 0.90,
      py::arg("pu") = 0.98, py::arg("step") = 5, py::arg("k") = 20,
      py::arg("constrained") = false, py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "save_index",
      [](const std::string& path, const Dataset& data, const Graph& g, const VpTree* tree) {
        save_index(path, data, g, tree);
      },
      py::arg("path"), py::arg("data"), py::arg("graph"), py::arg("tree") = nullptr);

  m.def("load_index", [](const std::string& path) {
    LoadedIndex index = load_index(path);
    py::object tree = index.tree ? py::cast(std::move(*index.tree)) : py::none();
    return py::make_tuple(std::move(index.data), std::move(index.graph), std::move(tree));
  });
}
