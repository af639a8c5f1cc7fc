#include "onng/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <sstream>

#include "onng/construct.hpp"
#include "onng/optimize.hpp"

namespace onng {

std::vector<Hit> brute_force_knn(const Dataset& data, const float* q, int k) {
  if (k <= 0) throw InvariantError("k must be positive");
  if (static_cast<std::size_t>(k) > data.size()) throw InvariantError("k exceeds dataset size");
  std::vector<Hit> all;
  all.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const NodeId id = static_cast<NodeId>(i);
    all.push_back({id, data.distance_to(q, id)});
  }
  auto closer = [](const Hit& a, const Hit& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  };
  std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

GroundTruth compute_ground_truth(const Dataset& data, const Dataset& queries, int k_gt) {
  if (k_gt <= 0) throw InvariantError("k_gt must be positive");
  if (queries.dim() != data.dim()) throw FormatError("query dimension mismatch");
  const int k = static_cast<int>(std::min<std::size_t>(k_gt, data.size()));
  GroundTruth truth;
  truth.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    truth.push_back(brute_force_knn(data, queries.vec(static_cast<NodeId>(i)), k));
  }
  return truth;
}

namespace {

std::size_t true_hits(const std::vector<Hit>& hits, const std::vector<Hit>& truth, int k) {
  if (k <= 0) throw InvariantError("k must be positive");
  if (truth.size() < static_cast<std::size_t>(k)) throw InvariantError("ground truth shorter than k");
  std::size_t found = 0;
  for (const Hit& h : hits) {
    for (int i = 0; i < k; ++i) {
      if (truth[static_cast<std::size_t>(i)].id == h.id) {
        ++found;
        break;
      }
    }
  }
  return found;
}

}  // namespace

double recall(const std::vector<Hit>& hits, const std::vector<Hit>& truth, int k) {
  return static_cast<double>(true_hits(hits, truth, k)) / static_cast<double>(k);
}

BatchResult evaluate_batch(const Graph& g, const Dataset& data, const VpTree* tree,
                           const Dataset& queries, const GroundTruth& truth, double epsilon,
                           const SearchSetup& setup, bool timed) {
  if (queries.empty()) throw InvariantError("empty query batch");
  if (truth.size() != queries.size()) throw InvariantError("ground truth count mismatch");
  if (setup.seed_mode == SeedMode::Tree && tree == nullptr)
    throw InvariantError("tree seeding requested without a tree");

  SearchParams params;
  params.k = setup.k;
  params.epsilon = epsilon;
  params.dynamic = setup.dynamic;
  params.max_edges_override = setup.max_edges_override;

  auto search_one = [&](std::size_t i) {
    const float* q = queries.vec(static_cast<NodeId>(i));
    if (setup.seed_mode == SeedMode::Tree) return knn_search_with_tree(g, data, *tree, q, params);
    const auto seeds = seeds_random(g.node_count(), setup.n_random_seeds, setup.seed_base + i);
    return knn_search(g, data, seeds, q, params);
  };

  // Integer accumulation keeps precision exactly invariant under query reordering.
  BatchResult out;
  std::uint64_t hit_sum = 0;
  std::uint64_t comp_sum = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const SearchResult res = search_one(i);
    hit_sum += true_hits(res.hits, truth[i], setup.k);
    comp_sum += res.distance_computations;
  }
  out.precision = static_cast<double>(hit_sum) /
                  (static_cast<double>(queries.size()) * static_cast<double>(setup.k));
  out.mean_computations = static_cast<double>(comp_sum) / static_cast<double>(queries.size());

  if (timed) {
    // The scoring pass above warmed the cache; report the median of 3 reps.
    double rep_us[3];
    for (double& rep : rep_us) {
      const auto begin = std::chrono::steady_clock::now();
      for (std::size_t i = 0; i < queries.size(); ++i) search_one(i);
      const auto end = std::chrono::steady_clock::now();
      const double us = std::chrono::duration<double, std::micro>(end - begin).count();
      rep = us / static_cast<double>(queries.size());
    }
    std::sort(std::begin(rep_us), std::end(rep_us));
    out.mean_query_us = rep_us[1];
  }
  return out;
}

EvalCurve sweep(const Graph& g, const Dataset& data, const VpTree* tree, const Dataset& queries,
                const GroundTruth& truth, std::vector<double> epsilons, const SearchSetup& setup,
                std::string graph_label, bool timed) {
  if (epsilons.empty()) throw InvariantError("empty epsilon list");
  std::sort(epsilons.begin(), epsilons.end());
  EvalCurve curve;
  curve.graph_label = std::move(graph_label);
  curve.points.reserve(epsilons.size());
  for (double eps : epsilons) {
    const BatchResult r = evaluate_batch(g, data, tree, queries, truth, eps, setup, timed);
    curve.points.push_back({eps, r.precision, r.mean_computations, r.mean_query_us});
  }
  return curve;
}

std::string curves_to_csv(const std::vector<EvalCurve>& curves) {
  std::ostringstream os;
  os << "graph_label,epsilon,precision,mean_computations,mean_query_us\n";
  os << std::setprecision(12);
  for (const EvalCurve& curve : curves) {
    for (const CurvePoint& p : curve.points) {
      os << curve.graph_label << ',' << p.epsilon << ',' << p.precision << ','
         << p.mean_computations << ',' << p.mean_query_us << '\n';
    }
  }
  return os.str();
}

double interpolate_computations_at(const EvalCurve& curve, double precision) {
  if (curve.points.empty()) throw InvariantError("empty curve");
  for (const CurvePoint& p : curve.points) {
    if (p.precision == precision) return p.mean_computations;
  }
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const CurvePoint& a = curve.points[i];
    const CurvePoint& b = curve.points[i + 1];
    const double lo = std::min(a.precision, b.precision);
    const double hi = std::max(a.precision, b.precision);
    if (lo < precision && precision < hi) {
      const double t = (precision - a.precision) / (b.precision - a.precision);
      return a.mean_computations + t * (b.mean_computations - a.mean_computations);
    }
  }
  throw UnreachableError("curve never reaches the target precision");
}

std::vector<ScalingRow> scaling_study(const Dataset& data, const std::vector<std::size_t>& sizes,
                                      const Dataset& queries, double target_recall,
                                      const ScalingConfig& cfg) {
  if (sizes.empty()) throw InvariantError("no sizes given");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InvariantError("sizes must be strictly ascending");
  }
  if (sizes.back() > data.size()) throw InvariantError("size exceeds the dataset");

  std::vector<ScalingRow> rows;
  rows.reserve(sizes.size());
  for (std::size_t n : sizes) {
    const Dataset subset = data.head(n);
    const Graph anng = construct_anng(subset, cfg.kc, cfg.epsilon_c, cfg.seed);
    ConstructionParams params;
    params.kc = cfg.kc;
    params.epsilon_c = cfg.epsilon_c;
    params.eo = cfg.eo;
    params.ei = cfg.ei;
    params.constrained = cfg.constrained;
    const Graph graph = construct_graph(anng, params);
    const VpTree tree = VpTree::build(subset, cfg.seed);
    const GroundTruth truth = compute_ground_truth(subset, queries, cfg.k);

    SearchSetup setup;
    setup.k = cfg.k;
    setup.dynamic = cfg.dynamic;
    setup.seed_mode = SeedMode::Tree;
    const MeasureFn fn = make_measure_fn(graph, subset, &tree, queries, truth, setup);
    const double eps = epsilon_for_precision(fn, target_recall, cfg.tol, EndpointSide::Upper);
    const MeasurePoint at = fn(eps);
    rows.push_back({n, eps, at.mean_computations});
  }
  return rows;
}

}  // namespace onng
