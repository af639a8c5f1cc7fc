#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onng/core.hpp"
#include "onng/search.hpp"
#include "onng/vptree.hpp"

namespace onng {

/// Per query: exact nearest neighbors, ascending (distance, id).
using GroundTruth = std::vector<std::vector<Hit>>;

/// Exact k nearest by full scan; ties broken by id.
std::vector<Hit> brute_force_knn(const Dataset& data, const float* q, int k);

/// Ground truth at k_gt = 100 by default so any k <= 100 can be scored
/// without recomputation.
GroundTruth compute_ground_truth(const Dataset& data, const Dataset& queries, int k_gt = 100);

/// Fraction of the first k truth ids present among the hits.
double recall(const std::vector<Hit>& hits, const std::vector<Hit>& truth, int k);

enum class SeedMode { Tree, Random };

struct SearchSetup {
  int k = 20;
  std::optional<DynamicDegree> dynamic;
  std::optional<int> max_edges_override;
  SeedMode seed_mode = SeedMode::Tree;
  int n_random_seeds = 10;
  /// Random mode draws query i's seeds from seed_base + i, so counts are
  /// reproducible run to run.
  std::uint64_t seed_base = 0;
};

struct BatchResult {
  double precision = 0;
  double mean_computations = 0;
  double mean_query_us = 0;  // 0 unless timed
};

/// Runs the whole query batch at one epsilon. tree may be null only in
/// Random seed mode. Timed runs add 3 single-threaded repetitions and report
/// the median per-query mean.
BatchResult evaluate_batch(const Graph& g, const Dataset& data, const VpTree* tree,
                           const Dataset& queries, const GroundTruth& truth, double epsilon,
                           const SearchSetup& setup, bool timed = false);

struct CurvePoint {
  double epsilon;
  double precision;
  double mean_computations;
  double mean_query_us;
};

struct EvalCurve {
  std::string graph_label;
  std::vector<CurvePoint> points;  // ascending epsilon
};

EvalCurve sweep(const Graph& g, const Dataset& data, const VpTree* tree, const Dataset& queries,
                const GroundTruth& truth, std::vector<double> epsilons, const SearchSetup& setup,
                std::string graph_label, bool timed = false);

/// CSV with the mandatory header row; one row per curve point.
std::string curves_to_csv(const std::vector<EvalCurve>& curves);

/// Computations at the target precision, linearly interpolated between the
/// adjacent measured points. Throws UnreachableError when the curve never
/// straddles the target.
double interpolate_computations_at(const EvalCurve& curve, double precision);

struct ScalingConfig {
  int kc = 50;
  double epsilon_c = 0.1;
  int eo = 10;
  int ei = 40;
  bool constrained = false;
  DynamicDegree dynamic;  // the searches run degree-capped
  int k = 20;
  double tol = 0.005;
  std::uint64_t seed = 0;
};

struct ScalingRow {
  std::size_t n;
  double epsilon;
  double mean_computations;
};

/// For each size n (ascending), builds the full pipeline on the first n
/// vectors, finds the epsilon reaching target_recall, and records the mean
/// computations there.
std::vector<ScalingRow> scaling_study(const Dataset& data, const std::vector<std::size_t>& sizes,
                                      const Dataset& queries, double target_recall,
                                      const ScalingConfig& cfg);

}  // namespace onng
