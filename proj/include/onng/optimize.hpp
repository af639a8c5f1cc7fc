#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "onng/bench.hpp"
#include "onng/core.hpp"

namespace onng {

struct TargetRange {
  double pl = 0.90;
  double pu = 0.98;
};

struct MeasurePoint {
  double epsilon;
  double precision;
  double mean_computations;
};

/// Search-quality probe at one epsilon; injectable so the endpoint search and
/// the loss integral can be exercised against synthetic curves.
using MeasureFn = std::function<MeasurePoint(double)>;

struct OptimizerConfig {
  int step = 5;
  double binary_search_tol = 0.005;
  int n_samples = 10;  // >= 2
  Dataset queries;
  GroundTruth truth;
  SearchSetup setup;
  std::uint64_t tree_seed = 0;
};

MeasurePoint measure(const Graph& g, const Dataset& data, const VpTree* tree,
                     const Dataset& queries, const GroundTruth& truth, double epsilon,
                     const SearchSetup& setup);

MeasureFn make_measure_fn(const Graph& g, const Dataset& data, const VpTree* tree,
                          const Dataset& queries, const GroundTruth& truth,
                          const SearchSetup& setup);

/// Which side of the target the returned epsilon's precision lands on: the
/// lower endpoint stays at or below the target, the upper at or above it.
enum class EndpointSide { Lower, Upper };

/// Binary search for the epsilon hitting the target precision. The upper
/// bracket starts at 0.1 and doubles; past 10 the target is unreachable.
/// Returns 0 when the precision at epsilon 0 already meets the target.
double epsilon_for_precision(const MeasureFn& fn, double target_p, double tol, EndpointSide side);

struct Sample {
  double precision;
  double mean_computations;
};

/// Trapezoidal mean of log10(computations) over precision: samples sorted by
/// precision, duplicate-precision samples merged by averaging their logs, the
/// integral divided by (pu - pl). A single distinct precision degenerates to
/// its own log value.
double integrate(std::vector<Sample> samples, double pl, double pu);

struct LossResult {
  double loss;
  double epsilon_l;
  double epsilon_u;
};

/// Loss over a target precision range: endpoint epsilons via binary search,
/// the bracket split into n_samples - 1 equal partitions, one measurement per
/// sample, then the integral above.
LossResult loss_from_fn(const MeasureFn& fn, const TargetRange& range, double tol, int n_samples);

struct GridPoint {
  int x;
  int y;
  double loss;
};

/// Axis-neighbor hill climbing on the square integer grid [lo, hi]^2 with the
/// given step. Moves only on strict improvement; each point is evaluated at
/// most once; +inf marks infeasible candidates. Throws when the start and all
/// of its neighbors are infeasible.
GridPoint hill_climb(const std::function<double(int, int)>& fn, int start_x, int start_y, int step,
                     int lo, int hi);

struct CandidateTrace {
  int eo;
  int ei;
  double loss;
  double epsilon_l;
  double epsilon_u;
};

struct OptimizeResult {
  int eo;
  int ei;
  double loss;
  std::vector<CandidateTrace> trace;
};

/// One CSV row per evaluated candidate, header included.
std::string trace_to_csv(const std::vector<CandidateTrace>& trace);

/// Hill climbing over (eo, ei): each candidate rebuilds degree and path
/// adjustment from the fixed truncated graph, measures the loss over the
/// target range, and unreachable candidates count as +inf. The grid spans
/// [step, kc - step] where kc is the truncated graph's maximum outdegree.
OptimizeResult optimize_degrees(const Graph& aknng, const Dataset& data, const TargetRange& range,
                                const OptimizerConfig& cfg, bool constrained);

}  // namespace onng
