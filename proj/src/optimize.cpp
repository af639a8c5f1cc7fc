#include "onng/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "onng/construct.hpp"

namespace onng {

MeasurePoint measure(const Graph& g, const Dataset& data, const VpTree* tree,
                     const Dataset& queries, const GroundTruth& truth, double epsilon,
                     const SearchSetup& setup) {
  const BatchResult r = evaluate_batch(g, data, tree, queries, truth, epsilon, setup, false);
  return {epsilon, r.precision, r.mean_computations};
}

MeasureFn make_measure_fn(const Graph& g, const Dataset& data, const VpTree* tree,
                          const Dataset& queries, const GroundTruth& truth,
                          const SearchSetup& setup) {
  // Captures graph, dataset, queries, and truth by reference; the fn must not
  // outlive them.
  return [&g, &data, tree, &queries, &truth, setup](double epsilon) {
    return measure(g, data, tree, queries, truth, epsilon, setup);
  };
}

double epsilon_for_precision(const MeasureFn& fn, double target_p, double tol, EndpointSide side) {
  if (!(target_p > 0.0 && target_p <= 1.0)) throw InvariantError("target precision outside (0, 1]");
  if (tol <= 0.0) throw InvariantError("tolerance must be positive");

  double lo = 0.0;
  double p_lo = fn(0.0).precision;
  if (p_lo >= target_p) return 0.0;

  double hi = 0.1;
  double p_hi = fn(hi).precision;
  while (p_hi < target_p) {
    hi *= 2.0;
    if (hi > 10.0) throw UnreachableError("target precision unreachable below epsilon 10");
    p_hi = fn(hi).precision;
  }

  // Invariant: p_lo < target_p <= p_hi. Measured precision is a step
  // function of epsilon, so the tolerance may be unattainable; the iteration
  // cap then leaves a fully collapsed bracket and the conservative side wins.
  for (int iter = 0; iter < 60; ++iter) {
    if (side == EndpointSide::Lower && p_lo > target_p - tol) return lo;
    if (side == EndpointSide::Upper && p_hi < target_p + tol) return hi;
    const double mid = 0.5 * (lo + hi);
    const double p_mid = fn(mid).precision;
    if (p_mid >= target_p) {
      hi = mid;
      p_hi = p_mid;
    } else {
      lo = mid;
      p_lo = p_mid;
    }
  }
  return side == EndpointSide::Lower ? lo : hi;
}

double integrate(std::vector<Sample> samples, double pl, double pu) {
  if (samples.empty()) throw InvariantError("no samples to integrate");
  if (!(pl < pu)) throw InvariantError("precision range must be increasing");
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.precision < b.precision; });

  std::vector<std::pair<double, double>> pts;  // (precision, log10 computations)
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    double log_sum = 0.0;
    while (j < samples.size() && samples[j].precision == samples[i].precision) {
      if (samples[j].mean_computations <= 0.0)
        throw InvariantError("computation counts must be positive");
      log_sum += std::log10(samples[j].mean_computations);
      ++j;
    }
    pts.emplace_back(samples[i].precision, log_sum / static_cast<double>(j - i));
    i = j;
  }

  if (pts.size() == 1) return pts[0].second;  // constant integrand
  double area = 0.0;
  for (std::size_t t = 0; t + 1 < pts.size(); ++t) {
    area += 0.5 * (pts[t].second + pts[t + 1].second) * (pts[t + 1].first - pts[t].first);
  }
  return area / (pu - pl);
}

LossResult loss_from_fn(const MeasureFn& fn, const TargetRange& range, double tol, int n_samples) {
  if (n_samples < 2) throw InvariantError("need at least 2 samples");
  if (!(range.pl > 0.0 && range.pl < range.pu && range.pu < 1.0))
    throw InvariantError("invalid target range");

  const double eps_l = epsilon_for_precision(fn, range.pl, tol, EndpointSide::Lower);
  const double eps_u = epsilon_for_precision(fn, range.pu, tol, EndpointSide::Upper);

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    double eps;
    if (s == 0) {
      eps = eps_l;
    } else if (s == n_samples - 1) {
      eps = eps_u;
    } else {
      eps = eps_l + (eps_u - eps_l) * static_cast<double>(s) / static_cast<double>(n_samples - 1);
    }
    const MeasurePoint m = fn(eps);
    samples.push_back({m.precision, m.mean_computations});
  }
  return {integrate(std::move(samples), range.pl, range.pu), eps_l, eps_u};
}

GridPoint hill_climb(const std::function<double(int, int)>& fn, int start_x, int start_y, int step,
                     int lo, int hi) {
  if (step <= 0) throw InvariantError("step must be positive");
  if (lo > hi) throw InvariantError("empty grid");

  int x = std::clamp(start_x, lo, hi);
  int y = std::clamp(start_y, lo, hi);

  std::map<std::pair<int, int>, double> cache;
  auto eval = [&](int px, int py) {
    const auto key = std::make_pair(px, py);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = fn(px, py);
    cache.emplace(key, v);
    return v;
  };

  double current = eval(x, y);
  while (true) {
    const int candidates[4][2] = {{x + step, y}, {x - step, y}, {x, y + step}, {x, y - step}};
    double best = current;
    int bx = x;
    int by = y;
    for (const auto& c : candidates) {
      if (c[0] < lo || c[0] > hi || c[1] < lo || c[1] > hi) continue;
      const double v = eval(c[0], c[1]);
      if (v < best) {
        best = v;
        bx = c[0];
        by = c[1];
      }
    }
    if (best < current) {
      x = bx;
      y = by;
      current = best;
      continue;
    }
    if (std::isinf(current)) throw UnreachableError("no feasible candidate on the grid");
    return {x, y, current};
  }
}

std::string trace_to_csv(const std::vector<CandidateTrace>& trace) {
  std::ostringstream os;
  os << "eo,ei,loss,epsilon_l,epsilon_u\n";
  os << std::setprecision(12);
  for (const CandidateTrace& row : trace) {
    os << row.eo << ',' << row.ei << ',' << row.loss << ',' << row.epsilon_l << ','
       << row.epsilon_u << '\n';
  }
  return os.str();
}

OptimizeResult optimize_degrees(const Graph& aknng, const Dataset& data, const TargetRange& range,
                                const OptimizerConfig& cfg, bool constrained) {
  if (cfg.queries.empty()) throw InvariantError("empty query batch");

  std::size_t kc = 0;
  for (NodeId i = 0; i < aknng.node_count(); ++i) kc = std::max(kc, aknng.neighbors(i).size());
  const int lo = cfg.step;
  const int hi = static_cast<int>(kc) - cfg.step;
  if (lo > hi) throw InvariantError("degree grid is empty for this graph");

  std::optional<VpTree> tree;
  if (cfg.setup.seed_mode == SeedMode::Tree) tree = VpTree::build(data, cfg.tree_seed);
  const VpTree* tree_ptr = tree ? &*tree : nullptr;

  OptimizeResult result;
  auto loss_at = [&](int eo, int ei) {
    const Graph candidate = adjust_graph(aknng, eo, ei, constrained, true);
    const MeasureFn fn =
        make_measure_fn(candidate, data, tree_ptr, cfg.queries, cfg.truth, cfg.setup);
    try {
      const LossResult r = loss_from_fn(fn, range, cfg.binary_search_tol, cfg.n_samples);
      result.trace.push_back({eo, ei, r.loss, r.epsilon_l, r.epsilon_u});
      return r.loss;
    } catch (const UnreachableError&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      result.trace.push_back({eo, ei, std::numeric_limits<double>::infinity(), nan, nan});
      return std::numeric_limits<double>::infinity();
    }
  };

  const GridPoint best = hill_climb(loss_at, 2 * cfg.step, 2 * cfg.step, cfg.step, lo, hi);
  result.eo = best.x;
  result.ei = best.y;
  result.loss = best.loss;
  return result;
}

}  // namespace onng
