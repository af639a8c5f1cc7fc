#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "onng/bench.hpp"
#include "onng/construct.hpp"

using namespace onng;
using namespace onng::test;

namespace {

std::vector<Hit> full_sort_knn(const Dataset& data, const float* q, int k) {
  std::vector<Hit> all;
  for (NodeId i = 0; i < data.size(); ++i) all.push_back({i, data.distance_to(q, i)});
  std::sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  all.resize(static_cast<std::size_t>(k));
  return all;
}

Hit hit(NodeId id, double d) { return Hit{id, d}; }

}  // namespace

TEST_CASE("exact scan on hand data") {
  Dataset data(1, Metric::Euclidean);
  data.add({0.0f});
  data.add({1.0f});
  data.add({5.0f});
  const float q = 0.9f;

  const auto top2 = brute_force_knn(data, &q, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].id == 1);
  CHECK(top2[0].distance == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(top2[1].id == 0);
  CHECK(top2[1].distance == doctest::Approx(0.9).epsilon(1e-6));

  const auto all = brute_force_knn(data, &q, 3);
  CHECK(all[2].id == 2);

  CHECK_THROWS_AS(brute_force_knn(data, &q, 4), InvariantError);
  CHECK_THROWS_AS(brute_force_knn(data, &q, 0), InvariantError);
}

TEST_CASE("exact scan breaks distance ties by id") {
  Dataset data(1, Metric::Euclidean);
  data.add({0.0f});
  data.add({2.0f});
  const float q = 1.0f;
  const auto hits = brute_force_knn(data, &q, 2);
  CHECK(hits[0].id == 0);
  CHECK(hits[1].id == 1);
  CHECK(hits[0].distance == hits[1].distance);
}

TEST_CASE("exact scan agrees with an independent implementation") {
  const Dataset data = make_random_dataset(500, 6, 50);
  const Dataset queries = make_random_dataset(10, 6, 51);
  for (NodeId i = 0; i < queries.size(); ++i) {
    const auto got = brute_force_knn(data, queries.vec(i), 7);
    const auto want = full_sort_knn(data, queries.vec(i), 7);
    REQUIRE(got.size() == want.size());
    for (std::size_t j = 0; j < got.size(); ++j) {
      CHECK(got[j].id == want[j].id);
      CHECK(got[j].distance == want[j].distance);
    }
  }
}

TEST_CASE("ground truth is the per query exact scan, clamped to the dataset") {
  const Dataset data = make_random_dataset(40, 4, 52);
  const Dataset queries = make_random_dataset(6, 4, 53);
  const GroundTruth truth = compute_ground_truth(data, queries, 100);
  REQUIRE(truth.size() == 6);
  for (NodeId i = 0; i < queries.size(); ++i) {
    const auto want = brute_force_knn(data, queries.vec(i), 40);
    REQUIRE(truth[i].size() == 40);
    for (std::size_t j = 0; j < 40; ++j) {
      CHECK(truth[i][j].id == want[j].id);
      CHECK(truth[i][j].distance == want[j].distance);
    }
  }

  Dataset mismatched = make_random_dataset(3, 5, 54);
  CHECK_THROWS_AS(compute_ground_truth(data, mismatched, 10), FormatError);
}

TEST_CASE("recall counts matched truth ids") {
  const std::vector<Hit> truth{hit(0, 0.1), hit(1, 0.2), hit(2, 0.3), hit(3, 0.4)};
  CHECK(recall({hit(0, 0.1), hit(1, 0.2)}, truth, 2) == 1.0);
  CHECK(recall({hit(9, 0.1), hit(8, 0.2)}, truth, 2) == 0.0);
  CHECK(recall({hit(0, 0.1), hit(9, 0.2), hit(3, 0.4), hit(7, 0.9)}, truth, 4) == 0.5);
  CHECK_THROWS_AS(recall({hit(0, 0.1)}, truth, 0), InvariantError);
  CHECK_THROWS_AS(recall({hit(0, 0.1)}, truth, 5), InvariantError);
}

TEST_CASE("batch evaluation is deterministic and validated") {
  const Dataset data = make_random_dataset(250, 8, 55);
  const Dataset queries = make_random_dataset(12, 8, 56);
  const Graph anng = construct_anng(data, 10, 0.1, 2);
  const VpTree tree = VpTree::build(data);
  const GroundTruth truth = compute_ground_truth(data, queries, 100);

  SearchSetup setup;
  setup.k = 5;
  const BatchResult a = evaluate_batch(anng, data, &tree, queries, truth, 0.1, setup);
  const BatchResult b = evaluate_batch(anng, data, &tree, queries, truth, 0.1, setup);
  CHECK(a.precision == b.precision);
  CHECK(a.mean_computations == b.mean_computations);
  CHECK(a.precision >= 0.0);
  CHECK(a.precision <= 1.0);
  CHECK(a.mean_computations > 0.0);
  CHECK(a.mean_query_us == 0.0);

  const BatchResult timed = evaluate_batch(anng, data, &tree, queries, truth, 0.1, setup, true);
  CHECK(timed.precision == a.precision);
  CHECK(timed.mean_query_us > 0.0);

  SearchSetup random_setup = setup;
  random_setup.seed_mode = SeedMode::Random;
  const BatchResult seeded = evaluate_batch(anng, data, nullptr, queries, truth, 0.1, random_setup);
  CHECK(seeded.mean_computations > 0.0);

  CHECK_THROWS_AS(evaluate_batch(anng, data, nullptr, queries, truth, 0.1, setup), InvariantError);
  const Dataset no_queries(8, Metric::Euclidean);
  CHECK_THROWS_AS(evaluate_batch(anng, data, &tree, no_queries, {}, 0.1, setup), InvariantError);
  GroundTruth short_truth(truth.begin(), truth.end() - 1);
  CHECK_THROWS_AS(evaluate_batch(anng, data, &tree, queries, short_truth, 0.1, setup),
                  InvariantError);
}

TEST_CASE("sweeps sort epsilons and echo batch results") {
  const Dataset data = make_random_dataset(250, 8, 55);
  const Dataset queries = make_random_dataset(12, 8, 56);
  const Graph anng = construct_anng(data, 10, 0.1, 2);
  const VpTree tree = VpTree::build(data);
  const GroundTruth truth = compute_ground_truth(data, queries, 100);

  SearchSetup setup;
  setup.k = 5;
  const EvalCurve curve =
      sweep(anng, data, &tree, queries, truth, {0.2, 0.0, 0.1}, setup, "anng");
  CHECK(curve.graph_label == "anng");
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].epsilon == 0.0);
  CHECK(curve.points[1].epsilon == 0.1);
  CHECK(curve.points[2].epsilon == 0.2);
  for (const CurvePoint& p : curve.points) {
    const BatchResult r = evaluate_batch(anng, data, &tree, queries, truth, p.epsilon, setup);
    CHECK(p.precision == r.precision);
    CHECK(p.mean_computations == r.mean_computations);
  }
  CHECK_THROWS_AS(sweep(anng, data, &tree, queries, truth, {}, setup, "x"), InvariantError);

  const std::string csv = curves_to_csv({curve});
  CHECK(csv.rfind("graph_label,epsilon,precision,mean_computations,mean_query_us\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("anng,0") != std::string::npos);
}

TEST_CASE("interpolation between measured precisions") {
  EvalCurve curve;
  curve.graph_label = "synthetic";
  curve.points = {{0.0, 0.8, 100.0, 0.0}, {0.1, 0.9, 200.0, 0.0}, {0.2, 1.0, 400.0, 0.0}};

  CHECK(interpolate_computations_at(curve, 0.9) == 200.0);
  CHECK(interpolate_computations_at(curve, 0.95) == doctest::Approx(300.0).epsilon(1e-12));
  CHECK(interpolate_computations_at(curve, 0.85) == doctest::Approx(150.0).epsilon(1e-12));
  CHECK_THROWS_AS(interpolate_computations_at(curve, 0.7), UnreachableError);
  CHECK_THROWS_AS(interpolate_computations_at(curve, 1.1), UnreachableError);
  CHECK_THROWS_AS(interpolate_computations_at(EvalCurve{}, 0.9), InvariantError);
}

TEST_CASE("scaling study builds one row per size") {
  const Dataset data = make_random_dataset(600, 8, 57);
  const Dataset queries = make_random_dataset(15, 8, 58);

  ScalingConfig cfg;
  cfg.kc = 10;
  cfg.eo = 4;
  cfg.ei = 8;
  cfg.k = 5;

  const auto rows = scaling_study(data, {200, 600}, queries, 0.6, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 200);
  CHECK(rows[1].n == 600);
  for (const ScalingRow& row : rows) {
    CHECK(row.epsilon >= 0.0);
    CHECK(row.mean_computations > 0.0);
  }

  CHECK_THROWS_AS(scaling_study(data, {}, queries, 0.6, cfg), InvariantError);
  CHECK_THROWS_AS(scaling_study(data, {200, 200}, queries, 0.6, cfg), InvariantError);
  CHECK_THROWS_AS(scaling_study(data, {200, 601}, queries, 0.6, cfg), InvariantError);
}
