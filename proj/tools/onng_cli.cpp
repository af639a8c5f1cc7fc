#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "onng/bench.hpp"
#include "onng/construct.hpp"
#include "onng/core.hpp"
#include "onng/io.hpp"
#include "onng/optimize.hpp"
#include "onng/rng.hpp"
#include "onng/search.hpp"
#include "onng/visited.hpp"
#include "onng/vptree.hpp"

namespace {

using namespace onng;

Metric parse_metric(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "angular") return Metric::Angular;
  throw FormatError("unknown metric: " + name);
}

Dataset load_dataset(const std::string& path, Metric metric) {
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".bvecs") == 0)
    return read_bvecs(path, metric);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
    return read_csv(path, metric);
  return read_fvecs(path, metric);
}

GroundTruth truth_from_ivecs(const std::string& path) {
  GroundTruth truth;
  for (const auto& row : read_ivecs(path)) {
    auto& entry = truth.emplace_back();
    entry.reserve(row.size());
    for (std::int32_t id : row) {
      if (id < 0) throw FormatError("negative id in ground truth");
      entry.push_back({static_cast<NodeId>(id), 0.0});
    }
  }
  return truth;
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot create " + path);
  out << body;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<std::size_t>(std::stoull(item)));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

struct CommonSearchFlags {
  int k = 20;
  bool dynamic = false;
  int e0 = 30;
  double we = 20.0;
  std::string seed_mode = "tree";
  int n_random_seeds = 10;
  std::uint64_t seed = 0;

  SearchSetup to_setup() const {
    SearchSetup setup;
    setup.k = k;
    if (dynamic) setup.dynamic = DynamicDegree{e0, we};
    setup.seed_mode = seed_mode == "random" ? SeedMode::Random : SeedMode::Tree;
    setup.n_random_seeds = n_random_seeds;
    setup.seed_base = seed;
    return setup;
  }
};

void add_search_flags(CLI::App* cmd, CommonSearchFlags& flags) {
  cmd->add_option("--k", flags.k, "result count");
  cmd->add_flag("--dynamic", flags.dynamic, "cap the per-node edge scan from epsilon");
  cmd->add_option("--e0", flags.e0, "edge cap offset");
  cmd->add_option("--we", flags.we, "edge cap exponent weight");
  cmd->add_option("--seed-mode", flags.seed_mode, "tree or random")
      ->check(CLI::IsMember({"tree", "random"}));
  cmd->add_option("--n-random-seeds", flags.n_random_seeds, "seeds per query in random mode");
}

int run(int argc, char** argv) {
  CLI::App app{"graph-based approximate nearest neighbor toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "fixes all randomness")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a uniform random dataset");
  std::size_t synth_n = 1000;
  std::uint32_t synth_dim = 16;
  std::string synth_out;
  synth->add_option("--n", synth_n, "vector count")->capture_default_str();
  synth->add_option("--dim", synth_dim, "components per vector")->capture_default_str();
  synth->add_option("--out", synth_out, "output fvecs path")->required();
  synth->callback([&] {
    Dataset data(synth_dim, Metric::Euclidean);
    data.reserve(synth_n);
    std::uint64_t state = seed;
    std::vector<float> row(synth_dim);
    for (std::size_t i = 0; i < synth_n; ++i) {
      for (auto& f : row)
        f = static_cast<float>((splitmix64(state) >> 11) * 0x1.0p-53);
      data.add(row);
    }
    write_fvecs(synth_out, data);
    std::cerr << "wrote " << synth_n << " vectors to " << synth_out << "\n";
  });

  // build
  auto* build = app.add_subcommand("build", "construct the incremental neighborhood graph");
  std::string build_data, build_out, build_metric = "euclidean";
  int build_kc = 50;
  double build_eps_c = 0.1;
  bool build_no_tree = false;
  build->add_option("--data", build_data, "input vectors (fvecs/bvecs/csv)")->required();
  build->add_option("--out", build_out, "output index path")->required();
  build->add_option("--kc", build_kc, "edges per insertion")->capture_default_str();
  build->add_option("--epsilon-c", build_eps_c, "construction epsilon")->capture_default_str();
  build->add_option("--metric", build_metric, "euclidean or angular")
      ->check(CLI::IsMember({"euclidean", "angular"}));
  build->add_flag("--no-tree", build_no_tree, "skip the seed tree");
  build->callback([&] {
    const Dataset data = load_dataset(build_data, parse_metric(build_metric));
    const Graph anng = construct_anng(data, build_kc, build_eps_c, seed);
    if (build_no_tree) {
      save_index(build_out, data, anng);
    } else {
      const VpTree tree = VpTree::build(data, seed);
      save_index(build_out, data, anng, &tree);
    }
    const GraphStats s = graph_stats(anng);
    std::cerr << "nodes " << anng.node_count() << ", edges " << anng.edge_count()
              << ", mean outdegree " << s.mean_outdegree << "\n";
  });

  // adjust
  auto* adjust = app.add_subcommand("adjust", "degree and path adjustment");
  std::string adjust_in, adjust_out;
  int adjust_kc = 50, adjust_eo = 10, adjust_ei = 40;
  bool adjust_constrained = false, adjust_no_path = false;
  adjust->add_option("--in", adjust_in, "input index")->required();
  adjust->add_option("--out", adjust_out, "output index")->required();
  adjust->add_option("--kc", adjust_kc, "edge truncation before adjustment")->capture_default_str();
  adjust->add_option("--eo", adjust_eo, "expected outdegree")->capture_default_str();
  adjust->add_option("--ei", adjust_ei, "expected indegree")->capture_default_str();
  adjust->add_flag("--constrained", adjust_constrained, "cap indegrees while selecting");
  adjust->add_flag("--no-path-adjust", adjust_no_path, "skip shortcut-edge pruning");
  adjust->callback([&] {
    LoadedIndex index = load_index(adjust_in);
    if (adjust_kc <= adjust_eo || adjust_kc <= adjust_ei)
      throw InvariantError("kc must exceed both degree budgets");
    const Graph aknng = derive_aknng(index.graph, adjust_kc);
    const Graph adjusted =
        adjust_graph(aknng, adjust_eo, adjust_ei, adjust_constrained, !adjust_no_path);
    save_index(adjust_out, index.data, adjusted, index.tree ? &*index.tree : nullptr);
    const GraphStats s = graph_stats(adjusted);
    std::cerr << "mean outdegree " << s.mean_outdegree << ", edges " << adjusted.edge_count()
              << "\n";
  });

  // optimize
  auto* optimize = app.add_subcommand("optimize", "hill-climb the degree budgets");
  std::string opt_in, opt_queries, opt_truth, opt_trace;
  int opt_kc = 50, opt_step = 5, opt_k = 20;
  double opt_pl = 0.90, opt_pu = 0.98;
  bool opt_constrained = false;
  optimize->add_option("--in", opt_in, "input index")->required();
  optimize->add_option("--queries", opt_queries, "query vectors")->required();
  optimize->add_option("--truth", opt_truth, "ground truth ivecs (computed when omitted)");
  optimize->add_option("--kc", opt_kc, "edge truncation")->capture_default_str();
  optimize->add_option("--pl", opt_pl, "lower target precision")->capture_default_str();
  optimize->add_option("--pu", opt_pu, "upper target precision")->capture_default_str();
  optimize->add_option("--step", opt_step, "hill-climb step")->capture_default_str();
  optimize->add_option("--k", opt_k, "result count during measurement")->capture_default_str();
  optimize->add_option("--trace", opt_trace, "write the candidate trace CSV here");
  optimize->add_flag("--constrained", opt_constrained, "cap indegrees while selecting");
  optimize->callback([&] {
    const LoadedIndex index = load_index(opt_in);
    const Graph aknng = derive_aknng(index.graph, opt_kc);
    OptimizerConfig cfg;
    cfg.step = opt_step;
    cfg.queries = load_dataset(opt_queries, index.data.metric());
    cfg.truth = opt_truth.empty() ? compute_ground_truth(index.data, cfg.queries, 100)
                                  : truth_from_ivecs(opt_truth);
    cfg.setup.k = opt_k;
    cfg.tree_seed = seed;
    const OptimizeResult best =
        optimize_degrees(aknng, index.data, TargetRange{opt_pl, opt_pu}, cfg, opt_constrained);
    if (!opt_trace.empty()) write_text(opt_trace, trace_to_csv(best.trace));
    std::cout << "eo " << best.eo << "\nei " << best.ei << "\nloss " << best.loss << "\n";
  });

  // search
  auto* search = app.add_subcommand("search", "query an index");
  std::string search_in, search_queries;
  double search_eps = 0.1;
  CommonSearchFlags search_flags;
  search->add_option("--in", search_in, "input index")->required();
  search->add_option("--queries", search_queries, "query vectors")->required();
  search->add_option("--epsilon", search_eps, "range expansion")->capture_default_str();
  add_search_flags(search, search_flags);
  search->callback([&] {
    const LoadedIndex index = load_index(search_in);
    const Dataset queries = load_dataset(search_queries, index.data.metric());
    search_flags.seed = seed;
    const SearchSetup setup = search_flags.to_setup();
    if (setup.seed_mode == SeedMode::Tree && !index.tree)
      throw InvariantError("index has no tree; use --seed-mode random");

    SearchParams params;
    params.k = setup.k;
    params.epsilon = search_eps;
    params.dynamic = setup.dynamic;

    std::uint64_t total = 0;
    std::ostringstream body;
    body << std::setprecision(12);
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const float* q = queries.vec(static_cast<NodeId>(i));
      SearchResult res;
      if (setup.seed_mode == SeedMode::Tree) {
        res = knn_search_with_tree(index.graph, index.data, *index.tree, q, params);
      } else {
        const auto seeds = seeds_random(index.graph.node_count(), setup.n_random_seeds,
                                        setup.seed_base + i);
        res = knn_search(index.graph, index.data, seeds, q, params);
      }
      total += res.distance_computations;
      for (std::size_t h = 0; h < res.hits.size(); ++h) {
        if (h > 0) body << ' ';
        body << res.hits[h].id << ':' << res.hits[h].distance;
      }
      body << '\n';
    }
    std::cout << body.str();
    std::cerr << "mean computations "
              << static_cast<double>(total) / static_cast<double>(queries.size()) << "\n";
  });

  // gt
  auto* gt = app.add_subcommand("gt", "exact ground truth by full scan");
  std::string gt_data, gt_queries, gt_out, gt_metric = "euclidean";
  int gt_k = 100;
  gt->add_option("--data", gt_data, "dataset vectors")->required();
  gt->add_option("--queries", gt_queries, "query vectors")->required();
  gt->add_option("--out", gt_out, "output ivecs path")->required();
  gt->add_option("--k", gt_k, "neighbors per query")->capture_default_str();
  gt->add_option("--metric", gt_metric, "euclidean or angular")
      ->check(CLI::IsMember({"euclidean", "angular"}));
  gt->callback([&] {
    const Metric metric = parse_metric(gt_metric);
    const Dataset data = load_dataset(gt_data, metric);
    const Dataset queries = load_dataset(gt_queries, metric);
    const GroundTruth truth = compute_ground_truth(data, queries, gt_k);
    std::vector<std::vector<std::int32_t>> rows;
    rows.reserve(truth.size());
    for (const auto& entry : truth) {
      auto& row = rows.emplace_back();
      row.reserve(entry.size());
      for (const Hit& h : entry) row.push_back(static_cast<std::int32_t>(h.id));
    }
    write_ivecs(gt_out, rows);
    std::cerr << "wrote truth for " << rows.size() << " queries\n";
  });

  // bench
  auto* bench = app.add_subcommand("bench", "sweep epsilon and emit the curve CSV");
  std::string bench_in, bench_queries, bench_truth, bench_out, bench_label = "graph";
  std::string bench_eps = "0,0.02,0.05,0.1,0.2,0.4,0.7,1.0";
  bool bench_timed = false;
  CommonSearchFlags bench_flags;
  bench->add_option("--in", bench_in, "input index")->required();
  bench->add_option("--queries", bench_queries, "query vectors")->required();
  bench->add_option("--truth", bench_truth, "ground truth ivecs")->required();
  bench->add_option("--epsilons", bench_eps, "comma-separated list")->capture_default_str();
  bench->add_option("--label", bench_label, "curve label")->capture_default_str();
  bench->add_option("--out", bench_out, "CSV path (stdout when omitted)");
  bench->add_flag("--timed", bench_timed, "also record wall-clock query time");
  add_search_flags(bench, bench_flags);
  bench->callback([&] {
    const LoadedIndex index = load_index(bench_in);
    const Dataset queries = load_dataset(bench_queries, index.data.metric());
    const GroundTruth truth = truth_from_ivecs(bench_truth);
    bench_flags.seed = seed;
    const SearchSetup setup = bench_flags.to_setup();
    if (setup.seed_mode == SeedMode::Tree && !index.tree)
      throw InvariantError("index has no tree; use --seed-mode random");
    const EvalCurve curve =
        sweep(index.graph, index.data, index.tree ? &*index.tree : nullptr, queries, truth,
              parse_double_list(bench_eps), setup, bench_label, bench_timed);
    write_text(bench_out, curves_to_csv({curve}));
  });

  // stats
  auto* stats = app.add_subcommand("stats", "degree and edge-length statistics");
  std::string stats_in;
  stats->add_option("--in", stats_in, "input index")->required();
  stats->callback([&] {
    const LoadedIndex index = load_index(stats_in);
    const GraphStats s = graph_stats(index.graph);
    std::cout << "nodes " << index.graph.node_count() << "\n"
              << "edges " << index.graph.edge_count() << "\n"
              << "mean_outdegree " << s.mean_outdegree << "\n"
              << "mean_top5_outdegree " << s.mean_top5_outdegree << "\n"
              << "mean_bottom5_indegree " << s.mean_bottom5_indegree << "\n"
              << "mean_indegree_distance " << s.mean_indegree_distance << "\n"
              << "tree " << (index.tree ? "yes" : "no") << "\n";
  });

  // scaling
  auto* scaling = app.add_subcommand("scaling", "computations vs dataset size at fixed recall");
  std::string scal_data, scal_queries, scal_out, scal_sizes = "1000,4000,16000";
  double scal_recall = 0.9;
  ScalingConfig scal_cfg;
  scaling->add_option("--data", scal_data, "dataset vectors")->required();
  scaling->add_option("--queries", scal_queries, "query vectors")->required();
  scaling->add_option("--sizes", scal_sizes, "comma-separated ladder")->capture_default_str();
  scaling->add_option("--recall", scal_recall, "target recall")->capture_default_str();
  scaling->add_option("--kc", scal_cfg.kc, "edges per insertion")->capture_default_str();
  scaling->add_option("--eo", scal_cfg.eo, "expected outdegree")->capture_default_str();
  scaling->add_option("--ei", scal_cfg.ei, "expected indegree")->capture_default_str();
  scaling->add_option("--k", scal_cfg.k, "result count")->capture_default_str();
  scaling->add_option("--out", scal_out, "CSV path (stdout when omitted)");
  scaling->callback([&] {
    const Dataset data = load_dataset(scal_data, Metric::Euclidean);
    const Dataset queries = load_dataset(scal_queries, Metric::Euclidean);
    scal_cfg.seed = seed;
    const auto rows = scaling_study(data, parse_size_list(scal_sizes), queries, scal_recall,
                                    scal_cfg);
    std::ostringstream os;
    os << std::setprecision(12) << "n,epsilon,mean_computations\n";
    for (const auto& row : rows)
      os << row.n << ',' << row.epsilon << ',' << row.mean_computations << '\n';
    write_text(scal_out, os.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const UnreachableError& e) {
    std::cerr << "unreachable target: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  }
}
