#include "repgraph/pipeline.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/rng.hpp"
#include "repgraph/simdata.hpp"

namespace repgraph {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json metrics_json(const MetricsAggregate& agg) {
  json per_run = json::array();
  for (const auto& r : agg.per_run)
    per_run.push_back({{"accuracy", r.accuracy},
                       {"precision", r.precision},
                       {"recall", r.recall},
                       {"f1", r.f1},
                       {"tp", r.tp},
                       {"fp", r.fp},
                       {"tn", r.tn},
                       {"fn", r.fn},
                       {"precision_defined", r.precision_defined},
                       {"recall_defined", r.recall_defined}});
  return json{{"accuracy", {{"mean", agg.accuracy.mean}, {"std", agg.accuracy.stdev}}},
              {"precision", {{"mean", agg.precision.mean}, {"std", agg.precision.stdev}}},
              {"recall", {{"mean", agg.recall.mean}, {"std", agg.recall.stdev}}},
              {"f1", {{"mean", agg.f1.mean}, {"std", agg.f1.stdev}}},
              {"runs", per_run}};
}

}  // namespace

std::string RunConfig::hash() const {
  std::ostringstream canon;
  canon << k << '|' << p << '|' << epochs << '|' << lr << '|' << n_trees << '|'
        << max_multimap << '|' << approx_betweenness << '|' << exclude_gnn << '|'
        << (mode == RunMode::kSemiSupervised ? "semi" : "self");
  for (uint64_t s : seeds) canon << '|' << s;
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : canon.str()) h = (h ^ static_cast<uint8_t>(c)) * 0x100000001b3ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> unitig_lengths(const std::vector<UnitigRecord>& unitigs) {
  std::vector<double> v(unitigs.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(unitigs[i].length);
  return v;
}

std::vector<double> unitig_coverages(const std::vector<UnitigRecord>& unitigs) {
  std::vector<double> v(unitigs.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = unitigs[i].mean_coverage;
  return v;
}

std::vector<std::string> feature_names(int n_embeddings) {
  std::vector<std::string> names{"betweenness", "kcore", "degree", "weighted_degree",
                                 "clustering"};
  for (int i = 1; i <= n_embeddings; ++i) names.push_back("z" + std::to_string(i));
  return names;
}

void write_embeddings(const std::filesystem::path& path, const Eigen::MatrixXd& z) {
  std::ostringstream out;
  out << "unitig_id";
  for (Eigen::Index c = 0; c < z.cols(); ++c) out << "\tz" << (c + 1);
  out << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.12g", z(i, c));
      out << '\t' << buf;
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

void write_importance(const std::filesystem::path& path,
                      const std::vector<double>& importance, int n_embeddings) {
  auto names = feature_names(n_embeddings);
  if (names.size() < importance.size())
    throw InputError("write_importance: more importances than feature names");
  std::ostringstream out;
  out << "feature\timportance\n";
  char buf[64];
  for (size_t i = 0; i < importance.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", importance[i]);
    out << names[i] << '\t' << buf << '\n';
  }
  write_text_file(path, out.str());
}

DetectResult detect(const RunConfig& config) {
  if (config.seeds.empty()) throw InputError("detect: need at least one seed");
  ensure_directory(config.out_dir);
  json timings;
  auto t0 = std::chrono::steady_clock::now();

  // Assembly.
  auto reads = read_paired_fastq(config.reads1, config.reads2);
  auto unitigs = build_unitigs(reads, config.k);
  if (unitigs.empty()) throw StageError("detect: assembly produced no unitigs");
  timings["assembly"] = seconds_since(t0);

  // Mapping and coverage.
  t0 = std::chrono::steady_clock::now();
  MappingTable table = map_read_prefixes(reads, unitigs, config.k, config.threads);
  finalize_coverage(unitigs, table);
  ensure_directory(config.out_dir / "assembly");
  write_unitigs_fasta(config.out_dir / "assembly" / "unitigs.fa", unitigs);
  write_unitig_table(config.out_dir / "assembly" / "unitigs.tsv", unitigs);
  write_mapping(config.out_dir / "mapping", table);
  timings["mapping"] = seconds_since(t0);

  // Unitig graph.
  t0 = std::chrono::steady_clock::now();
  EdgeMultiset edge_set = build_edges(table, EdgeBuildConfig{config.max_multimap});
  UnitigGraph graph = prune_lowest_quartile(edge_set);
  write_graph(config.out_dir / "graph", graph);
  timings["graph"] = seconds_since(t0);

  // Graph features.
  t0 = std::chrono::steady_clock::now();
  FeatureMatrix features = compute_features(graph, config.threads,
                                            config.approx_betweenness,
                                            derive_seed(config.seeds[0], "betweenness"));
  write_features(config.out_dir / "features", features, unitigs);
  timings["features"] = seconds_since(t0);

  // Pseudo-labels.
  auto lengths = unitig_lengths(unitigs);
  auto coverages = unitig_coverages(unitigs);
  LabelPartition part = pseudolabel(lengths, coverages, config.p);
  write_partition(config.out_dir / "labels", part);

  // Truth (when references are available).
  TruthLabels truth;
  bool has_truth = !config.references.empty();
  if (has_truth) {
    std::vector<std::string> refs;
    for (auto& rec : read_fasta(config.references)) refs.push_back(std::move(rec.sequence));
    truth = label_exact_repeats(unitigs, refs);
    ensure_directory(config.out_dir / "truth");
    write_truth(config.out_dir / "truth" / "truth.tsv", truth);
  }

  // Baselines.
  auto adjacency = graph.adjacency();
  BaselineLabels baselines = run_baselines(part, features, graph, lengths, coverages);
  ensure_directory(config.out_dir / "baselines");
  write_label_column(config.out_dir / "baselines" / "y_base.tsv", baselines.base);
  write_label_column(config.out_dir / "baselines" / "opera.tsv", baselines.opera);
  write_label_column(config.out_dir / "baselines" / "sopra.tsv", baselines.sopra);
  write_label_column(config.out_dir / "baselines" / "mip.tsv", baselines.mip);
  write_label_column(config.out_dir / "baselines" / "bambus2.tsv", baselines.bambus2);
  write_label_column(config.out_dir / "baselines" / "metacarvel.tsv", baselines.metacarvel);

  DetectResult result;
  result.n_unitigs = unitigs.size();
  result.n_edges = graph.edges.size();
  result.n_train = part.repeat.size() + part.non_repeat.size();
  result.has_truth = has_truth;

  json report_json;
  report_json["config"] = {{"k", config.k},
                           {"p", config.p},
                           {"epochs", config.epochs},
                           {"lr", config.lr},
                           {"n_trees", config.n_trees},
                           {"max_multimap", config.max_multimap},
                           {"approx_betweenness", config.approx_betweenness},
                           {"exclude_gnn", config.exclude_gnn},
                           {"mode", config.mode == RunMode::kSemiSupervised ? "semi" : "self"},
                           {"seeds", config.seeds},
                           {"hash", config.hash()}};
  report_json["n_unitigs"] = unitigs.size();
  report_json["n_edges_before"] = graph.edges_before;
  report_json["n_edges"] = graph.edges.size();
  report_json["q1"] = graph.q1;
  report_json["partition"] = {{"repeat", part.repeat.size()},
                              {"non_repeat", part.non_repeat.size()},
                              {"unlabeled", part.unlabeled.size()}};

  if (config.mode == RunMode::kSemiSupervised) {
    if (!has_truth)
      throw InputError("detect: semi-supervised mode needs reference genomes for truth");
    ModelHyper hyper{config.epochs, config.lr, config.n_trees, false};
    SemiResult semi = semi_supervised_run(features.standardized, adjacency, lengths,
                                          coverages, truth, config.p, config.seeds, hyper);
    json semi_json{{"sample_size", semi.sample_size},
                   {"metrics", metrics_json(semi.metrics)}};
    write_text_file(config.out_dir / "semi_metrics.json", semi_json.dump(2) + "\n");
    result.final = semi.metrics;
    report_json["semi"] = std::move(semi_json);
    write_text_file(config.out_dir / "report.json", report_json.dump(2) + "\n");
    return result;
  }

  // Stochastic stages, repeated per seed.
  t0 = std::chrono::steady_clock::now();
  ModelHyper hyper{config.epochs, config.lr, config.n_trees, config.exclude_gnn};
  std::vector<MetricsReport> gnn_runs, rf_runs, final_runs;
  std::vector<double> importance_mean;
  for (uint64_t seed : config.seeds) {
    auto seed_dir = config.out_dir / ("seed_" + std::to_string(seed));
    ensure_directory(seed_dir);
    StageOutputs stage =
        run_models(features.standardized, adjacency, part, lengths, coverages, hyper, seed);
    write_sage_params(seed_dir / "sage_params.json", stage.sage, derive_seed(seed, "gnn"));
    write_loss_trace(seed_dir / "loss_trace.csv", stage.loss_trace);
    write_embeddings(seed_dir / "embeddings.tsv", stage.z);
    write_label_column(seed_dir / "y_gnn.tsv", stage.y_gnn);
    write_forest(seed_dir / "forest.json", stage.forest);
    write_label_column(seed_dir / "y_rf.tsv", stage.y_rf);
    write_importance(seed_dir / "importance.tsv", stage.forest.importance,
                     static_cast<int>(stage.z.cols()));
    write_final_labels(seed_dir, stage.final_labels);

    if (importance_mean.empty()) importance_mean.assign(stage.forest.importance.size(), 0.0);
    for (size_t f = 0; f < stage.forest.importance.size(); ++f)
      importance_mean[f] += stage.forest.importance[f] / config.seeds.size();

    if (has_truth) {
      gnn_runs.push_back(metrics(stage.y_gnn, truth.is_repeat));
      rf_runs.push_back(metrics(stage.y_rf, truth.is_repeat));
      final_runs.push_back(metrics(stage.final_labels.y, truth.is_repeat));
    }
  }
  timings["models"] = seconds_since(t0);
  report_json["timings"] = timings;
  report_json["importance"] = {{"names", feature_names(config.exclude_gnn ? 0 : 8)},
                               {"values", importance_mean}};

  json label_counts;
  for (uint64_t seed : config.seeds) {
    auto labels = read_label_column(config.out_dir / ("seed_" + std::to_string(seed)) /
                                    "final_labels.tsv");
    size_t positives = 0;
    for (uint8_t y : labels) positives += y;
    label_counts[std::to_string(seed)] = positives;
  }
  report_json["final_positive_counts"] = label_counts;

  if (has_truth) {
    result.base = aggregate_metrics({metrics(baselines.base, truth.is_repeat)});
    result.gnn = aggregate_metrics(gnn_runs);
    result.rf = aggregate_metrics(rf_runs);
    result.final = aggregate_metrics(final_runs);
    report_json["stages"] = {{"y_base", metrics_json(result.base)},
                             {"y_gnn", metrics_json(result.gnn)},
                             {"y_rf", metrics_json(result.rf)},
                             {"y_final", metrics_json(result.final)}};
    report_json["baselines"] = {
        {"base", metrics_json(aggregate_metrics({metrics(baselines.base, truth.is_repeat)}))},
        {"opera", metrics_json(aggregate_metrics({metrics(baselines.opera, truth.is_repeat)}))},
        {"sopra", metrics_json(aggregate_metrics({metrics(baselines.sopra, truth.is_repeat)}))},
        {"mip", metrics_json(aggregate_metrics({metrics(baselines.mip, truth.is_repeat)}))},
        {"bambus2",
         metrics_json(aggregate_metrics({metrics(baselines.bambus2, truth.is_repeat)}))},
        {"metacarvel",
         metrics_json(aggregate_metrics({metrics(baselines.metacarvel, truth.is_repeat)}))}};
  }
  write_text_file(config.out_dir / "report.json", report_json.dump(2) + "\n");
  return result;
}

std::string report(const std::filesystem::path& run_dir) {
  std::ostringstream out;
  std::vector<std::string> missing;
  auto path = run_dir / "report.json";
  if (!std::filesystem::exists(path))
    throw InputError("report: missing " + path.string());
  json j = json::parse(read_text_file(path));

  out << "run " << run_dir.string() << " (config " << j["config"]["hash"].get<std::string>()
      << ")\n";
  out << "unitigs: " << j["n_unitigs"] << "  edges: " << j["n_edges"] << " (of "
      << j["n_edges_before"] << ", Q1=" << j["q1"] << ")\n";
  out << "pseudo-labels: R=" << j["partition"]["repeat"]
      << " N=" << j["partition"]["non_repeat"] << " U=" << j["partition"]["unlabeled"]
      << "\n\n";

  auto metric_row = [&](const std::string& name, const json& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s acc %.3f±%.3f  prec %.3f±%.3f  rec %.3f±%.3f  f1 %.3f±%.3f\n",
                  name.c_str(), m["accuracy"]["mean"].get<double>(),
                  m["accuracy"]["std"].get<double>(), m["precision"]["mean"].get<double>(),
                  m["precision"]["std"].get<double>(), m["recall"]["mean"].get<double>(),
                  m["recall"]["std"].get<double>(), m["f1"]["mean"].get<double>(),
                  m["f1"]["std"].get<double>());
    out << buf;
  };

  if (j.contains("stages")) {
    out << "pipeline stages\n";
    for (const char* stage : {"y_base", "y_gnn", "y_rf", "y_final"})
      metric_row(stage, j["stages"][stage]);
    out << "\nbaseline comparison\n";
    for (const char* method : {"base", "opera", "sopra", "mip", "bambus2", "metacarvel"})
      metric_row(method, j["baselines"][method]);
    out << '\n';
  } else if (j.contains("semi")) {
    out << "semi-supervised run (sample size " << j["semi"]["sample_size"] << ")\n";
    metric_row("final", j["semi"]["metrics"]);
    out << '\n';
  } else {
    missing.push_back("stage metrics (run had no references)");
    if (j.contains("final_positive_counts")) {
      out << "final positive counts per seed\n";
      for (auto& [seed, count] : j["final_positive_counts"].items())
        out << "  seed " << seed << ": " << count << '\n';
      out << '\n';
    }
  }

  if (j.contains("importance")) {
    out << "feature importance (mean over seeds)\n";
    auto names = j["importance"]["names"];
    auto values = j["importance"]["values"];
    for (size_t i = 0; i < values.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "  %-16s %.4f\n",
                    names[i].get<std::string>().c_str(), values[i].get<double>());
      out << buf;
    }
    out << '\n';
  }

  if (j.contains("timings")) {
    out << "timings (s)\n";
    for (auto& [stage, secs] : j["timings"].items()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "  %-10s %.2f\n", stage.c_str(), secs.get<double>());
      out << buf;
    }
  }

  if (!missing.empty()) {
    out << "\nmissing artifacts:\n";
    for (const auto& m : missing) out << "  - " << m << '\n';
  }
  return out.str();
}

}  // namespace repgraph
