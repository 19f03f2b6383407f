#include "repgraph/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "repgraph/dna.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

namespace {

constexpr uint64_t kHashBase = 1099511628211ULL;

uint64_t poly_hash(std::string_view s) {
  uint64_t h = 0;
  for (char c : s) h = h * kHashBase + static_cast<uint8_t>(c);
  return h;
}

struct Candidate {
  uint32_t unitig;
  bool rc;  // entry key hashes the reverse complement
};

}  // namespace

TruthLabels label_exact_repeats(const std::vector<UnitigRecord>& unitigs,
                                const std::vector<std::string>& references) {
  if (references.empty()) throw InputError("label_exact_repeats: no references");
  TruthLabels truth;
  truth.occurrence_count.assign(unitigs.size(), 0);
  truth.is_repeat.assign(unitigs.size(), 0);

  // Group by length so each reference is scanned once per distinct length.
  std::unordered_map<uint64_t, std::vector<uint32_t>> by_length;
  for (const auto& u : unitigs) by_length[u.length].push_back(u.id);

  std::vector<std::string> rc_cache(unitigs.size());
  for (const auto& [length, ids] : by_length) {
    std::unordered_map<uint64_t, std::vector<Candidate>> table;
    for (uint32_t id : ids) {
      rc_cache[id] = reverse_complement(unitigs[id].sequence);
      table[poly_hash(unitigs[id].sequence)].push_back({id, false});
      if (rc_cache[id] != unitigs[id].sequence)
        table[poly_hash(rc_cache[id])].push_back({id, true});
    }

    uint64_t lead_power = 1;  // kHashBase^(length-1)
    for (uint64_t i = 1; i < length; ++i) lead_power *= kHashBase;

    for (const auto& ref : references) {
      if (ref.size() < length) continue;
      uint64_t h = poly_hash(std::string_view(ref).substr(0, length));
      for (size_t pos = 0;; ++pos) {
        auto it = table.find(h);
        if (it != table.end()) {
          std::string_view window(ref.data() + pos, length);
          for (const auto& cand : it->second) {
            const std::string& expected =
                cand.rc ? rc_cache[cand.unitig] : unitigs[cand.unitig].sequence;
            if (window == expected) ++truth.occurrence_count[cand.unitig];
          }
        }
        if (pos + length >= ref.size()) break;
        h -= static_cast<uint8_t>(ref[pos]) * lead_power;
        h = h * kHashBase + static_cast<uint8_t>(ref[pos + length]);
      }
    }
  }
  for (size_t i = 0; i < unitigs.size(); ++i)
    truth.is_repeat[i] = truth.occurrence_count[i] >= 2 ? 1 : 0;
  return truth;
}

MetricsReport metrics(const std::vector<uint8_t>& y_pred,
                      const std::vector<uint8_t>& truth) {
  if (y_pred.size() != truth.size())
    throw InputError("metrics: prediction and truth lengths differ");
  MetricsReport r;
  for (size_t i = 0; i < y_pred.size(); ++i) {
    if (truth[i] && y_pred[i]) ++r.tp;
    else if (!truth[i] && y_pred[i]) ++r.fp;
    else if (truth[i] && !y_pred[i]) ++r.fn;
    else ++r.tn;
  }
  uint64_t n = y_pred.size();
  r.accuracy = n ? static_cast<double>(r.tp + r.tn) / static_cast<double>(n) : 0.0;
  if (r.tp + r.fp > 0)
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  else
    r.precision_defined = false;
  if (r.tp + r.fn > 0)
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  else
    r.recall_defined = false;
  if (r.precision + r.recall > 0)
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

MetricsAggregate aggregate_metrics(const std::vector<MetricsReport>& runs) {
  MetricsAggregate agg;
  agg.per_run = runs;
  if (runs.empty()) return agg;
  auto stats = [&](auto member) {
    MetricStats s;
    for (const auto& r : runs) s.mean += r.*member;
    s.mean /= static_cast<double>(runs.size());
    for (const auto& r : runs) s.stdev += (r.*member - s.mean) * (r.*member - s.mean);
    s.stdev = std::sqrt(s.stdev / static_cast<double>(runs.size()));
    return s;
  };
  agg.accuracy = stats(&MetricsReport::accuracy);
  agg.precision = stats(&MetricsReport::precision);
  agg.recall = stats(&MetricsReport::recall);
  agg.f1 = stats(&MetricsReport::f1);
  return agg;
}

StageOutputs run_models(const Eigen::MatrixXd& x_std,
                        const std::vector<std::vector<uint32_t>>& adjacency,
                        const LabelPartition& part, const std::vector<double>& lengths,
                        const std::vector<double>& coverages, const ModelHyper& hyper,
                        uint64_t seed) {
  TrainingSet train;
  for (uint32_t i : part.repeat) {
    train.nodes.push_back(i);
    train.labels.push_back(1);
  }
  for (uint32_t i : part.non_repeat) {
    train.nodes.push_back(i);
    train.labels.push_back(0);
  }

  TrainConfig gnn_config;
  gnn_config.epochs = hyper.epochs;
  gnn_config.lr = hyper.lr;
  gnn_config.seed = derive_seed(seed, "gnn");

  StageOutputs out;
  TrainResult trained = sage_train(x_std, adjacency, train, gnn_config);
  out.sage = trained.params;
  out.loss_trace = std::move(trained.loss_trace);
  Embeddings emb = sage_forward(x_std, adjacency, out.sage);
  out.z = emb.z;
  out.y_gnn = logits_argmax(emb.logits);

  Eigen::MatrixXd xbar =
      hyper.exclude_gnn_features ? x_std : augment_features(x_std, out.z);
  out.forest = train_rf(xbar, train, ForestConfig{hyper.n_trees, derive_seed(seed, "rf")});
  out.y_rf = rf_predict(out.forest, xbar);

  out.final_labels = finetune(out.y_rf, part, lengths, coverages, part.p);
  return out;
}

std::vector<SweepRow> p_sweep(const Eigen::MatrixXd& x_std,
                              const std::vector<std::vector<uint32_t>>& adjacency,
                              const std::vector<double>& lengths,
                              const std::vector<double>& coverages,
                              const TruthLabels& truth,
                              const std::vector<double>& p_values,
                              const std::vector<uint64_t>& seeds,
                              const ModelHyper& hyper) {
  if (seeds.empty()) throw InputError("p_sweep: need at least one seed");
  std::vector<SweepRow> rows;
  for (double p : p_values) {
    LabelPartition part = pseudolabel(lengths, coverages, p);
    SweepRow row;
    row.p = p;
    row.n_train = part.repeat.size() + part.non_repeat.size();
    std::vector<MetricsReport> base_runs, final_runs;
    std::vector<uint8_t> y_base(part.n_nodes(), 0);
    for (uint32_t i : part.repeat) y_base[i] = 1;
    for (uint64_t seed : seeds) {
      StageOutputs stage =
          run_models(x_std, adjacency, part, lengths, coverages, hyper, seed);
      base_runs.push_back(metrics(y_base, truth.is_repeat));
      final_runs.push_back(metrics(stage.final_labels.y, truth.is_repeat));
    }
    row.base = aggregate_metrics(base_runs);
    row.final = aggregate_metrics(final_runs);
    rows.push_back(std::move(row));
  }
  return rows;
}

SemiResult semi_supervised_run(const Eigen::MatrixXd& x_std,
                               const std::vector<std::vector<uint32_t>>& adjacency,
                               const std::vector<double>& lengths,
                               const std::vector<double>& coverages,
                               const TruthLabels& truth, double p,
                               const std::vector<uint64_t>& seeds,
                               const ModelHyper& hyper) {
  const size_t n = lengths.size();
  if (truth.is_repeat.size() != n)
    throw InputError("semi_supervised_run: truth does not cover all nodes");

  // Same training-set size Step 3 would have produced at this p.
  LabelPartition part = pseudolabel(lengths, coverages, p);
  size_t sample_size = part.repeat.size() + part.non_repeat.size();
  if (sample_size < 2)
    throw InputError("semi_supervised_run: pseudo-label training set too small");

  // Sequencing features join the node features in this mode.
  Eigen::VectorXd len_col(n), cov_col(n);
  for (size_t i = 0; i < n; ++i) {
    len_col(i) = lengths[i];
    cov_col(i) = coverages[i];
  }
  Eigen::MatrixXd x7(n, x_std.cols() + 2);
  x7 << x_std, standardize_column(len_col), standardize_column(cov_col);

  std::vector<MetricsReport> runs;
  for (uint64_t seed : seeds) {
    TrainingSet train;
    const int max_retries = 20;
    for (int attempt = 0;; ++attempt) {
      if (attempt == max_retries)
        throw StageError("semi_supervised_run: sampled training set is single-class "
                         "after " + std::to_string(max_retries) + " retries");
      Rng rng(derive_seed(derive_seed(seed, "semi-sample"), attempt));
      std::vector<uint32_t> ids(n);
      for (size_t i = 0; i < n; ++i) ids[i] = static_cast<uint32_t>(i);
      for (size_t i = 0; i < sample_size; ++i)
        std::swap(ids[i], ids[i + rng.bounded(n - i)]);
      ids.resize(sample_size);
      std::sort(ids.begin(), ids.end());

      bool has[2] = {false, false};
      for (uint32_t i : ids) has[truth.is_repeat[i]] = true;
      if (!has[0] || !has[1]) continue;

      train.nodes = ids;
      train.labels.clear();
      for (uint32_t i : ids) train.labels.push_back(truth.is_repeat[i]);
      break;
    }

    TrainConfig gnn_config;
    gnn_config.epochs = hyper.epochs;
    gnn_config.lr = hyper.lr;
    gnn_config.seed = derive_seed(seed, "gnn");
    TrainResult trained = sage_train(x7, adjacency, train, gnn_config);
    Embeddings emb = sage_forward(x7, adjacency, trained.params);

    Eigen::MatrixXd xbar = augment_features(x7, emb.z);
    ForestModel forest =
        train_rf(xbar, train, ForestConfig{hyper.n_trees, derive_seed(seed, "rf")});
    // No fine-tuning in this mode: the forest output is final.
    runs.push_back(metrics(rf_predict(forest, xbar), truth.is_repeat));
  }
  return SemiResult{aggregate_metrics(runs), sample_size};
}

void write_truth(const std::filesystem::path& path, const TruthLabels& truth) {
  std::ostringstream out;
  out << "unitig_id\tcount\tis_repeat\n";
  for (size_t i = 0; i < truth.is_repeat.size(); ++i)
    out << i << '\t' << truth.occurrence_count[i] << '\t' << int(truth.is_repeat[i]) << '\n';
  write_text_file(path, out.str());
}

TruthLabels read_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  TruthLabels truth;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() < 2)
      throw ParseError(path.string() + ": expected (unitig_id, count[, is_repeat])");
    uint32_t count = static_cast<uint32_t>(std::stoul(fields[1]));
    truth.occurrence_count.push_back(count);
    truth.is_repeat.push_back(count >= 2 ? 1 : 0);
  }
  return truth;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "p,n_train,base_f1_mean,base_f1_std,final_accuracy_mean,final_precision_mean,"
         "final_recall_mean,final_f1_mean,final_f1_std\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%g,%zu,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.p,
                  r.n_train, r.base.f1.mean, r.base.f1.stdev, r.final.accuracy.mean,
                  r.final.precision.mean, r.final.recall.mean, r.final.f1.mean,
                  r.final.f1.stdev);
    out << buf;
  }
  write_text_file(path, out.str());
}

}  // namespace repgraph
