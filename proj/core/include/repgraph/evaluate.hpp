#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "repgraph/assembly.hpp"
#include "repgraph/finetune.hpp"
#include "repgraph/forest.hpp"
#include "repgraph/graphfeat.hpp"
#include "repgraph/pseudolabel.hpp"
#include "repgraph/sagenet.hpp"

namespace repgraph {

struct TruthLabels {
  std::vector<uint32_t> occurrence_count;
  std::vector<uint8_t> is_repeat;  // occurrence_count >= 2
};

// Counts distinct reference start positions matching the full unitig
// sequence exactly, folding the unitig and its reverse complement into one
// match set. Overlapping occurrences count separately.
TruthLabels label_exact_repeats(const std::vector<UnitigRecord>& unitigs,
                                const std::vector<std::string>& references);

struct MetricsReport {
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  bool precision_defined = true;  // false when no positive predictions
  bool recall_defined = true;     // false when no positive truths
};

// Binary metrics with repeat as the positive class; undefined ratios are
// reported as 0 with the matching flag cleared.
MetricsReport metrics(const std::vector<uint8_t>& y_pred,
                      const std::vector<uint8_t>& truth);

struct MetricStats {
  double mean = 0.0;
  double stdev = 0.0;  // population std across runs
};

struct MetricsAggregate {
  MetricStats accuracy, precision, recall, f1;
  std::vector<MetricsReport> per_run;
};

MetricsAggregate aggregate_metrics(const std::vector<MetricsReport>& runs);

struct ModelHyper {
  int epochs = 2000;
  double lr = 0.01;
  uint32_t n_trees = 100;
  bool exclude_gnn_features = false;  // train the forest on X alone
};

struct StageOutputs {
  std::vector<uint8_t> y_gnn, y_rf;
  FinalLabels final_labels;
  Eigen::MatrixXd z;
  std::vector<double> loss_trace;
  SageParams sage;
  ForestModel forest;
};

// Steps 4-5 for one seed on a fixed Step-3 partition.
StageOutputs run_models(const Eigen::MatrixXd& x_std,
                        const std::vector<std::vector<uint32_t>>& adjacency,
                        const LabelPartition& part, const std::vector<double>& lengths,
                        const std::vector<double>& coverages, const ModelHyper& hyper,
                        uint64_t seed);

struct SweepRow {
  double p = 0.0;
  size_t n_train = 0;
  MetricsAggregate base, final;
};

// Steps 3-5 per percentile value, averaged over seeds on a fixed graph.
std::vector<SweepRow> p_sweep(const Eigen::MatrixXd& x_std,
                              const std::vector<std::vector<uint32_t>>& adjacency,
                              const std::vector<double>& lengths,
                              const std::vector<double>& coverages,
                              const TruthLabels& truth,
                              const std::vector<double>& p_values,
                              const std::vector<uint64_t>& seeds,
                              const ModelHyper& hyper);

struct SemiResult {
  MetricsAggregate metrics;
  size_t sample_size = 0;
};

// Semi-supervised variant: a size-matched uniform sample of true labels
// replaces Step 3, sequencing features join the node features, and the
// fine-tuning step is skipped.
SemiResult semi_supervised_run(const Eigen::MatrixXd& x_std,
                               const std::vector<std::vector<uint32_t>>& adjacency,
                               const std::vector<double>& lengths,
                               const std::vector<double>& coverages,
                               const TruthLabels& truth, double p,
                               const std::vector<uint64_t>& seeds,
                               const ModelHyper& hyper);

void write_truth(const std::filesystem::path& path, const TruthLabels& truth);
// Accepts the native 3-column file or an external 2-column (id, count) TSV.
TruthLabels read_truth(const std::filesystem::path& path);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace repgraph
