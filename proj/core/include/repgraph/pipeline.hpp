#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "repgraph/baselines.hpp"
#include "repgraph/evaluate.hpp"
#include "repgraph/unigraph.hpp"

namespace repgraph {

enum class RunMode { kSelfSupervised, kSemiSupervised };

// Defaults follow the reference experimental setup: k=51, two SAGE layers of
// 16 and 8 channels trained 2000 epochs at lr 0.01, 100 Gini trees.
struct RunConfig {
  int k = 51;
  double p = 25.0;
  int epochs = 2000;
  double lr = 0.01;
  uint32_t n_trees = 100;
  std::vector<uint64_t> seeds = {1};
  unsigned threads = 1;
  uint32_t max_multimap = 50;
  uint32_t approx_betweenness = 0;  // source sample size; 0 = exact Brandes
  bool exclude_gnn = false;
  RunMode mode = RunMode::kSelfSupervised;

  std::filesystem::path reads1, reads2;
  std::filesystem::path references;  // optional; enables truth + metrics
  std::filesystem::path out_dir;

  std::string hash() const;  // FNV-1a over the canonical serialization
};

struct DetectResult {
  size_t n_unitigs = 0;
  size_t n_edges = 0;
  size_t n_train = 0;
  bool has_truth = false;
  MetricsAggregate base, gnn, rf, final;  // empty when truth is absent
};

// Full pipeline: assembly, mapping, graph, features, pseudo-labels, then the
// stochastic stages once per seed. Every intermediate is persisted under
// config.out_dir; metrics are computed when references are given.
DetectResult detect(const RunConfig& config);

// Consolidated human-readable summary of a finished run directory. Missing
// artifacts are listed rather than silently skipped.
std::string report(const std::filesystem::path& run_dir);

std::vector<double> unitig_lengths(const std::vector<UnitigRecord>& unitigs);
std::vector<double> unitig_coverages(const std::vector<UnitigRecord>& unitigs);

// betweenness, kcore, degree, weighted_degree, clustering, z1..z8.
std::vector<std::string> feature_names(int n_embeddings);

void write_embeddings(const std::filesystem::path& path, const Eigen::MatrixXd& z);
void write_importance(const std::filesystem::path& path,
                      const std::vector<double>& importance, int n_embeddings);

}  // namespace repgraph
