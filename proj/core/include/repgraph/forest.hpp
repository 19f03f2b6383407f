#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "repgraph/sagenet.hpp"

namespace repgraph {

struct TreeNode {
  int feature = -1;         // -1 marks a leaf
  double threshold = 0.0;   // go left when value <= threshold
  int32_t left = -1;
  int32_t right = -1;
  uint32_t counts[2] = {0, 0};  // training class counts at the node
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  uint8_t predict(const Eigen::RowVectorXd& row) const;
};

struct ForestConfig {
  uint32_t n_trees = 100;
  uint64_t seed = 0;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int n_features = 0;
  int mtry = 0;  // candidate features per split, ceil(sqrt(n_features))
  // Per-feature impurity decrease averaged over trees, normalized to sum 1.
  std::vector<double> importance;
};

// Bootstrap-aggregated Gini trees grown to purity (or until no split
// separates anything), evaluating ceil(sqrt(F)) random candidate features
// per split with midpoint thresholds.
ForestModel train_rf(const Eigen::MatrixXd& xbar, const TrainingSet& train,
                     const ForestConfig& config);

// Majority vote across trees; ties resolve to class 0 (non-repeat).
std::vector<uint8_t> rf_predict(const ForestModel& model, const Eigen::MatrixXd& xbar);

std::vector<double> feature_importance(const ForestModel& model);

// [standardized graph features | embeddings]; never length or coverage.
Eigen::MatrixXd augment_features(const Eigen::MatrixXd& x_standardized,
                                 const Eigen::MatrixXd& z);

void write_forest(const std::filesystem::path& path, const ForestModel& model);
ForestModel read_forest(const std::filesystem::path& path);

}  // namespace repgraph
