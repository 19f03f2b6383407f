#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "repgraph/unigraph.hpp"

namespace repgraph {

struct SageConfig {
  int in_dim = 5;
  int hidden1 = 16;
  int hidden2 = 8;  // embedding dimension
  int classes = 2;
};

// Two mean-aggregation layers plus a linear head. All linear maps are
// (out x in) with a bias; the neighbor mean excludes the node itself and is
// zero for isolated nodes.
struct SageParams {
  SageConfig config;
  Eigen::MatrixXd w_neigh1, w_self1;
  Eigen::VectorXd bias1;
  Eigen::MatrixXd w_neigh2, w_self2;
  Eigen::VectorXd bias2;
  Eigen::MatrixXd head_w;
  Eigen::VectorXd head_b;

  static SageParams zeros(const SageConfig& config);
  static SageParams glorot(const SageConfig& config, uint64_t seed);

  Eigen::VectorXd flatten() const;
  static SageParams unflatten(const SageConfig& config, const Eigen::VectorXd& theta);
  Eigen::Index n_params() const;
};

struct Embeddings {
  Eigen::MatrixXd z;       // N x hidden2
  Eigen::MatrixXd logits;  // N x classes
};

struct TrainingSet {
  std::vector<uint32_t> nodes;
  std::vector<uint8_t> labels;  // 1 = repeat
};

struct TrainConfig {
  int epochs = 2000;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  uint64_t seed = 0;
};

struct TrainResult {
  SageParams params;
  std::vector<double> loss_trace;  // per-epoch loss before the update
};

Embeddings sage_forward(const Eigen::MatrixXd& features,
                        const std::vector<std::vector<uint32_t>>& adjacency,
                        const SageParams& params);

// Summed softmax cross-entropy over the training nodes.
double sage_loss(const Eigen::MatrixXd& logits, const TrainingSet& train);

// Analytic gradient of sage_loss w.r.t. every parameter, flattened in the
// same order as SageParams::flatten.
Eigen::VectorXd sage_gradient(const Eigen::MatrixXd& features,
                              const std::vector<std::vector<uint32_t>>& adjacency,
                              const SageParams& params, const TrainingSet& train,
                              double* loss_out = nullptr);

TrainResult sage_train(const Eigen::MatrixXd& features,
                       const std::vector<std::vector<uint32_t>>& adjacency,
                       const TrainingSet& train, const TrainConfig& config);

// Max relative error between analytic and central-difference gradients.
double sage_grad_check(const Eigen::MatrixXd& features,
                       const std::vector<std::vector<uint32_t>>& adjacency,
                       const SageParams& params, const TrainingSet& train,
                       double step = 1e-5);

// Argmax of the head logits; ties resolve to class 0.
std::vector<uint8_t> logits_argmax(const Eigen::MatrixXd& logits);

void write_sage_params(const std::filesystem::path& path, const SageParams& params,
                       uint64_t seed);
SageParams read_sage_params(const std::filesystem::path& path);
void write_loss_trace(const std::filesystem::path& path, const std::vector<double>& trace);

}  // namespace repgraph
