#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "repgraph/unigraph.hpp"

namespace repgraph {

// Fixed column order of the graph feature matrix.
enum FeatureColumn : int {
  kBetweenness = 0,
  kKcore = 1,
  kDegree = 2,
  kWeightedDegree = 3,
  kClustering = 4,
};
inline constexpr int kGraphFeatureCount = 5;

struct FeatureMatrix {
  Eigen::MatrixXd raw;           // N x 5, natural scales
  Eigen::MatrixXd standardized;  // N x 5, z-scored per column
  Eigen::VectorXd col_mean;      // length 5
  Eigen::VectorXd col_std;       // length 5 (1 where the column is constant)
};

// Exact Brandes accumulation on the unweighted topology: pair dependencies
// halved for undirectedness, endpoints excluded, no normalization. With
// 0 < sample_sources < N, dependencies from a seeded uniform source sample
// are scaled by N/|S| instead.
std::vector<double> betweenness(const UnitigGraph& graph, unsigned n_threads = 1,
                                uint32_t sample_sources = 0, uint64_t sample_seed = 0);

std::vector<uint32_t> kcore(const UnitigGraph& graph);
std::vector<uint32_t> degree(const UnitigGraph& graph);
std::vector<uint64_t> weighted_degree(const UnitigGraph& graph);
std::vector<double> clustering(const UnitigGraph& graph);

FeatureMatrix assemble_feature_matrix(const std::vector<double>& betweenness,
                                      const std::vector<uint32_t>& kcore,
                                      const std::vector<uint32_t>& degree,
                                      const std::vector<uint64_t>& weighted_degree,
                                      const std::vector<double>& clustering);

FeatureMatrix compute_features(const UnitigGraph& graph, unsigned n_threads = 1,
                               uint32_t sample_sources = 0, uint64_t sample_seed = 0);

// Columns z-scored in place; constant columns map to zero.
Eigen::VectorXd standardize_column(const Eigen::VectorXd& v);

void write_features(const std::filesystem::path& dir, const FeatureMatrix& features,
                    const std::vector<UnitigRecord>& unitigs);
FeatureMatrix read_features(const std::filesystem::path& dir, size_t n_nodes);

}  // namespace repgraph
