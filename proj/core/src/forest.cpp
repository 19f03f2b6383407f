#include "repgraph/forest.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

namespace {

double gini(uint64_t c0, uint64_t c1) {
  uint64_t n = c0 + c1;
  if (n == 0) return 0.0;
  double p0 = static_cast<double>(c0) / static_cast<double>(n);
  double p1 = static_cast<double>(c1) / static_cast<double>(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeBuilder {
  const Eigen::MatrixXd& x;
  const std::vector<uint8_t>& y;  // labels parallel to x rows
  int n_features;
  int mtry;
  Rng& rng;
  uint64_t n_root;
  std::vector<TreeNode> nodes;
  std::vector<double> decrease;  // per-feature weighted impurity decrease

  int32_t build(std::vector<uint32_t>& samples) {
    uint64_t c[2] = {0, 0};
    for (uint32_t s : samples) ++c[y[s]];

    TreeNode node;
    node.counts[0] = static_cast<uint32_t>(c[0]);
    node.counts[1] = static_cast<uint32_t>(c[1]);
    int32_t index = static_cast<int32_t>(nodes.size());
    nodes.push_back(node);
    if (c[0] == 0 || c[1] == 0) return index;  // pure

    // Candidate features: partial Fisher-Yates over all feature indices.
    std::vector<int> features(n_features);
    for (int f = 0; f < n_features; ++f) features[f] = f;
    for (int i = 0; i < mtry; ++i)
      std::swap(features[i], features[i + rng.bounded(n_features - i)]);

    double parent = gini(c[0], c[1]);
    double best_decrease = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, uint8_t>> sorted;
    for (int fi = 0; fi < mtry; ++fi) {
      int f = features[fi];
      sorted.clear();
      for (uint32_t s : samples) sorted.emplace_back(x(s, f), y[s]);
      std::sort(sorted.begin(), sorted.end());
      uint64_t left[2] = {0, 0};
      for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        ++left[sorted[i].second];
        if (sorted[i].first == sorted[i + 1].first) continue;
        uint64_t nl = i + 1, nr = sorted.size() - nl;
        double child = (static_cast<double>(nl) * gini(left[0], left[1]) +
                        static_cast<double>(nr) * gini(c[0] - left[0], c[1] - left[1])) /
                       static_cast<double>(sorted.size());
        double gain = parent - child;
        if (gain > best_decrease + 1e-15) {
          best_decrease = gain;
          best_feature = f;
          best_threshold = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
        }
      }
    }
    if (best_feature < 0) return index;  // nothing among the candidates separates

    std::vector<uint32_t> left_samples, right_samples;
    for (uint32_t s : samples)
      (x(s, best_feature) <= best_threshold ? left_samples : right_samples).push_back(s);

    decrease[best_feature] += static_cast<double>(samples.size()) /
                              static_cast<double>(n_root) * best_decrease;
    samples.clear();
    samples.shrink_to_fit();
    nodes[index].feature = best_feature;
    nodes[index].threshold = best_threshold;
    int32_t l = build(left_samples);
    nodes[index].left = l;
    int32_t r = build(right_samples);
    nodes[index].right = r;
    return index;
  }
};

}  // namespace

uint8_t DecisionTree::predict(const Eigen::RowVectorXd& row) const {
  int32_t at = 0;
  for (;;) {
    const TreeNode& node = nodes[at];
    if (node.feature < 0) {
      if (node.counts[1] > node.counts[0]) return 1;
      return 0;  // majority, ties to non-repeat
    }
    at = row(node.feature) <= node.threshold ? node.left : node.right;
  }
}

ForestModel train_rf(const Eigen::MatrixXd& xbar, const TrainingSet& train,
                     const ForestConfig& config) {
  if (train.nodes.size() < 2)
    throw InputError("train_rf: need at least two training nodes");
  bool has[2] = {false, false};
  for (uint8_t label : train.labels) has[label] = true;
  if (!has[0] || !has[1])
    throw InputError("train_rf: training set contains a single class");

  const int n_features = static_cast<int>(xbar.cols());
  ForestModel model;
  model.n_features = n_features;
  model.mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_features))));
  model.trees.reserve(config.n_trees);

  // Training rows gathered once; trees bootstrap over row indices.
  Eigen::MatrixXd rows(train.nodes.size(), n_features);
  for (size_t i = 0; i < train.nodes.size(); ++i) rows.row(i) = xbar.row(train.nodes[i]);

  std::vector<double> total_decrease(n_features, 0.0);
  for (uint32_t t = 0; t < config.n_trees; ++t) {
    Rng rng(derive_seed(config.seed, t));
    std::vector<uint32_t> samples(train.nodes.size());
    for (auto& s : samples) s = static_cast<uint32_t>(rng.bounded(train.nodes.size()));

    TreeBuilder builder{rows, train.labels, n_features, model.mtry, rng,
                        samples.size(), {}, std::vector<double>(n_features, 0.0)};
    builder.build(samples);
    model.trees.push_back(DecisionTree{std::move(builder.nodes)});
    for (int f = 0; f < n_features; ++f) total_decrease[f] += builder.decrease[f];
  }

  double sum = 0.0;
  for (double d : total_decrease) sum += d;
  model.importance.assign(n_features, 0.0);
  if (sum > 0.0)
    for (int f = 0; f < n_features; ++f) model.importance[f] = total_decrease[f] / sum;
  return model;
}

std::vector<uint8_t> rf_predict(const ForestModel& model, const Eigen::MatrixXd& xbar) {
  if (static_cast<int>(xbar.cols()) != model.n_features)
    throw InputError("rf_predict: feature width does not match the trained model");
  std::vector<uint8_t> labels(xbar.rows());
  for (Eigen::Index i = 0; i < xbar.rows(); ++i) {
    uint32_t votes = 0;
    for (const auto& tree : model.trees) votes += tree.predict(xbar.row(i));
    labels[i] = 2 * votes > model.trees.size() ? 1 : 0;
  }
  return labels;
}

std::vector<double> feature_importance(const ForestModel& model) { return model.importance; }

Eigen::MatrixXd augment_features(const Eigen::MatrixXd& x_standardized,
                                 const Eigen::MatrixXd& z) {
  if (x_standardized.rows() != z.rows())
    throw InputError("augment_features: row count mismatch");
  Eigen::MatrixXd xbar(x_standardized.rows(), x_standardized.cols() + z.cols());
  xbar << x_standardized, z;
  return xbar;
}

void write_forest(const std::filesystem::path& path, const ForestModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes)
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"counts", {n.counts[0], n.counts[1]}}});
    trees.push_back(std::move(nodes));
  }
  nlohmann::json j{{"n_features", model.n_features},
                   {"mtry", model.mtry},
                   {"importance", model.importance},
                   {"trees", std::move(trees)}};
  write_text_file(path, j.dump() + "\n");
}

ForestModel read_forest(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  ForestModel model;
  model.n_features = j.at("n_features").get<int>();
  model.mtry = j.at("mtry").get<int>();
  model.importance = j.at("importance").get<std::vector<double>>();
  for (const auto& tj : j.at("trees")) {
    DecisionTree tree;
    for (const auto& nj : tj) {
      TreeNode n;
      n.feature = nj.at("feature").get<int>();
      n.threshold = nj.at("threshold").get<double>();
      n.left = nj.at("left").get<int32_t>();
      n.right = nj.at("right").get<int32_t>();
      n.counts[0] = nj.at("counts")[0].get<uint32_t>();
      n.counts[1] = nj.at("counts")[1].get<uint32_t>();
      tree.nodes.push_back(n);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace repgraph
