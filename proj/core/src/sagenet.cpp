#include "repgraph/sagenet.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

namespace {

Eigen::MatrixXd neighbor_mean(const std::vector<std::vector<uint32_t>>& adj,
                              const Eigen::MatrixXd& h) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (size_t v = 0; v < adj.size(); ++v) {
    if (adj[v].empty()) continue;
    for (uint32_t u : adj[v]) out.row(v) += h.row(u);
    out.row(v) /= static_cast<double>(adj[v].size());
  }
  return out;
}

// Adjoint of neighbor_mean: scatter each row back to its neighbors.
Eigen::MatrixXd neighbor_mean_adjoint(const std::vector<std::vector<uint32_t>>& adj,
                                      const Eigen::MatrixXd& y) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  for (size_t v = 0; v < adj.size(); ++v) {
    if (adj[v].empty()) continue;
    Eigen::RowVectorXd scaled = y.row(v) / static_cast<double>(adj[v].size());
    for (uint32_t u : adj[v]) out.row(u) += scaled;
  }
  return out;
}

struct ForwardCache {
  Eigen::MatrixXd mx;   // neighbor means of the input
  Eigen::MatrixXd p1;   // layer-1 pre-activation
  Eigen::MatrixXd h1;   // relu(p1)
  Eigen::MatrixXd mh1;  // neighbor means of h1
  Eigen::MatrixXd p2;   // layer-2 pre-activation
  Embeddings emb;
};

ForwardCache forward_cached(const Eigen::MatrixXd& x,
                            const std::vector<std::vector<uint32_t>>& adj,
                            const SageParams& p) {
  if (x.cols() != p.config.in_dim)
    throw InputError("sage_forward: feature width does not match in_dim");
  if (static_cast<size_t>(x.rows()) != adj.size())
    throw InputError("sage_forward: node count does not match adjacency");

  ForwardCache c;
  c.mx = neighbor_mean(adj, x);
  c.p1 = c.mx * p.w_neigh1.transpose() + x * p.w_self1.transpose();
  c.p1.rowwise() += p.bias1.transpose();
  c.h1 = c.p1.cwiseMax(0.0);
  c.mh1 = neighbor_mean(adj, c.h1);
  c.p2 = c.mh1 * p.w_neigh2.transpose() + c.h1 * p.w_self2.transpose();
  c.p2.rowwise() += p.bias2.transpose();
  c.emb.z = c.p2.cwiseMax(0.0);
  c.emb.logits = c.emb.z * p.head_w.transpose();
  c.emb.logits.rowwise() += p.head_b.transpose();
  return c;
}

// Row-wise softmax minus one-hot targets, restricted to the training nodes.
Eigen::MatrixXd logits_grad(const Eigen::MatrixXd& logits, const TrainingSet& train,
                            double* loss_out) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  double loss = 0.0;
  for (size_t i = 0; i < train.nodes.size(); ++i) {
    uint32_t node = train.nodes[i];
    Eigen::RowVectorXd row = logits.row(node);
    double m = row.maxCoeff();
    Eigen::RowVectorXd e = (row.array() - m).exp();
    double denom = e.sum();
    loss += m + std::log(denom) - row(train.labels[i]);
    g.row(node) = e / denom;
    g(node, train.labels[i]) -= 1.0;
  }
  if (loss_out) *loss_out = loss;
  return g;
}

}  // namespace

SageParams SageParams::zeros(const SageConfig& config) {
  SageParams p;
  p.config = config;
  p.w_neigh1 = Eigen::MatrixXd::Zero(config.hidden1, config.in_dim);
  p.w_self1 = Eigen::MatrixXd::Zero(config.hidden1, config.in_dim);
  p.bias1 = Eigen::VectorXd::Zero(config.hidden1);
  p.w_neigh2 = Eigen::MatrixXd::Zero(config.hidden2, config.hidden1);
  p.w_self2 = Eigen::MatrixXd::Zero(config.hidden2, config.hidden1);
  p.bias2 = Eigen::VectorXd::Zero(config.hidden2);
  p.head_w = Eigen::MatrixXd::Zero(config.classes, config.hidden2);
  p.head_b = Eigen::VectorXd::Zero(config.classes);
  return p;
}

SageParams SageParams::glorot(const SageConfig& config, uint64_t seed) {
  SageParams p = zeros(config);
  Rng rng(seed);
  auto fill = [&rng](Eigen::MatrixXd& m) {
    double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-limit, limit);
  };
  fill(p.w_neigh1);
  fill(p.w_self1);
  fill(p.w_neigh2);
  fill(p.w_self2);
  fill(p.head_w);
  return p;
}

Eigen::VectorXd SageParams::flatten() const {
  Eigen::VectorXd theta(n_params());
  Eigen::Index at = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    theta.segment(at, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    at += m.size();
  };
  auto putv = [&](const Eigen::VectorXd& v) {
    theta.segment(at, v.size()) = v;
    at += v.size();
  };
  put(w_neigh1); put(w_self1); putv(bias1);
  put(w_neigh2); put(w_self2); putv(bias2);
  put(head_w); putv(head_b);
  return theta;
}

SageParams SageParams::unflatten(const SageConfig& config, const Eigen::VectorXd& theta) {
  SageParams p = zeros(config);
  Eigen::Index at = 0;
  auto take = [&](Eigen::MatrixXd& m) {
    m = Eigen::Map<const Eigen::MatrixXd>(theta.data() + at, m.rows(), m.cols());
    at += m.size();
  };
  auto takev = [&](Eigen::VectorXd& v) {
    v = theta.segment(at, v.size());
    at += v.size();
  };
  take(p.w_neigh1); take(p.w_self1); takev(p.bias1);
  take(p.w_neigh2); take(p.w_self2); takev(p.bias2);
  take(p.head_w); takev(p.head_b);
  return p;
}

Eigen::Index SageParams::n_params() const {
  return w_neigh1.size() + w_self1.size() + bias1.size() + w_neigh2.size() +
         w_self2.size() + bias2.size() + head_w.size() + head_b.size();
}

Embeddings sage_forward(const Eigen::MatrixXd& features,
                        const std::vector<std::vector<uint32_t>>& adjacency,
                        const SageParams& params) {
  return forward_cached(features, adjacency, params).emb;
}

double sage_loss(const Eigen::MatrixXd& logits, const TrainingSet& train) {
  if (train.nodes.empty())
    throw InputError("sage_loss: empty training set; adjust the percentile p");
  double loss = 0.0;
  logits_grad(logits, train, &loss);
  return loss;
}

Eigen::VectorXd sage_gradient(const Eigen::MatrixXd& features,
                              const std::vector<std::vector<uint32_t>>& adjacency,
                              const SageParams& params, const TrainingSet& train,
                              double* loss_out) {
  ForwardCache c = forward_cached(features, adjacency, params);
  Eigen::MatrixXd g_logits = logits_grad(c.emb.logits, train, loss_out);

  SageParams g = SageParams::zeros(params.config);
  g.head_w = g_logits.transpose() * c.emb.z;
  g.head_b = g_logits.colwise().sum();

  Eigen::MatrixXd g_p2 =
      (g_logits * params.head_w).cwiseProduct((c.p2.array() > 0.0).cast<double>().matrix());
  g.w_neigh2 = g_p2.transpose() * c.mh1;
  g.w_self2 = g_p2.transpose() * c.h1;
  g.bias2 = g_p2.colwise().sum();

  Eigen::MatrixXd g_h1 = neighbor_mean_adjoint(adjacency, g_p2 * params.w_neigh2) +
                         g_p2 * params.w_self2;
  Eigen::MatrixXd g_p1 =
      g_h1.cwiseProduct((c.p1.array() > 0.0).cast<double>().matrix());
  g.w_neigh1 = g_p1.transpose() * c.mx;
  g.w_self1 = g_p1.transpose() * features;
  g.bias1 = g_p1.colwise().sum();
  return g.flatten();
}

TrainResult sage_train(const Eigen::MatrixXd& features,
                       const std::vector<std::vector<uint32_t>>& adjacency,
                       const TrainingSet& train, const TrainConfig& config) {
  bool has_repeat = false, has_non_repeat = false;
  for (uint8_t label : train.labels) (label ? has_repeat : has_non_repeat) = true;
  if (!has_repeat || !has_non_repeat)
    throw InputError("sage_train: both pseudo-label classes are required; adjust p");

  SageConfig net_config;  // semi-supervised mode widens the input
  net_config.in_dim = static_cast<int>(features.cols());
  SageParams params = SageParams::glorot(net_config, config.seed);

  Eigen::VectorXd theta = params.flatten();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());

  TrainResult result;
  result.loss_trace.reserve(config.epochs);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double loss = 0.0;
    SageParams cur = SageParams::unflatten(params.config, theta);
    Eigen::VectorXd grad = sage_gradient(features, adjacency, cur, train, &loss);
    result.loss_trace.push_back(loss);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "sage_train: loss diverged at epoch " << epoch << "; trace tail:";
      size_t from = result.loss_trace.size() > 5 ? result.loss_trace.size() - 5 : 0;
      for (size_t i = from; i < result.loss_trace.size(); ++i)
        msg << ' ' << result.loss_trace[i];
      throw StageError(msg.str());
    }
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
    double mc = 1.0 - std::pow(config.beta1, epoch);
    double vc = 1.0 - std::pow(config.beta2, epoch);
    theta -= (config.lr * (m / mc).array() / ((v / vc).array().sqrt() + config.eps))
                 .matrix();
  }
  result.params = SageParams::unflatten(params.config, theta);
  return result;
}

double sage_grad_check(const Eigen::MatrixXd& features,
                       const std::vector<std::vector<uint32_t>>& adjacency,
                       const SageParams& params, const TrainingSet& train, double step) {
  Eigen::VectorXd analytic = sage_gradient(features, adjacency, params, train);
  Eigen::VectorXd theta = params.flatten();
  double max_rel = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd t = theta;
    t(i) = theta(i) + step;
    double up = sage_loss(
        sage_forward(features, adjacency, SageParams::unflatten(params.config, t)).logits,
        train);
    t(i) = theta(i) - step;
    double down = sage_loss(
        sage_forward(features, adjacency, SageParams::unflatten(params.config, t)).logits,
        train);
    double numeric = (up - down) / (2.0 * step);
    double rel = std::abs(analytic(i) - numeric) /
                 std::max(1e-3, std::abs(analytic(i)) + std::abs(numeric));
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

std::vector<uint8_t> logits_argmax(const Eigen::MatrixXd& logits) {
  std::vector<uint8_t> labels(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    labels[i] = logits(i, 1) > logits(i, 0) ? 1 : 0;
  return labels;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

}  // namespace

void write_sage_params(const std::filesystem::path& path, const SageParams& p,
                       uint64_t seed) {
  nlohmann::json j{{"in_dim", p.config.in_dim},
                   {"hidden1", p.config.hidden1},
                   {"hidden2", p.config.hidden2},
                   {"classes", p.config.classes},
                   {"seed", seed},
                   {"w_neigh1", matrix_json(p.w_neigh1)},
                   {"w_self1", matrix_json(p.w_self1)},
                   {"bias1", std::vector<double>(p.bias1.data(), p.bias1.data() + p.bias1.size())},
                   {"w_neigh2", matrix_json(p.w_neigh2)},
                   {"w_self2", matrix_json(p.w_self2)},
                   {"bias2", std::vector<double>(p.bias2.data(), p.bias2.data() + p.bias2.size())},
                   {"head_w", matrix_json(p.head_w)},
                   {"head_b", std::vector<double>(p.head_b.data(), p.head_b.data() + p.head_b.size())}};
  write_text_file(path, j.dump(2) + "\n");
}

SageParams read_sage_params(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  SageConfig config{j.at("in_dim").get<int>(), j.at("hidden1").get<int>(),
                    j.at("hidden2").get<int>(), j.at("classes").get<int>()};
  SageParams p = SageParams::zeros(config);
  p.w_neigh1 = matrix_from_json(j.at("w_neigh1"));
  p.w_self1 = matrix_from_json(j.at("w_self1"));
  auto b1 = j.at("bias1").get<std::vector<double>>();
  p.bias1 = Eigen::Map<Eigen::VectorXd>(b1.data(), b1.size());
  p.w_neigh2 = matrix_from_json(j.at("w_neigh2"));
  p.w_self2 = matrix_from_json(j.at("w_self2"));
  auto b2 = j.at("bias2").get<std::vector<double>>();
  p.bias2 = Eigen::Map<Eigen::VectorXd>(b2.data(), b2.size());
  p.head_w = matrix_from_json(j.at("head_w"));
  auto hb = j.at("head_b").get<std::vector<double>>();
  p.head_b = Eigen::Map<Eigen::VectorXd>(hb.data(), hb.size());
  return p;
}

void write_loss_trace(const std::filesystem::path& path, const std::vector<double>& trace) {
  std::ostringstream out;
  out << "epoch,loss\n";
  char buf[64];
  for (size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", trace[i]);
    out << (i + 1) << ',' << buf << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace repgraph
