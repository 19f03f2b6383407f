#include "repgraph/graphfeat.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/parallel.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

namespace {

// Single-source shortest-path counting and dependency accumulation.
void brandes_source(const std::vector<std::vector<uint32_t>>& adj, uint32_t source,
                    std::vector<double>& acc) {
  const size_t n = adj.size();
  std::vector<int64_t> dist(n, -1);
  std::vector<double> sigma(n, 0.0), delta(n, 0.0);
  std::vector<uint32_t> order;
  order.reserve(n);

  std::deque<uint32_t> queue;
  dist[source] = 0;
  sigma[source] = 1.0;
  queue.push_back(source);
  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (uint32_t w : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    uint32_t w = *it;
    for (uint32_t v : adj[w])
      if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    if (w != source) acc[w] += delta[w];
  }
}

}  // namespace

std::vector<double> betweenness(const UnitigGraph& graph, unsigned n_threads,
                                uint32_t sample_sources, uint64_t sample_seed) {
  const size_t n = graph.n_nodes;
  auto adj = graph.adjacency();

  std::vector<uint32_t> sources;
  double scale = 0.5;  // halve undirected pair dependencies
  if (sample_sources > 0 && sample_sources < n) {
    Rng rng(sample_seed);
    std::vector<uint32_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = static_cast<uint32_t>(i);
    for (size_t i = 0; i < sample_sources; ++i)  // partial Fisher-Yates
      std::swap(all[i], all[i + rng.bounded(n - i)]);
    sources.assign(all.begin(), all.begin() + sample_sources);
    std::sort(sources.begin(), sources.end());
    scale *= static_cast<double>(n) / static_cast<double>(sample_sources);
  } else {
    sources.resize(n);
    for (size_t i = 0; i < n; ++i) sources[i] = static_cast<uint32_t>(i);
  }

  std::vector<std::vector<double>> shard_acc(kShards);
  run_sharded(kShards, n_threads, [&](size_t shard) {
    auto& acc = shard_acc[shard];
    acc.assign(n, 0.0);
    for (size_t i = shard; i < sources.size(); i += kShards)
      brandes_source(adj, sources[i], acc);
  });

  std::vector<double> bc(n, 0.0);
  for (size_t shard = 0; shard < kShards; ++shard)
    if (!shard_acc[shard].empty())
      for (size_t v = 0; v < n; ++v) bc[v] += shard_acc[shard][v];
  for (auto& x : bc) x *= scale;
  return bc;
}

std::vector<uint32_t> kcore(const UnitigGraph& graph) {
  const size_t n = graph.n_nodes;
  auto adj = graph.adjacency();
  std::vector<uint32_t> deg(n);
  uint32_t max_deg = 0;
  for (size_t v = 0; v < n; ++v) {
    deg[v] = static_cast<uint32_t>(adj[v].size());
    max_deg = std::max(max_deg, deg[v]);
  }

  // Bucket peeling in O(V + E).
  std::vector<std::vector<uint32_t>> buckets(max_deg + 1);
  for (size_t v = 0; v < n; ++v) buckets[deg[v]].push_back(static_cast<uint32_t>(v));
  std::vector<uint32_t> core(n, 0);
  std::vector<uint8_t> removed(n, 0);
  std::vector<uint32_t> cur_deg = deg;
  uint32_t k = 0;
  for (uint32_t d = 0; d <= max_deg; ++d) {
    auto& bucket = buckets[d];
    for (size_t i = 0; i < bucket.size(); ++i) {
      uint32_t v = bucket[i];
      if (removed[v] || cur_deg[v] != d) continue;
      k = std::max(k, d);
      core[v] = k;
      removed[v] = 1;
      for (uint32_t w : adj[v]) {
        if (removed[w] || cur_deg[w] <= d) continue;
        --cur_deg[w];
        if (cur_deg[w] <= d)
          bucket.push_back(w);  // fell into the current bucket
        else
          buckets[cur_deg[w]].push_back(w);
      }
    }
  }
  return core;
}

std::vector<uint32_t> degree(const UnitigGraph& graph) {
  std::vector<uint32_t> deg(graph.n_nodes, 0);
  for (const auto& [u, v] : graph.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::vector<uint64_t> weighted_degree(const UnitigGraph& graph) {
  std::vector<uint64_t> wdeg(graph.n_nodes, 0);
  for (size_t i = 0; i < graph.edges.size(); ++i) {
    wdeg[graph.edges[i].first] += graph.weights[i];
    wdeg[graph.edges[i].second] += graph.weights[i];
  }
  return wdeg;
}

std::vector<double> clustering(const UnitigGraph& graph) {
  const size_t n = graph.n_nodes;
  auto adj = graph.adjacency();
  std::vector<double> coeff(n, 0.0);
  for (size_t v = 0; v < n; ++v) {
    size_t deg = adj[v].size();
    if (deg < 2) continue;
    uint64_t links = 0;
    for (size_t i = 0; i < deg; ++i)
      for (size_t j = i + 1; j < deg; ++j)
        if (std::binary_search(adj[adj[v][i]].begin(), adj[adj[v][i]].end(), adj[v][j]))
          ++links;
    coeff[v] = 2.0 * static_cast<double>(links) /
               (static_cast<double>(deg) * static_cast<double>(deg - 1));
  }
  return coeff;
}

Eigen::VectorXd standardize_column(const Eigen::VectorXd& v) {
  double mean = v.mean();
  double var = (v.array() - mean).square().mean();
  double sd = std::sqrt(var);
  if (sd < 1e-12) sd = 1.0;
  return (v.array() - mean) / sd;
}

FeatureMatrix assemble_feature_matrix(const std::vector<double>& betweenness,
                                      const std::vector<uint32_t>& kcore,
                                      const std::vector<uint32_t>& degree,
                                      const std::vector<uint64_t>& weighted_degree,
                                      const std::vector<double>& clustering) {
  const size_t n = betweenness.size();
  if (kcore.size() != n || degree.size() != n || weighted_degree.size() != n ||
      clustering.size() != n)
    throw InputError("assemble_feature_matrix: feature vector lengths differ");

  FeatureMatrix fm;
  fm.raw.resize(n, kGraphFeatureCount);
  for (size_t i = 0; i < n; ++i) {
    fm.raw(i, kBetweenness) = betweenness[i];
    fm.raw(i, kKcore) = kcore[i];
    fm.raw(i, kDegree) = degree[i];
    fm.raw(i, kWeightedDegree) = static_cast<double>(weighted_degree[i]);
    fm.raw(i, kClustering) = clustering[i];
  }
  if (!fm.raw.allFinite())
    throw StageError("assemble_feature_matrix: non-finite feature value");

  fm.standardized.resize(n, kGraphFeatureCount);
  fm.col_mean.resize(kGraphFeatureCount);
  fm.col_std.resize(kGraphFeatureCount);
  for (int c = 0; c < kGraphFeatureCount; ++c) {
    double mean = fm.raw.col(c).mean();
    double sd = std::sqrt((fm.raw.col(c).array() - mean).square().mean());
    if (sd < 1e-12) sd = 1.0;
    fm.col_mean(c) = mean;
    fm.col_std(c) = sd;
    fm.standardized.col(c) = (fm.raw.col(c).array() - mean) / sd;
  }
  return fm;
}

FeatureMatrix compute_features(const UnitigGraph& graph, unsigned n_threads,
                               uint32_t sample_sources, uint64_t sample_seed) {
  return assemble_feature_matrix(betweenness(graph, n_threads, sample_sources, sample_seed),
                                 kcore(graph), degree(graph), weighted_degree(graph),
                                 clustering(graph));
}

void write_features(const std::filesystem::path& dir, const FeatureMatrix& features,
                    const std::vector<UnitigRecord>& unitigs) {
  ensure_directory(dir);
  const size_t n = static_cast<size_t>(features.raw.rows());
  if (unitigs.size() != n) throw InputError("write_features: unitig count mismatch");

  std::ostringstream out;
  out << "unitig_id\tbetweenness\tkcore\tdegree\tweighted_degree\tclustering"
         "\tlength\tmean_coverage\n";
  char buf[64];
  for (size_t i = 0; i < n; ++i) {
    out << i;
    for (int c = 0; c < kGraphFeatureCount; ++c) {
      std::snprintf(buf, sizeof buf, "%.12g", features.raw(i, c));
      out << '\t' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", unitigs[i].mean_coverage);
    out << '\t' << unitigs[i].length << '\t' << buf << '\n';
  }
  write_text_file(dir / "features.tsv", out.str());

  nlohmann::json moments;
  for (int c = 0; c < kGraphFeatureCount; ++c) {
    moments["mean"].push_back(features.col_mean(c));
    moments["std"].push_back(features.col_std(c));
  }
  write_text_file(dir / "features.json", moments.dump(2) + "\n");
}

FeatureMatrix read_features(const std::filesystem::path& dir, size_t n_nodes) {
  std::ifstream in(dir / "features.tsv");
  if (!in) throw InputError("cannot open " + (dir / "features.tsv").string());
  std::string line;
  std::getline(in, line);
  std::vector<double> bc, cl;
  std::vector<uint32_t> kc, deg;
  std::vector<uint64_t> wdeg;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 8)
      throw ParseError((dir / "features.tsv").string() + ": expected 8 columns");
    bc.push_back(std::stod(fields[1]));
    kc.push_back(static_cast<uint32_t>(std::stoul(fields[2])));
    deg.push_back(static_cast<uint32_t>(std::stoul(fields[3])));
    wdeg.push_back(std::stoull(fields[4]));
    cl.push_back(std::stod(fields[5]));
  }
  if (bc.size() != n_nodes)
    throw ParseError((dir / "features.tsv").string() + ": row count mismatch");
  return assemble_feature_matrix(bc, kc, deg, wdeg, cl);
}

}  // namespace repgraph
