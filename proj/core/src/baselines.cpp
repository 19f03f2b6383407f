#include "repgraph/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "repgraph/errors.hpp"

namespace repgraph {

namespace {

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v, double mean) {
  double sum = 0.0;
  for (double x : v) sum += (x - mean) * (x - mean);
  return v.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

std::vector<uint8_t> baseline_heuristic(const LabelPartition& part) {
  std::vector<uint8_t> y(part.n_nodes(), 0);
  for (uint32_t i : part.repeat) y[i] = 1;
  return y;
}

std::vector<uint8_t> coverage_filter(const std::vector<double>& coverages, double factor) {
  double threshold = factor * mean_of(coverages);
  std::vector<uint8_t> y(coverages.size());
  for (size_t i = 0; i < coverages.size(); ++i) y[i] = coverages[i] > threshold ? 1 : 0;
  return y;
}

std::vector<uint8_t> mip(const std::vector<double>& coverages,
                         const std::vector<uint32_t>& degrees, double factor,
                         uint32_t min_degree) {
  if (coverages.size() != degrees.size()) throw InputError("mip: vector length mismatch");
  double threshold = factor * mean_of(coverages);
  std::vector<uint8_t> y(coverages.size());
  for (size_t i = 0; i < coverages.size(); ++i)
    y[i] = coverages[i] > threshold && degrees[i] >= min_degree ? 1 : 0;
  return y;
}

std::vector<uint8_t> bambus2(const std::vector<double>& betweenness,
                             const std::vector<double>& lengths, double c) {
  if (betweenness.size() != lengths.size())
    throw InputError("bambus2: vector length mismatch");
  std::vector<double> ratio(betweenness.size());
  for (size_t i = 0; i < ratio.size(); ++i) ratio[i] = betweenness[i] / lengths[i];
  double mean = mean_of(ratio);
  double threshold = mean + c * population_std(ratio, mean);
  std::vector<uint8_t> y(ratio.size());
  for (size_t i = 0; i < ratio.size(); ++i) y[i] = ratio[i] > threshold ? 1 : 0;
  return y;
}

std::vector<double> skewed_edge_ratio(const UnitigGraph& graph,
                                      const std::vector<double>& coverages,
                                      double skew_ratio) {
  std::vector<uint32_t> deg(graph.n_nodes, 0);
  std::vector<uint32_t> skewed(graph.n_nodes, 0);
  for (const auto& [u, v] : graph.edges) {
    ++deg[u];
    ++deg[v];
    double lo = std::min(coverages[u], coverages[v]);
    double hi = std::max(coverages[u], coverages[v]);
    if (hi > skew_ratio * lo) {
      ++skewed[u];
      ++skewed[v];
    }
  }
  std::vector<double> ratio(graph.n_nodes, 0.0);
  for (size_t i = 0; i < ratio.size(); ++i)
    if (deg[i] > 0)
      ratio[i] = static_cast<double>(skewed[i]) / static_cast<double>(deg[i]);
  return ratio;
}

std::vector<uint8_t> metacarvel_variant(const std::vector<double>& betweenness,
                                        const std::vector<double>& coverages,
                                        const std::vector<uint32_t>& degrees,
                                        const std::vector<double>& skew_ratios,
                                        int flag_threshold) {
  const size_t n = betweenness.size();
  if (coverages.size() != n || degrees.size() != n || skew_ratios.size() != n)
    throw InputError("metacarvel_variant: vector length mismatch");

  double bc_mean = mean_of(betweenness);
  double bc_std = population_std(betweenness, bc_mean);
  double bc_threshold = bc_mean + 3.0 * bc_std;

  std::vector<double> deg_values(n);
  for (size_t i = 0; i < n; ++i) deg_values[i] = degrees[i];
  double cov_q3 = percentile(coverages, 75.0);
  double deg_q3 = percentile(deg_values, 75.0);
  double skew_q3 = percentile(skew_ratios, 75.0);

  std::vector<uint8_t> y(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (betweenness[i] >= bc_threshold) {
      y[i] = 1;
      continue;
    }
    int flags = (coverages[i] > cov_q3) + (deg_values[i] > deg_q3) +
                (skew_ratios[i] > skew_q3);
    y[i] = flags >= flag_threshold ? 1 : 0;
  }
  return y;
}

BaselineLabels run_baselines(const LabelPartition& part, const FeatureMatrix& features,
                             const UnitigGraph& graph, const std::vector<double>& lengths,
                             const std::vector<double>& coverages,
                             const BaselineConfig& config) {
  const size_t n = graph.n_nodes;
  std::vector<double> bc(n), lens = lengths;
  std::vector<uint32_t> deg(n);
  for (size_t i = 0; i < n; ++i) {
    bc[i] = features.raw(i, kBetweenness);
    deg[i] = static_cast<uint32_t>(features.raw(i, kDegree));
  }
  BaselineLabels out;
  out.base = baseline_heuristic(part);
  out.opera = coverage_filter(coverages, config.opera_factor);
  out.sopra = coverage_filter(coverages, config.sopra_factor);
  out.mip = mip(coverages, deg, config.mip_factor, config.mip_min_degree);
  out.bambus2 = bambus2(bc, lens, config.bambus_c);
  out.metacarvel = metacarvel_variant(bc, coverages, deg,
                                      skewed_edge_ratio(graph, coverages, config.skew_ratio),
                                      config.metacarvel_flag_threshold);
  return out;
}

}  // namespace repgraph
