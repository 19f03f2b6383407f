#pragma once

#include <cstdint>
#include <vector>

#include "repgraph/graphfeat.hpp"
#include "repgraph/pseudolabel.hpp"
#include "repgraph/unigraph.hpp"

namespace repgraph {

struct BaselineConfig {
  double opera_factor = 1.5;
  double sopra_factor = 2.5;
  double mip_factor = 2.5;
  uint32_t mip_min_degree = 50;
  double bambus_c = 0.0;
  int metacarvel_flag_threshold = 2;
  double skew_ratio = 2.0;
};

// Pseudo-label heuristic: repeat on R, non-repeat everywhere else.
std::vector<uint8_t> baseline_heuristic(const LabelPartition& part);

// Repeat iff coverage > factor * mean coverage.
std::vector<uint8_t> coverage_filter(const std::vector<double>& coverages, double factor);

// Repeat iff high coverage and degree >= min_degree.
std::vector<uint8_t> mip(const std::vector<double>& coverages,
                         const std::vector<uint32_t>& degrees, double factor,
                         uint32_t min_degree);

// Repeat iff betweenness/length exceeds mean + c * population std of the ratio.
std::vector<uint8_t> bambus2(const std::vector<double>& betweenness,
                             const std::vector<double>& lengths, double c);

// Fraction of a node's retained edges whose endpoint coverages differ by more
// than skew_ratio (a stand-in for the original's statistical edge test).
std::vector<double> skewed_edge_ratio(const UnitigGraph& graph,
                                      const std::vector<double>& coverages,
                                      double skew_ratio);

// Step one: betweenness >= mean + 3 std. Step two: strictly above the 75th
// percentile in at least flag_threshold of coverage, degree and skew ratio.
std::vector<uint8_t> metacarvel_variant(const std::vector<double>& betweenness,
                                        const std::vector<double>& coverages,
                                        const std::vector<uint32_t>& degrees,
                                        const std::vector<double>& skew_ratios,
                                        int flag_threshold = 2);

struct BaselineLabels {
  std::vector<uint8_t> base, opera, sopra, mip, bambus2, metacarvel;
};

BaselineLabels run_baselines(const LabelPartition& part, const FeatureMatrix& features,
                             const UnitigGraph& graph, const std::vector<double>& lengths,
                             const std::vector<double>& coverages,
                             const BaselineConfig& config = {});

}  // namespace repgraph
