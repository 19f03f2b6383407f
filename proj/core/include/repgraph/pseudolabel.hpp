#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace repgraph {

struct Thresholds {
  double len_low = 0.0;   // p-th percentile of lengths
  double len_high = 0.0;  // (100-p)-th percentile of lengths
  double cov = 0.0;       // (100-p)-th percentile of coverages
};

// Node label sets: repeat / non-repeat pseudo-labels plus the unlabeled rest.
struct LabelPartition {
  std::vector<uint32_t> repeat;      // pseudo-label 1
  std::vector<uint32_t> non_repeat;  // pseudo-label 0
  std::vector<uint32_t> unlabeled;
  double p = 0.0;
  Thresholds thresholds;

  size_t n_nodes() const {
    return repeat.size() + non_repeat.size() + unlabeled.size();
  }
};

// Linear interpolation between order statistics; pct in [0, 100].
double percentile(std::vector<double> values, double pct);

Thresholds compute_thresholds(const std::vector<double>& lengths,
                              const std::vector<double>& coverages, double p);

// Strict inequalities on both conditions; ties fall to the unlabeled set.
LabelPartition partition(const std::vector<double>& lengths,
                         const std::vector<double>& coverages,
                         const Thresholds& thresholds, double p);

LabelPartition pseudolabel(const std::vector<double>& lengths,
                           const std::vector<double>& coverages, double p);

void write_partition(const std::filesystem::path& dir, const LabelPartition& part);
LabelPartition read_partition(const std::filesystem::path& dir);

}  // namespace repgraph
