#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "repgraph/pseudolabel.hpp"

namespace repgraph {

enum class LabelSource : uint8_t { kPseudo, kModel, kFlipped };

struct FlipReport {
  std::vector<uint32_t> u1, u0;  // unlabeled nodes split by the RF prediction
  double rho_len_high = 0.0, rho_cov_low = 0.0;   // thresholds inside u1
  double rho_len_low = 0.0, rho_cov_high = 0.0;   // thresholds inside u0
  std::vector<uint32_t> flips_1to0, flips_0to1;
};

struct FinalLabels {
  std::vector<uint8_t> y;
  std::vector<LabelSource> source;
  FlipReport report;
};

// Per-predicted-class percentile outlier detection on the sequencing
// features; pseudo-labeled nodes always keep their pseudo-label.
FinalLabels finetune(const std::vector<uint8_t>& y_rf, const LabelPartition& part,
                     const std::vector<double>& lengths,
                     const std::vector<double>& coverages, double p);

void write_final_labels(const std::filesystem::path& dir, const FinalLabels& labels);
std::vector<uint8_t> read_label_column(const std::filesystem::path& path);
void write_label_column(const std::filesystem::path& path,
                        const std::vector<uint8_t>& labels);

}  // namespace repgraph
