#include "repgraph/finetune.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"

namespace repgraph {

FinalLabels finetune(const std::vector<uint8_t>& y_rf, const LabelPartition& part,
                     const std::vector<double>& lengths,
                     const std::vector<double>& coverages, double p) {
  const size_t n = y_rf.size();
  if (part.n_nodes() != n || lengths.size() != n || coverages.size() != n)
    throw InputError("finetune: inputs cover different node sets");
  if (p < 0.0 || p > 50.0) throw InputError("finetune: p must lie in [0,50]");

  FinalLabels out;
  out.y.assign(n, 0);
  out.source.assign(n, LabelSource::kModel);
  for (uint32_t i : part.unlabeled)
    (y_rf[i] ? out.report.u1 : out.report.u0).push_back(i);

  auto gather = [&](const std::vector<uint32_t>& ids, const std::vector<double>& v) {
    std::vector<double> g;
    g.reserve(ids.size());
    for (uint32_t i : ids) g.push_back(v[i]);
    return g;
  };

  if (!out.report.u1.empty()) {
    out.report.rho_len_high = percentile(gather(out.report.u1, lengths), 100.0 - p);
    out.report.rho_cov_low = percentile(gather(out.report.u1, coverages), p);
    for (uint32_t i : out.report.u1)
      if (lengths[i] > out.report.rho_len_high && coverages[i] < out.report.rho_cov_low)
        out.report.flips_1to0.push_back(i);
  }
  if (!out.report.u0.empty()) {
    out.report.rho_len_low = percentile(gather(out.report.u0, lengths), p);
    out.report.rho_cov_high = percentile(gather(out.report.u0, coverages), 100.0 - p);
    for (uint32_t i : out.report.u0)
      if (lengths[i] < out.report.rho_len_low && coverages[i] > out.report.rho_cov_high)
        out.report.flips_0to1.push_back(i);
  }

  for (uint32_t i : part.unlabeled) out.y[i] = y_rf[i];
  for (uint32_t i : out.report.flips_1to0) {
    out.y[i] = 0;
    out.source[i] = LabelSource::kFlipped;
  }
  for (uint32_t i : out.report.flips_0to1) {
    out.y[i] = 1;
    out.source[i] = LabelSource::kFlipped;
  }
  for (uint32_t i : part.repeat) {
    out.y[i] = 1;
    out.source[i] = LabelSource::kPseudo;
  }
  for (uint32_t i : part.non_repeat) {
    out.y[i] = 0;
    out.source[i] = LabelSource::kPseudo;
  }
  return out;
}

void write_final_labels(const std::filesystem::path& dir, const FinalLabels& labels) {
  ensure_directory(dir);
  std::ostringstream out;
  out << "unitig_id\tlabel\tsource\n";
  for (size_t i = 0; i < labels.y.size(); ++i) {
    const char* source = labels.source[i] == LabelSource::kPseudo    ? "pseudo"
                         : labels.source[i] == LabelSource::kFlipped ? "flipped"
                                                                     : "model";
    out << i << '\t' << int(labels.y[i]) << '\t' << source << '\n';
  }
  write_text_file(dir / "final_labels.tsv", out.str());

  nlohmann::json j{{"u1_size", labels.report.u1.size()},
                   {"u0_size", labels.report.u0.size()},
                   {"rho_len_high", labels.report.rho_len_high},
                   {"rho_cov_low", labels.report.rho_cov_low},
                   {"rho_len_low", labels.report.rho_len_low},
                   {"rho_cov_high", labels.report.rho_cov_high},
                   {"flips_1to0", labels.report.flips_1to0},
                   {"flips_0to1", labels.report.flips_0to1}};
  write_text_file(dir / "flip_report.json", j.dump(2) + "\n");
}

std::vector<uint8_t> read_label_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<uint8_t> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() < 2) throw ParseError(path.string() + ": expected 2+ columns");
    labels.push_back(fields[1] == "1" ? 1 : 0);
  }
  return labels;
}

void write_label_column(const std::filesystem::path& path,
                        const std::vector<uint8_t>& labels) {
  std::ostringstream out;
  out << "unitig_id\tlabel\n";
  for (size_t i = 0; i < labels.size(); ++i) out << i << '\t' << int(labels[i]) << '\n';
  write_text_file(path, out.str());
}

}  // namespace repgraph
