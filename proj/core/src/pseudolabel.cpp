#include "repgraph/pseudolabel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"

namespace repgraph {

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw InputError("percentile: empty input");
  if (pct < 0.0 || pct > 100.0) throw InputError("percentile: pct outside [0,100]");
  std::sort(values.begin(), values.end());
  double h = pct / 100.0 * static_cast<double>(values.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Thresholds compute_thresholds(const std::vector<double>& lengths,
                              const std::vector<double>& coverages, double p) {
  if (p < 0.0 || p > 50.0) throw InputError("compute_thresholds: p must lie in [0,50]");
  if (lengths.empty() || lengths.size() != coverages.size())
    throw InputError("compute_thresholds: length/coverage vectors empty or mismatched");
  return Thresholds{percentile(lengths, p), percentile(lengths, 100.0 - p),
                    percentile(coverages, 100.0 - p)};
}

LabelPartition partition(const std::vector<double>& lengths,
                         const std::vector<double>& coverages,
                         const Thresholds& thresholds, double p) {
  if (lengths.size() != coverages.size())
    throw InputError("partition: length/coverage vectors mismatched");
  LabelPartition part;
  part.p = p;
  part.thresholds = thresholds;
  for (uint32_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < thresholds.len_low && coverages[i] > thresholds.cov)
      part.repeat.push_back(i);
    else if (lengths[i] > thresholds.len_high && coverages[i] < thresholds.cov)
      part.non_repeat.push_back(i);
    else
      part.unlabeled.push_back(i);
  }
  return part;
}

LabelPartition pseudolabel(const std::vector<double>& lengths,
                           const std::vector<double>& coverages, double p) {
  return partition(lengths, coverages, compute_thresholds(lengths, coverages, p), p);
}

void write_partition(const std::filesystem::path& dir, const LabelPartition& part) {
  ensure_directory(dir);
  std::vector<char> tag(part.n_nodes(), 'U');
  for (uint32_t i : part.repeat) tag[i] = 'R';
  for (uint32_t i : part.non_repeat) tag[i] = 'N';
  std::ostringstream out;
  out << "unitig_id\tlabel\n";
  for (size_t i = 0; i < tag.size(); ++i) out << i << '\t' << tag[i] << '\n';
  write_text_file(dir / "labels.tsv", out.str());

  nlohmann::json meta{{"p", part.p},
                      {"tau_len_low", part.thresholds.len_low},
                      {"tau_len_high", part.thresholds.len_high},
                      {"tau_cov", part.thresholds.cov},
                      {"n_repeat", part.repeat.size()},
                      {"n_non_repeat", part.non_repeat.size()},
                      {"n_unlabeled", part.unlabeled.size()}};
  write_text_file(dir / "thresholds.json", meta.dump(2) + "\n");
}

LabelPartition read_partition(const std::filesystem::path& dir) {
  LabelPartition part;
  auto meta = nlohmann::json::parse(read_text_file(dir / "thresholds.json"));
  part.p = meta.at("p").get<double>();
  part.thresholds.len_low = meta.at("tau_len_low").get<double>();
  part.thresholds.len_high = meta.at("tau_len_high").get<double>();
  part.thresholds.cov = meta.at("tau_cov").get<double>();

  std::ifstream in(dir / "labels.tsv");
  if (!in) throw InputError("cannot open " + (dir / "labels.tsv").string());
  std::string line;
  std::getline(in, line);
  uint32_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 2 || fields[1].size() != 1)
      throw ParseError((dir / "labels.tsv").string() + ": bad row");
    switch (fields[1][0]) {
      case 'R': part.repeat.push_back(i); break;
      case 'N': part.non_repeat.push_back(i); break;
      case 'U': part.unlabeled.push_back(i); break;
      default: throw ParseError((dir / "labels.tsv").string() + ": unknown label");
    }
    ++i;
  }
  return part;
}

}  // namespace repgraph
