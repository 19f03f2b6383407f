#include "repgraph/simdata.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "repgraph/dna.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

namespace {

std::string random_sequence(uint64_t length, Rng& rng, const double* cum3) {
  std::string seq(length, '\0');
  for (uint64_t i = 0; i < length; ++i) {
    if (cum3 == nullptr) {
      seq[i] = code_base(static_cast<uint8_t>(rng.bounded(4)));
    } else {
      double u = rng.real01();
      int b = 0;
      while (b < 3 && u >= cum3[b]) ++b;
      seq[i] = code_base(static_cast<uint8_t>(b));
    }
  }
  return seq;
}

char mutate_base(char base, Rng& rng) {
  uint8_t code = base_code(base);
  uint8_t shift = static_cast<uint8_t>(1 + rng.bounded(3));
  return code_base(static_cast<uint8_t>((code + shift) & 3));
}

}  // namespace

Genome gen_backbone(uint64_t length, uint64_t rng_seed) {
  if (length == 0) throw InputError("gen_backbone: length must be >= 1");
  Rng rng(rng_seed);
  return Genome{"genome", random_sequence(length, rng, nullptr), {}};
}

std::string gen_repeat_unit(uint64_t length, uint64_t rng_seed) {
  if (length == 0) throw InputError("gen_repeat_unit: length must be >= 1");
  static constexpr double kCum[3] = {0.4, 0.7, 0.9};  // (0.4, 0.3, 0.2, 0.1)
  Rng rng(rng_seed);
  return random_sequence(length, rng, kCum);
}

std::vector<Genome> insert_repeats(std::vector<Genome> genomes, uint64_t unit_len,
                                   uint32_t copy_number, uint64_t rng_seed) {
  if (genomes.size() < 2) throw InputError("insert_repeats: need at least two genomes");
  if (copy_number == 0) return genomes;
  if (unit_len == 0) throw InputError("insert_repeats: unit length must be >= 1");

  const std::string shared_unit =
      gen_repeat_unit(unit_len, derive_seed(rng_seed, "shared-unit"));

  for (size_t g = 0; g < genomes.size(); ++g) {
    Genome& genome = genomes[g];
    const uint64_t n_insertions = 2 * static_cast<uint64_t>(copy_number);
    if (genome.sequence.size() < n_insertions * unit_len)
      throw InputError("insert_repeats: genome '" + genome.id +
                       "' too short for requested repeat content");

    const std::string private_unit =
        gen_repeat_unit(unit_len, derive_seed(derive_seed(rng_seed, "private-unit"), g));
    const std::string private_id = "rep_" + genome.id;

    Rng rng(derive_seed(derive_seed(rng_seed, "placement"), g));
    std::vector<RepeatInterval> placed;
    const uint64_t max_start = genome.sequence.size() - unit_len;
    const int max_attempts_per_copy = 10000;
    for (uint64_t i = 0; i < n_insertions; ++i) {
      bool ok = false;
      for (int attempt = 0; attempt < max_attempts_per_copy; ++attempt) {
        uint64_t start = rng.bounded(max_start + 1);
        uint64_t end = start + unit_len;
        bool overlaps = false;
        for (const auto& iv : placed)
          if (start < iv.end && iv.start < end) { overlaps = true; break; }
        if (overlaps) continue;
        placed.push_back({start, end, i < copy_number ? private_id : "rep_shared"});
        ok = true;
        break;
      }
      if (!ok)
        throw InputError("insert_repeats: cannot place " + std::to_string(n_insertions) +
                         " non-overlapping copies of length " + std::to_string(unit_len) +
                         " in genome '" + genome.id + "'");
    }
    for (const auto& iv : placed) {
      const std::string& unit = iv.repeat_id == "rep_shared" ? shared_unit : private_unit;
      genome.sequence.replace(iv.start, unit_len, unit);
    }
    std::sort(placed.begin(), placed.end(),
              [](const auto& a, const auto& b) { return a.start < b.start; });
    genome.repeat_intervals.insert(genome.repeat_intervals.end(), placed.begin(),
                                   placed.end());
  }
  return genomes;
}

std::vector<ReadPair> simulate_reads(const std::vector<Genome>& genomes,
                                     const ReadSimParams& params) {
  if (genomes.empty()) throw InputError("simulate_reads: no genomes");
  if (params.read_len == 0 || params.read_len > params.outer_dist)
    throw InputError("simulate_reads: need read_len <= outer_dist");
  if (params.err_rate < 0 || params.err_rate > 1 || params.mut_rate < 0 ||
      params.mut_rate > 1)
    throw InputError("simulate_reads: rates must lie in [0,1]");
  for (const auto& g : genomes)
    if (g.sequence.size() < params.outer_dist)
      throw InputError("simulate_reads: outer_dist exceeds length of genome '" + g.id + "'");

  // Genome choice proportional to length: pick a pooled position.
  std::vector<uint64_t> cum_len(genomes.size());
  uint64_t total = 0;
  for (size_t g = 0; g < genomes.size(); ++g) {
    total += genomes[g].sequence.size();
    cum_len[g] = total;
  }

  Rng rng(params.seed);
  std::vector<ReadPair> pairs;
  pairs.reserve(params.n_pairs);
  const uint32_t rl = params.read_len;
  const uint32_t outer = params.outer_dist;

  for (uint64_t i = 0; i < params.n_pairs; ++i) {
    uint64_t pooled = rng.bounded(total);
    size_t g = static_cast<size_t>(
        std::upper_bound(cum_len.begin(), cum_len.end(), pooled) - cum_len.begin());
    const std::string& ref = genomes[g].sequence;
    uint64_t start = rng.bounded(ref.size() - outer + 1);

    std::string fragment = ref.substr(start, outer);
    if (params.mut_rate > 0)
      for (auto& c : fragment)
        if (rng.bernoulli(params.mut_rate)) c = mutate_base(c, rng);

    std::string fwd = fragment.substr(0, rl);
    std::string rev = reverse_complement(
        std::string_view(fragment).substr(outer - rl, rl));
    if (params.err_rate > 0) {
      for (auto& c : fwd)
        if (rng.bernoulli(params.err_rate)) c = mutate_base(c, rng);
      for (auto& c : rev)
        if (rng.bernoulli(params.err_rate)) c = mutate_base(c, rng);
    }

    ReadPair pair;
    pair.id = "read_" + std::to_string(i);
    pair.fwd = std::move(fwd);
    pair.rev = std::move(rev);
    pair.origin = ReadOrigin{genomes[g].id, start, start + outer - rl};
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void write_genomes_fasta(const std::filesystem::path& path,
                         const std::vector<Genome>& genomes) {
  std::vector<FastaRecord> records;
  records.reserve(genomes.size());
  for (const auto& g : genomes) records.push_back({g.id, g.sequence});
  write_fasta(path, records);
}

void write_truth_intervals(const std::filesystem::path& path,
                           const std::vector<Genome>& genomes) {
  std::ostringstream out;
  out << "genome_id\tstart\tend\trepeat_id\n";
  for (const auto& g : genomes)
    for (const auto& iv : g.repeat_intervals)
      out << g.id << '\t' << iv.start << '\t' << iv.end << '\t' << iv.repeat_id << '\n';
  write_text_file(path, out.str());
}

void write_paired_fastq(const std::filesystem::path& dir, const std::string& prefix,
                        const std::vector<ReadPair>& pairs) {
  ensure_directory(dir);
  std::ofstream r1(dir / (prefix + "_1.fastq"));
  std::ofstream r2(dir / (prefix + "_2.fastq"));
  if (!r1 || !r2) throw InputError("cannot write FASTQ files under " + dir.string());
  for (const auto& p : pairs) {
    r1 << '@' << p.id << "/1\n" << p.fwd << "\n+\n" << std::string(p.fwd.size(), 'I') << '\n';
    r2 << '@' << p.id << "/2\n" << p.rev << "\n+\n" << std::string(p.rev.size(), 'I') << '\n';
  }
}

std::vector<ReadPair> read_paired_fastq(const std::filesystem::path& r1,
                                        const std::filesystem::path& r2) {
  auto recs1 = read_fastq(r1);
  auto recs2 = read_fastq(r2);
  if (recs1.size() != recs2.size())
    throw ParseError("paired FASTQ files differ in record count");
  auto strip_mate = [](std::string id) {
    if (id.size() >= 2 && id[id.size() - 2] == '/') id.resize(id.size() - 2);
    return id;
  };
  std::vector<ReadPair> pairs;
  pairs.reserve(recs1.size());
  for (size_t i = 0; i < recs1.size(); ++i) {
    std::string id1 = strip_mate(recs1[i].id);
    if (id1 != strip_mate(recs2[i].id))
      throw ParseError("paired FASTQ id mismatch at record " + std::to_string(i + 1) +
                       ": '" + recs1[i].id + "' vs '" + recs2[i].id + "'");
    if (recs1[i].sequence.size() != recs2[i].sequence.size())
      throw ParseError("mate length mismatch for read '" + id1 + "'");
    pairs.push_back({std::move(id1), std::move(recs1[i].sequence),
                     std::move(recs2[i].sequence), std::nullopt});
  }
  return pairs;
}

}  // namespace repgraph
