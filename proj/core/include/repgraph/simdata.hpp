#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repgraph {

struct RepeatInterval {
  uint64_t start = 0;  // 0-based
  uint64_t end = 0;    // exclusive
  std::string repeat_id;
};

struct Genome {
  std::string id;
  std::string sequence;
  std::vector<RepeatInterval> repeat_intervals;
};

struct ReadOrigin {
  std::string genome_id;
  uint64_t fwd_start = 0;
  uint64_t rev_start = 0;
};

struct ReadPair {
  std::string id;
  std::string fwd;
  std::string rev;  // sequencing orientation (reverse-complemented vs reference)
  std::optional<ReadOrigin> origin;
};

struct ReadSimParams {
  uint64_t n_pairs = 0;
  uint32_t read_len = 101;
  uint32_t outer_dist = 500;
  double err_rate = 0.02;   // per-base substitution on each mate
  double mut_rate = 0.001;  // per-base substitution on each fragment
  uint64_t seed = 0;
};

// Uniform i.i.d. backbone over {A,C,G,T}.
Genome gen_backbone(uint64_t length, uint64_t rng_seed);

// Skewed repeat unit, base probabilities (A,C,G,T) = (0.4, 0.3, 0.2, 0.1).
std::string gen_repeat_unit(uint64_t length, uint64_t rng_seed);

// Overwrites each genome with C copies of a genome-private unit and C copies
// of one unit shared by all genomes. Placement is uniform without overlap;
// genome length is unchanged and repeat content becomes exactly 2*L*C.
std::vector<Genome> insert_repeats(std::vector<Genome> genomes, uint64_t unit_len,
                                   uint32_t copy_number, uint64_t rng_seed);

// Paired-end fragments of fixed span `outer_dist`, start uniform over the
// pooled genome length. Fragment-level mutations are applied before the
// mates are read off; per-base read errors after.
std::vector<ReadPair> simulate_reads(const std::vector<Genome>& genomes,
                                     const ReadSimParams& params);

void write_genomes_fasta(const std::filesystem::path& path,
                         const std::vector<Genome>& genomes);
void write_truth_intervals(const std::filesystem::path& path,
                           const std::vector<Genome>& genomes);
// Two files: <prefix>_1.fastq and <prefix>_2.fastq, ids suffixed /1 and /2.
void write_paired_fastq(const std::filesystem::path& dir, const std::string& prefix,
                        const std::vector<ReadPair>& pairs);
std::vector<ReadPair> read_paired_fastq(const std::filesystem::path& r1,
                                        const std::filesystem::path& r2);

}  // namespace repgraph
