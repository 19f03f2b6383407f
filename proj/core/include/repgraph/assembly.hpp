#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "repgraph/simdata.hpp"

namespace repgraph {

struct UnitigRecord {
  uint32_t id = 0;  // dense 0..N-1
  std::string sequence;
  uint64_t length = 0;
  double mean_coverage = 0.0;
};

// Per read pair: distinct unitig ids hit by each mate's first-k prefix,
// plus per-unitig accumulated depth (k bases per match site).
struct PairMapping {
  std::vector<uint32_t> u1;
  std::vector<uint32_t> u2;
};

struct MappingTable {
  uint32_t n_unitigs = 0;
  std::vector<PairMapping> pairs;
  std::vector<uint64_t> depth_sum;  // covered bases per unitig
};

// Compacts the de Bruijn graph over the canonical k-mers of all mates into
// maximal non-branching paths. Coverage is left at zero; ids are assigned
// after sorting so output is independent of traversal order.
std::vector<UnitigRecord> build_unitigs(const std::vector<ReadPair>& reads, int k);

// Exact multi-site lookup of each mate's first-k prefix against every k-mer
// window of every unitig, in both orientations.
MappingTable map_read_prefixes(const std::vector<ReadPair>& reads,
                               const std::vector<UnitigRecord>& unitigs, int k,
                               unsigned n_threads = 1);

void finalize_coverage(std::vector<UnitigRecord>& unitigs, const MappingTable& table);

// Text SAM against the unitigs ("u<id>" or bare integer reference names).
// Primary, secondary and supplementary alignments all contribute; depth
// covers the CIGAR-consumed reference span.
MappingTable import_sam(const std::vector<UnitigRecord>& unitigs, std::istream& sam);

void write_unitigs_fasta(const std::filesystem::path& path,
                         const std::vector<UnitigRecord>& unitigs);
void write_unitig_table(const std::filesystem::path& path,
                        const std::vector<UnitigRecord>& unitigs);
std::vector<UnitigRecord> read_unitigs_fasta(const std::filesystem::path& path);
std::vector<UnitigRecord> read_unitig_table(const std::filesystem::path& path,
                                            std::vector<UnitigRecord> unitigs);
void write_mapping(const std::filesystem::path& dir, const MappingTable& table);
MappingTable read_mapping(const std::filesystem::path& dir);

}  // namespace repgraph
