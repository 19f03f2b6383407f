#pragma once

#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <vector>

#include "repgraph/assembly.hpp"

namespace repgraph {

// Unordered edge key: smaller id in the high 32 bits.
inline uint64_t edge_key(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | b;
}

// Read-support counts per unordered unitig pair, before pruning.
struct EdgeMultiset {
  uint32_t n_nodes = 0;
  std::unordered_map<uint64_t, uint32_t> weight;
  uint64_t repeat_edge_skips = 0;  // mates dropped by the multimap guard
};

// Pruned undirected graph; topology is what downstream consumers use, the
// retained weights only feed the weighted degree.
struct UnitigGraph {
  uint32_t n_nodes = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // u < v, sorted
  std::vector<uint32_t> weights;                     // parallel to edges
  uint32_t q1 = 0;
  uint64_t edges_before = 0;

  std::vector<std::vector<uint32_t>> adjacency() const;
};

struct EdgeBuildConfig {
  // A mate mapping to more unitigs than this contributes no repeat edges.
  uint32_t max_multimap = 50;
};

// Adjacency edges between the two mates' unitig sets plus repeat edges within
// each set; the two kinds are merged into a single per-pair support count.
EdgeMultiset build_edges(const MappingTable& table, const EdgeBuildConfig& config = {});

// Nearest-rank 25th-percentile threshold; edges with weight <= Q1 are
// dropped unless every weight is equal (which would empty the graph).
UnitigGraph prune_lowest_quartile(const EdgeMultiset& edges);

void write_graph(const std::filesystem::path& dir, const UnitigGraph& graph);
UnitigGraph read_graph(const std::filesystem::path& dir);

}  // namespace repgraph
