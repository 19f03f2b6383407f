#include "repgraph/unigraph.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"

namespace repgraph {

std::vector<std::vector<uint32_t>> UnitigGraph::adjacency() const {
  std::vector<std::vector<uint32_t>> adj(n_nodes);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

EdgeMultiset build_edges(const MappingTable& table, const EdgeBuildConfig& config) {
  EdgeMultiset out;
  out.n_nodes = table.n_unitigs;

  std::vector<uint64_t> contributions;  // per-pair scratch
  for (const auto& pm : table.pairs) {
    contributions.clear();

    // Adjacency: distinct unordered pairs across the two sets.
    for (uint32_t a : pm.u1)
      for (uint32_t b : pm.u2)
        if (a != b) contributions.push_back(edge_key(a, b));
    std::sort(contributions.begin(), contributions.end());
    contributions.erase(std::unique(contributions.begin(), contributions.end()),
                        contributions.end());

    // Repeat edges within each mate's set, guarded against quadratic blowup.
    for (const auto* uset : {&pm.u1, &pm.u2}) {
      if (uset->size() > config.max_multimap) {
        ++out.repeat_edge_skips;
        continue;
      }
      for (size_t i = 0; i < uset->size(); ++i)
        for (size_t j = i + 1; j < uset->size(); ++j)
          contributions.push_back(edge_key((*uset)[i], (*uset)[j]));
    }

    for (uint64_t key : contributions) ++out.weight[key];
  }
  if (out.repeat_edge_skips > 0)
    std::cerr << "build_edges: skipped repeat edges for " << out.repeat_edge_skips
              << " mates mapping to more than " << config.max_multimap << " unitigs\n";
  return out;
}

UnitigGraph prune_lowest_quartile(const EdgeMultiset& edges) {
  UnitigGraph graph;
  graph.n_nodes = edges.n_nodes;
  graph.edges_before = edges.weight.size();
  if (edges.weight.empty()) {
    std::cerr << "prune_lowest_quartile: empty edge set, graph has no edges\n";
    return graph;
  }

  std::vector<uint32_t> weights;
  weights.reserve(edges.weight.size());
  for (const auto& [key, w] : edges.weight) weights.push_back(w);
  std::sort(weights.begin(), weights.end());

  // Nearest-rank percentile: smallest value with rank >= ceil(0.25 * n).
  size_t rank = (weights.size() + 3) / 4;
  graph.q1 = weights[rank - 1];
  bool uniform = weights.front() == weights.back();

  std::vector<std::pair<uint64_t, uint32_t>> kept;
  for (const auto& [key, w] : edges.weight)
    if (uniform || w > graph.q1) kept.emplace_back(key, w);
  std::sort(kept.begin(), kept.end());

  graph.edges.reserve(kept.size());
  graph.weights.reserve(kept.size());
  for (const auto& [key, w] : kept) {
    graph.edges.emplace_back(static_cast<uint32_t>(key >> 32),
                             static_cast<uint32_t>(key & 0xffffffffu));
    graph.weights.push_back(w);
  }
  return graph;
}

void write_graph(const std::filesystem::path& dir, const UnitigGraph& graph) {
  ensure_directory(dir);
  std::ostringstream out;
  out << "u\tv\tweight\n";
  for (size_t i = 0; i < graph.edges.size(); ++i)
    out << graph.edges[i].first << '\t' << graph.edges[i].second << '\t'
        << graph.weights[i] << '\n';
  write_text_file(dir / "edges.tsv", out.str());

  nlohmann::json header{{"n_nodes", graph.n_nodes},
                        {"q1", graph.q1},
                        {"edges_before", graph.edges_before},
                        {"edges_after", graph.edges.size()}};
  write_text_file(dir / "graph.json", header.dump(2) + "\n");
}

UnitigGraph read_graph(const std::filesystem::path& dir) {
  UnitigGraph graph;
  auto header = nlohmann::json::parse(read_text_file(dir / "graph.json"));
  graph.n_nodes = header.at("n_nodes").get<uint32_t>();
  graph.q1 = header.at("q1").get<uint32_t>();
  graph.edges_before = header.at("edges_before").get<uint64_t>();

  std::ifstream in(dir / "edges.tsv");
  if (!in) throw InputError("cannot open " + (dir / "edges.tsv").string());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 3)
      throw ParseError((dir / "edges.tsv").string() + ": expected 3 columns");
    uint32_t u = static_cast<uint32_t>(std::stoul(fields[0]));
    uint32_t v = static_cast<uint32_t>(std::stoul(fields[1]));
    if (u >= graph.n_nodes || v >= graph.n_nodes)
      throw ParseError((dir / "edges.tsv").string() + ": edge endpoint out of range");
    graph.edges.emplace_back(u, v);
    graph.weights.push_back(static_cast<uint32_t>(std::stoul(fields[2])));
  }
  return graph;
}

}  // namespace repgraph
