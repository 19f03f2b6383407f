#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <map>

#include "repgraph/rng.hpp"
#include "repgraph/unigraph.hpp"

using namespace repgraph;

namespace {

MappingTable table_of(uint32_t n, std::vector<PairMapping> pairs) {
  MappingTable t;
  t.n_unitigs = n;
  t.pairs = std::move(pairs);
  t.depth_sum.assign(n, 0);
  return t;
}

// Direct enumeration of the edge rules, kept deliberately naive.
std::map<uint64_t, uint32_t> brute_edges(const MappingTable& t, uint32_t max_multimap) {
  std::map<uint64_t, uint32_t> w;
  for (const auto& pm : t.pairs) {
    std::map<uint64_t, uint32_t> local;
    for (uint32_t a : pm.u1)
      for (uint32_t b : pm.u2)
        if (a != b) local[edge_key(a, b)] = 1;  // a set, not a multiset
    for (const auto* uset : {&pm.u1, &pm.u2}) {
      if (uset->size() > max_multimap) continue;
      for (size_t i = 0; i < uset->size(); ++i)
        for (size_t j = i + 1; j < uset->size(); ++j)
          local[edge_key((*uset)[i], (*uset)[j])] += 1;
    }
    for (const auto& [k, c] : local) w[k] += c;
  }
  return w;
}

}  // namespace

TEST_CASE("edge construction rules") {
  SUBCASE("adjacency plus repeat edges for one pair") {
    auto t = table_of(4, {PairMapping{{1, 2}, {3}}});
    auto edges = build_edges(t);
    CHECK(edges.weight.size() == 3);
    CHECK(edges.weight.at(edge_key(1, 3)) == 1);
    CHECK(edges.weight.at(edge_key(2, 3)) == 1);
    CHECK(edges.weight.at(edge_key(1, 2)) == 1);
  }

  SUBCASE("self loops are discarded") {
    auto t = table_of(6, {PairMapping{{5}, {5}}});
    CHECK(build_edges(t).weight.empty());
  }

  SUBCASE("merged weights sum repeat and adjacency contributions") {
    auto t = table_of(3, {PairMapping{{1, 2}, {1}}, PairMapping{{1, 2}, {1}}});
    auto edges = build_edges(t);
    REQUIRE(edges.weight.size() == 1);
    CHECK(edges.weight.at(edge_key(1, 2)) == 4);
  }

  SUBCASE("multimap guard drops repeat edges only") {
    PairMapping pm;
    for (uint32_t i = 0; i < 60; ++i) pm.u1.push_back(i);
    pm.u2 = {100};
    auto t = table_of(101, {pm});
    EdgeBuildConfig config;
    config.max_multimap = 50;
    auto edges = build_edges(t, config);
    CHECK(edges.repeat_edge_skips == 1);
    CHECK(edges.weight.size() == 60);  // adjacency edges survive
    for (uint32_t i = 0; i < 60; ++i) CHECK(edges.weight.at(edge_key(i, 100)) == 1);
  }
}

TEST_CASE("merge correctness against brute force on random fixtures") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    uint32_t n = 6 + static_cast<uint32_t>(rng.bounded(6));
    std::vector<PairMapping> pairs;
    int n_pairs = 1 + static_cast<int>(rng.bounded(100));
    for (int i = 0; i < n_pairs; ++i) {
      PairMapping pm;
      for (uint32_t u = 0; u < n; ++u) {
        if (rng.real01() < 0.25) pm.u1.push_back(u);
        if (rng.real01() < 0.25) pm.u2.push_back(u);
      }
      pairs.push_back(std::move(pm));
    }
    auto t = table_of(n, pairs);
    auto got = build_edges(t);
    auto want = brute_edges(t, EdgeBuildConfig{}.max_multimap);
    REQUIRE(got.weight.size() == want.size());
    for (const auto& [k, w] : want) CHECK(got.weight.at(k) == w);
  }
}

TEST_CASE("quartile pruning") {
  auto edges_with_weights = [](std::vector<uint32_t> ws) {
    EdgeMultiset e;
    e.n_nodes = static_cast<uint32_t>(ws.size() + 1);
    for (uint32_t i = 0; i < ws.size(); ++i) e.weight[edge_key(i, i + 1)] = ws[i];
    return e;
  };

  SUBCASE("weights 1,2,3,4 drop the weight-1 edge") {
    auto g = prune_lowest_quartile(edges_with_weights({1, 2, 3, 4}));
    CHECK(g.q1 == 1);
    REQUIRE(g.edges.size() == 3);
    for (uint32_t w : g.weights) CHECK(w > 1);
  }

  SUBCASE("uniform weights are kept") {
    auto g = prune_lowest_quartile(edges_with_weights({2, 2, 2, 2}));
    CHECK(g.edges.size() == 4);
  }

  SUBCASE("heavy tail survives alone") {
    auto g = prune_lowest_quartile(edges_with_weights({1, 1, 1, 1, 10}));
    CHECK(g.q1 == 1);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.weights[0] == 10);
  }

  SUBCASE("empty edge set yields an empty graph") {
    EdgeMultiset e;
    e.n_nodes = 3;
    auto g = prune_lowest_quartile(e);
    CHECK(g.n_nodes == 3);
    CHECK(g.edges.empty());
  }

  SUBCASE("retained weights always exceed Q1") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<uint32_t> ws(1 + rng.bounded(30));
      for (auto& w : ws) w = 1 + static_cast<uint32_t>(rng.bounded(9));
      bool uniform = true;
      for (uint32_t w : ws) uniform = uniform && w == ws[0];
      auto g = prune_lowest_quartile(edges_with_weights(ws));
      if (uniform) {
        CHECK(g.edges.size() == ws.size());
      } else {
        CHECK(!g.edges.empty());
        for (uint32_t w : g.weights) CHECK(w > g.q1);
      }
    }
  }
}

TEST_CASE("pruning monotonicity in the percentile") {
  // Retention under the quartile rule is a superset of retention under any
  // higher percentile threshold (same nearest-rank convention).
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    size_t m = 4 + rng.bounded(40);
    std::vector<uint32_t> ws(m);
    for (auto& w : ws) w = 1 + static_cast<uint32_t>(rng.bounded(20));
    std::vector<uint32_t> sorted = ws;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) continue;

    EdgeMultiset e;
    e.n_nodes = static_cast<uint32_t>(m + 1);
    for (uint32_t i = 0; i < m; ++i) e.weight[edge_key(i, i + 1)] = ws[i];
    auto quartile = prune_lowest_quartile(e);

    for (double pct : {0.40, 0.60, 0.90}) {
      size_t rank = static_cast<size_t>(std::ceil(pct * static_cast<double>(m)));
      uint32_t threshold = sorted[rank - 1];
      // Every edge retained at the higher percentile is retained at Q1.
      for (uint32_t i = 0; i < m; ++i) {
        if (ws[i] > threshold) {
          bool found = false;
          for (const auto& edge : quartile.edges)
            if (edge == std::make_pair(i, i + 1)) found = true;
          CHECK(found);
        }
      }
    }
  }
}

TEST_CASE("permutation equivariance of the built graph") {
  Rng rng(61);
  auto t = table_of(8, {});
  for (int i = 0; i < 40; ++i) {
    PairMapping pm;
    for (uint32_t u = 0; u < 8; ++u) {
      if (rng.real01() < 0.3) pm.u1.push_back(u);
      if (rng.real01() < 0.3) pm.u2.push_back(u);
    }
    t.pairs.push_back(std::move(pm));
  }

  std::vector<uint32_t> perm{3, 1, 4, 0, 7, 2, 6, 5};
  MappingTable permuted = t;
  for (auto& pm : permuted.pairs) {
    for (auto& u : pm.u1) u = perm[u];
    for (auto& u : pm.u2) u = perm[u];
    std::sort(pm.u1.begin(), pm.u1.end());
    std::sort(pm.u2.begin(), pm.u2.end());
  }

  auto g1 = prune_lowest_quartile(build_edges(t));
  auto g2 = prune_lowest_quartile(build_edges(permuted));
  CHECK(g1.q1 == g2.q1);
  REQUIRE(g1.edges.size() == g2.edges.size());

  std::map<uint64_t, uint32_t> w2;
  for (size_t i = 0; i < g2.edges.size(); ++i)
    w2[edge_key(g2.edges[i].first, g2.edges[i].second)] = g2.weights[i];
  for (size_t i = 0; i < g1.edges.size(); ++i) {
    uint64_t key = edge_key(perm[g1.edges[i].first], perm[g1.edges[i].second]);
    CHECK(w2.at(key) == g1.weights[i]);
  }
}

TEST_CASE("graph round trip through the edge list files") {
  auto t = table_of(5, {PairMapping{{0, 1}, {2}}, PairMapping{{1, 2}, {3, 4}},
                        PairMapping{{0}, {4}}, PairMapping{{2, 3}, {0}}});
  auto g = prune_lowest_quartile(build_edges(t));
  auto dir = std::filesystem::temp_directory_path() / "repgraph_test_graph";
  write_graph(dir, g);
  auto loaded = read_graph(dir);
  CHECK(loaded.n_nodes == g.n_nodes);
  CHECK(loaded.q1 == g.q1);
  CHECK(loaded.edges_before == g.edges_before);
  CHECK(loaded.edges == g.edges);
  CHECK(loaded.weights == g.weights);
  std::filesystem::remove_all(dir);
}
