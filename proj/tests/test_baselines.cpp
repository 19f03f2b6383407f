#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "repgraph/baselines.hpp"
#include "repgraph/rng.hpp"
#include "testutil.hpp"

using namespace repgraph;
using testutil::make_graph;

TEST_CASE("baseline heuristic is the repeat pseudo-label indicator") {
  LabelPartition part;
  part.repeat = {1, 3};
  part.non_repeat = {0};
  part.unlabeled = {2, 4};
  auto y = baseline_heuristic(part);
  CHECK(y == std::vector<uint8_t>{0, 1, 0, 1, 0});

  LabelPartition empty_r;
  empty_r.non_repeat = {0, 1};
  empty_r.unlabeled = {2};
  CHECK(baseline_heuristic(empty_r) == std::vector<uint8_t>{0, 0, 0});
}

TEST_CASE("coverage filters") {
  SUBCASE("hand example") {
    auto y = coverage_filter({10, 10, 10, 70}, 1.5);
    // mean 25, threshold 37.5
    CHECK(y == std::vector<uint8_t>{0, 0, 0, 1});
  }

  SUBCASE("equal coverages flag nothing") {
    auto y = coverage_filter({8, 8, 8}, 1.5);
    CHECK(y == std::vector<uint8_t>{0, 0, 0});
  }

  SUBCASE("random vector against recomputation") {
    Rng rng(141);
    std::vector<double> covs(50);
    for (auto& c : covs) c = rng.real01() * 100;
    for (double factor : {1.5, 2.5}) {
      auto y = coverage_filter(covs, factor);
      double mean = 0;
      for (double c : covs) mean += c;
      mean /= covs.size();
      for (size_t i = 0; i < covs.size(); ++i)
        CHECK(y[i] == (covs[i] > factor * mean ? 1 : 0));
    }
  }

  SUBCASE("sopra flags are a subset of opera flags") {
    Rng rng(143);
    std::vector<double> covs(80);
    for (auto& c : covs) c = rng.real01() * 50;
    auto opera = coverage_filter(covs, 1.5);
    auto sopra = coverage_filter(covs, 2.5);
    for (size_t i = 0; i < covs.size(); ++i)
      if (sopra[i]) CHECK(opera[i]);
  }
}

TEST_CASE("mip combines coverage and degree") {
  // mean coverage 207/9 = 23, threshold 57.5
  std::vector<double> covs{100, 100, 1, 1, 1, 1, 1, 1, 1};
  std::vector<uint32_t> degs{49, 50, 50, 10, 10, 10, 10, 10, 10};
  auto y = mip(covs, degs, 2.5, 50);
  CHECK(y[0] == 0);  // degree 49 misses the inclusive bound
  CHECK(y[1] == 1);  // degree 50 passes
  CHECK(y[2] == 0);  // low coverage

  // Conjunction of the two single-criterion rules.
  Rng rng(147);
  std::vector<double> rcovs(60);
  std::vector<uint32_t> rdegs(60);
  for (auto& c : rcovs) c = rng.real01() * 100;
  for (auto& d : rdegs) d = static_cast<uint32_t>(rng.bounded(100));
  auto combined = mip(rcovs, rdegs, 2.5, 50);
  auto cov_only = coverage_filter(rcovs, 2.5);
  for (size_t i = 0; i < rcovs.size(); ++i)
    CHECK(combined[i] == (cov_only[i] && rdegs[i] >= 50 ? 1 : 0));
}

TEST_CASE("bambus2 thresholds the betweenness/length ratio") {
  SUBCASE("c=0 uses the mean ratio") {
    std::vector<double> bc{10, 20, 90};
    std::vector<double> len{10, 10, 10};
    // ratios 1,2,9; mean 4
    auto y = bambus2(bc, len, 0.0);
    CHECK(y == std::vector<uint8_t>{0, 0, 1});
  }

  SUBCASE("equal ratios flag nothing") {
    auto y = bambus2({5, 10, 15}, {5, 10, 15}, 0.0);
    CHECK(y == std::vector<uint8_t>{0, 0, 0});
  }

  SUBCASE("c=1 against hand-computed moments") {
    std::vector<double> bc{2, 4, 6, 16};
    std::vector<double> len{2, 2, 2, 2};
    // ratios 1,2,3,8: mean 3.5, population std sqrt(7.25)
    double threshold = 3.5 + std::sqrt(7.25);
    auto y = bambus2(bc, len, 1.0);
    for (size_t i = 0; i < bc.size(); ++i)
      CHECK(y[i] == (bc[i] / len[i] > threshold ? 1 : 0));
  }
}

TEST_CASE("metacarvel variant") {
  SUBCASE("extreme betweenness flags by step one regardless of coverage") {
    // Nine background nodes and one outlier beyond mean + 3 std.
    std::vector<double> bc{1, 1, 1, 1, 1, 1, 1, 1, 1, 100};
    std::vector<double> cov(10, 5.0);
    std::vector<uint32_t> deg(10, 2);
    std::vector<double> skew(10, 0.0);
    auto y = metacarvel_variant(bc, cov, deg, skew);
    CHECK(y[9] == 1);
    // Coverage invariance of step one: rescale coverages, same flags.
    for (auto& c : cov) c *= 100;
    CHECK(metacarvel_variant(bc, cov, deg, skew) == y);
  }

  SUBCASE("one quartile flag is not enough") {
    // Non-constant betweenness so step one's mean + 3 std excludes everyone.
    std::vector<double> bc{1, 2, 1, 2, 1, 2, 1, 2};
    std::vector<double> cov{1, 1, 1, 1, 1, 1, 1, 50};
    std::vector<uint32_t> deg(8, 3);
    std::vector<double> skew(8, 0.1);
    auto y = metacarvel_variant(bc, cov, deg, skew);
    CHECK(y[7] == 0);
  }

  SUBCASE("10-node fixture against brute evaluation of both steps") {
    Rng rng(151);
    std::vector<double> bc(10), cov(10), skew(10);
    std::vector<uint32_t> deg(10);
    for (int i = 0; i < 10; ++i) {
      bc[i] = rng.real01() * 30;
      cov[i] = rng.real01() * 40;
      deg[i] = static_cast<uint32_t>(rng.bounded(20));
      skew[i] = rng.real01();
    }
    auto y = metacarvel_variant(bc, cov, deg, skew);

    double mean = 0, sd = 0;
    for (double b : bc) mean += b;
    mean /= 10;
    for (double b : bc) sd += (b - mean) * (b - mean);
    sd = std::sqrt(sd / 10);
    std::vector<double> degs_d(deg.begin(), deg.end());
    double cq = percentile(cov, 75), dq = percentile(degs_d, 75), sq = percentile(skew, 75);
    for (int i = 0; i < 10; ++i) {
      bool expected = bc[i] >= mean + 3 * sd;
      if (!expected) {
        int flags = (cov[i] > cq) + (degs_d[i] > dq) + (skew[i] > sq);
        expected = flags >= 2;
      }
      CHECK(y[i] == (expected ? 1 : 0));
    }
  }
}

TEST_CASE("skewed edge ratio") {
  // Node 0 has two edges, one skewed (coverage 1 vs 10) and one not (4 vs 5).
  auto g = make_graph(3, {{0, 1, 1}, {0, 2, 1}});
  std::vector<double> covs{4.0, 5.0, 10.0 * 4.0 / 1.0};  // make edge 0-2 skewed
  covs = {4.0, 5.0, 40.0};
  auto ratio = skewed_edge_ratio(g, covs, 2.0);
  CHECK(ratio[0] == doctest::Approx(0.5));
  CHECK(ratio[1] == doctest::Approx(0.0));
  CHECK(ratio[2] == doctest::Approx(1.0));

  // Zero coverages on both endpoints do not count as skewed.
  auto g2 = make_graph(2, {{0, 1, 1}});
  auto r2 = skewed_edge_ratio(g2, {0.0, 0.0}, 2.0);
  CHECK(r2[0] == 0.0);
}

TEST_CASE("determinism of every heuristic") {
  Rng rng(157);
  auto g = testutil::random_graph(12, 0.3, rng);
  std::vector<double> covs(12), bc(12), lens(12), skew(12);
  std::vector<uint32_t> deg(12);
  for (int i = 0; i < 12; ++i) {
    covs[i] = rng.real01() * 30;
    bc[i] = rng.real01() * 10;
    lens[i] = 100 + rng.bounded(4000);
    deg[i] = static_cast<uint32_t>(rng.bounded(60));
    skew[i] = rng.real01();
  }
  CHECK(coverage_filter(covs, 1.5) == coverage_filter(covs, 1.5));
  CHECK(mip(covs, deg, 2.5, 50) == mip(covs, deg, 2.5, 50));
  CHECK(bambus2(bc, lens, 0.0) == bambus2(bc, lens, 0.0));
  CHECK(metacarvel_variant(bc, covs, deg, skew) == metacarvel_variant(bc, covs, deg, skew));
}
