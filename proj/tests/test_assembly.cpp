#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <sstream>

#include "repgraph/assembly.hpp"
#include "repgraph/dna.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/kmer_set.hpp"
#include "repgraph/rng.hpp"
#include "repgraph/simdata.hpp"

using namespace repgraph;

namespace {

std::string random_dna(size_t len, Rng& rng) {
  std::string s(len, '\0');
  for (auto& c : s) c = code_base(static_cast<uint8_t>(rng.bounded(4)));
  return s;
}

ReadPair pair_of(const std::string& fwd, const std::string& rev, int i = 0) {
  return ReadPair{"r" + std::to_string(i), fwd, rev, std::nullopt};
}

// Reads tiling the sequence with single-base steps (and their reverse
// complements on the second mate), so every k-mer is covered.
std::vector<ReadPair> tile(const std::string& genome, size_t read_len) {
  std::vector<ReadPair> reads;
  for (size_t i = 0; i + read_len <= genome.size(); ++i) {
    std::string window = genome.substr(i, read_len);
    reads.push_back(pair_of(window, reverse_complement(window), static_cast<int>(i)));
  }
  return reads;
}

std::multiset<std::string> canonical_kmers(const std::vector<std::string>& seqs, int k) {
  std::multiset<std::string> out;
  for (const auto& s : seqs)
    for (size_t i = 0; i + k <= s.size(); ++i) {
      std::string km = s.substr(i, k);
      std::string rc = reverse_complement(km);
      out.insert(std::min(km, rc));
    }
  return out;
}

// Occurrences of needle or its reverse complement in haystack.
size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  size_t count = 0;
  for (size_t at = haystack.find(needle); at != std::string::npos;
       at = haystack.find(needle, at + 1))
    ++count;
  std::string rc = reverse_complement(needle);
  if (rc != needle)
    for (size_t at = haystack.find(rc); at != std::string::npos;
         at = haystack.find(rc, at + 1))
      ++count;
  return count;
}

int fwd_extension_count(const KmerSet& set, Kmer x, int k, Kmer* succ) {
  int n = 0;
  for (uint8_t c = 0; c < 4; ++c) {
    Kmer cand = kmer_roll(x, c, k);
    if (set.contains(kmer_canonical(cand, k))) {
      ++n;
      *succ = cand;
    }
  }
  return n;
}

int bwd_extension_count(const KmerSet& set, Kmer x, int k) {
  int n = 0;
  for (uint8_t c = 0; c < 4; ++c) {
    Kmer cand = (Kmer(c) << (2 * (k - 1))) | (x >> 2);
    if (set.contains(kmer_canonical(cand, k))) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("build_unitigs input validation") {
  CHECK(build_unitigs({}, 5).empty());
  CHECK_THROWS_AS(build_unitigs({pair_of("ACGTACGT", "ACGTACGT")}, 1), InputError);
  CHECK_THROWS_AS(build_unitigs({pair_of("ACGT", "ACGT")}, 6), InputError);
}

TEST_CASE("single read with k equal to read length gives one unitig") {
  auto unitigs = build_unitigs({pair_of("ACGTAC", "GTACGT")}, 6);
  // Both mates share the same canonical 6-mer here.
  REQUIRE(unitigs.size() == 1);
  std::string rc = reverse_complement("ACGTAC");
  CHECK(unitigs[0].sequence == std::min(std::string("ACGTAC"), rc));
  CHECK(unitigs[0].length == 6);
  CHECK(unitigs[0].mean_coverage == 0.0);
}

TEST_CASE("clean tiling reconstructs the source string") {
  // Search for a short string whose canonical k-mer chain is branch-free, so
  // the whole string must come back as a single unitig. The cleanliness check
  // below is an independent brute-force pass over the k-mer set. k=3 is too
  // dense for this (spurious (k-1)-overlaps are near-certain), hence k=5.
  const int k = 5;
  Rng rng(23);
  int found = 0;
  for (int attempt = 0; attempt < 500 && found < 5; ++attempt) {
    std::string s = random_dna(12, rng);
    auto kmers = canonical_kmers({s}, k);
    std::set<std::string> distinct(kmers.begin(), kmers.end());
    if (distinct.size() != 8) continue;  // k-mer repeats (incl. rc collisions)
    bool palindrome = false;
    for (const auto& km : distinct)
      if (reverse_complement(km) == km) palindrome = true;
    if (palindrome) continue;

    KmerSet set;
    for (const auto& km : distinct) set.insert(kmer_canonical(encode_kmer(km, 0, k), k));
    bool clean = true;
    for (const auto& km : distinct) {
      for (const std::string& oriented : {km, reverse_complement(km)}) {
        Kmer x = encode_kmer(oriented, 0, k);
        Kmer succ = 0;
        if (fwd_extension_count(set, x, k, &succ) > 1) clean = false;
      }
    }
    if (!clean) continue;

    ++found;
    auto unitigs = build_unitigs(tile(s, k + 2), k);
    REQUIRE(unitigs.size() == 1);
    CHECK(unitigs[0].sequence == std::min(s, reverse_complement(s)));
  }
  CHECK(found == 5);
}

TEST_CASE("k-mer partition property") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ReadPair> reads;
    int n_reads = 3 + static_cast<int>(rng.bounded(6));
    for (int i = 0; i < n_reads; ++i)
      reads.push_back(pair_of(random_dna(12 + rng.bounded(20), rng),
                              random_dna(12 + rng.bounded(20), rng), i));
    int k = 4 + static_cast<int>(rng.bounded(5));

    auto unitigs = build_unitigs(reads, k);
    std::vector<std::string> read_seqs, unitig_seqs;
    for (const auto& r : reads) {
      read_seqs.push_back(r.fwd);
      read_seqs.push_back(r.rev);
    }
    for (const auto& u : unitigs) unitig_seqs.push_back(u.sequence);

    auto read_kmers = canonical_kmers(read_seqs, k);
    std::set<std::string> read_distinct(read_kmers.begin(), read_kmers.end());
    auto unitig_kmers = canonical_kmers(unitig_seqs, k);

    // Every distinct canonical read k-mer appears in exactly one unitig,
    // exactly once.
    CHECK(unitig_kmers.size() == read_distinct.size());
    for (const auto& km : read_distinct) CHECK(unitig_kmers.count(km) == 1);
  }
}

TEST_CASE("unitig maximality") {
  Rng rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const int k = 5;
    std::vector<ReadPair> reads;
    for (int i = 0; i < 3; ++i)
      reads.push_back(pair_of(random_dna(36, rng), random_dna(36, rng), i));
    auto unitigs = build_unitigs(reads, k);

    KmerSet set;
    size_t total_kmers = 0;
    for (const auto& u : unitigs) {
      for (size_t i = 0; i + k <= u.sequence.size(); ++i)
        set.insert(kmer_canonical(encode_kmer(u.sequence, i, k), k));
      total_kmers += u.sequence.size() - k + 1;
    }
    REQUIRE(set.size() == total_kmers);
    REQUIRE(total_kmers <= 200);

    // Map each terminal k-mer to its unitig to detect cross-unitig joins.
    std::map<std::string, int> terminal_of;
    for (const auto& u : unitigs) {
      auto mark = [&](size_t pos) {
        std::string km = u.sequence.substr(pos, k);
        terminal_of[std::min(km, reverse_complement(km))] = u.id;
      };
      mark(0);
      mark(u.sequence.size() - k);
    }

    for (const auto& u : unitigs) {
      // Right end forward, left end as reverse complement.
      for (const std::string& oriented :
           {u.sequence.substr(u.sequence.size() - k),
            reverse_complement(u.sequence.substr(0, k))}) {
        Kmer x = encode_kmer(oriented, 0, k);
        Kmer succ = 0;
        if (fwd_extension_count(set, x, k, &succ) != 1) continue;
        if (bwd_extension_count(set, succ, k) != 1) continue;
        if (succ == kmer_revcomp(succ, k)) continue;
        // A unique bidirectional join must stay within this unitig (a cycle);
        // joining into a different unitig would contradict maximality.
        std::string succ_str = decode_kmer(succ, k);
        auto it = terminal_of.find(std::min(succ_str, reverse_complement(succ_str)));
        if (it != terminal_of.end()) CHECK(it->second == u.id);
      }
    }
  }
}

TEST_CASE("planted repeat collapses to one interior unitig") {
  std::vector<Genome> genomes{gen_backbone(6000, 1), gen_backbone(6000, 2)};
  genomes[0].id = "a";
  genomes[1].id = "b";
  auto with_repeats = insert_repeats(genomes, 400, 3, 11);

  ReadSimParams params;
  params.n_pairs = 4000;  // ~67x
  params.err_rate = 0.0;
  params.mut_rate = 0.0;
  params.seed = 5;
  auto reads = simulate_reads(with_repeats, params);
  auto unitigs = build_unitigs(reads, 51);

  std::string all = with_repeats[0].sequence + "#" + with_repeats[1].sequence;
  size_t best_occurrences = 0;
  uint64_t best_length = 0;
  for (const auto& u : unitigs) {
    size_t occ = count_occurrences(all, u.sequence);
    if (occ > best_occurrences) {
      best_occurrences = occ;
      best_length = u.length;
    }
  }
  // The shared unit interior occurs 3 times in each genome.
  CHECK(best_occurrences >= 6);
  CHECK(best_length < 400 + 51);
}

TEST_CASE("map_read_prefixes") {
  // Hand-built unitig set; prefixes matched against every window.
  std::vector<UnitigRecord> unitigs;
  auto add = [&](const std::string& seq) {
    UnitigRecord u{static_cast<uint32_t>(unitigs.size()), seq, seq.size(), 0.0};
    unitigs.push_back(std::move(u));
  };
  const int k = 5;
  const std::string seed = "ACGGT";

  add("ACGGTTTTTT");                      // u0 starts with the seed
  add("TTTTAAAAAA");                      // u1 unrelated
  add("CCCC" + seed + "CCCC");            // u2 contains the seed
  add("GGGG" + std::string("ACCGT"));     // u3 ends with rc(seed)

  REQUIRE(reverse_complement(seed) == "ACCGT");

  SUBCASE("unique exact match") {
    auto table = map_read_prefixes({pair_of("TTTTAAA", "GGGGGGG")}, unitigs, k);
    CHECK(table.pairs[0].u1 == std::vector<uint32_t>{1});
    CHECK(table.pairs[0].u2.empty());
  }

  SUBCASE("seed shared by three unitigs") {
    auto table = map_read_prefixes({pair_of(seed + "AA", "GGGGGGG")}, unitigs, k);
    CHECK(table.pairs[0].u1 == std::vector<uint32_t>{0, 2, 3});
  }

  SUBCASE("substitution inside the prefix unmaps the mate") {
    auto table = map_read_prefixes({pair_of("TCGGTTT", "GGGGGGG")}, unitigs, k);
    CHECK(table.pairs[0].u1.empty());
  }

  SUBCASE("depth counts every match site") {
    auto table = map_read_prefixes({pair_of(seed + "AA", "GGGGGGG")}, unitigs, k);
    CHECK(table.depth_sum[0] == k);
    CHECK(table.depth_sum[2] == k);
    CHECK(table.depth_sum[3] == k);
    CHECK(table.depth_sum[1] == 0);
  }
}

TEST_CASE("finalize_coverage") {
  const int k = 6;
  std::vector<UnitigRecord> unitigs{{0, "ACGTAC", 6, 0.0}, {1, "ACGTACGTACGT", 12, 0.0}};
  std::vector<ReadPair> reads;
  for (int i = 0; i < 10; ++i) reads.push_back(pair_of("ACGTAC", "AAAAAA", i));

  SUBCASE("length-k unitig hit by 10 prefixes") {
    std::vector<UnitigRecord> one{unitigs[0]};
    auto table = map_read_prefixes(reads, one, k);
    finalize_coverage(one, table);
    CHECK(one[0].mean_coverage == doctest::Approx(10.0));
  }

  SUBCASE("no matches gives zero") {
    std::vector<UnitigRecord> one{{0, "GGGGGGGG", 8, 0.0}};
    auto table = map_read_prefixes(reads, one, k);
    finalize_coverage(one, table);
    CHECK(one[0].mean_coverage == 0.0);
  }

  SUBCASE("matches over a 2k unitig") {
    // 5 prefix matches of k bases over a 2k-long unitig: coverage 5k/2k.
    std::vector<UnitigRecord> one{{0, "ACGTACGGGGGG", 12, 0.0}};
    std::vector<ReadPair> five(reads.begin(), reads.begin() + 5);
    auto table = map_read_prefixes(five, one, k);
    finalize_coverage(one, table);
    CHECK(one[0].mean_coverage == doctest::Approx(2.5));
  }
}

TEST_CASE("coverage linearity under read duplication") {
  Rng rng(41);
  std::vector<Genome> genomes{gen_backbone(3000, 1), gen_backbone(3000, 2)};
  genomes[0].id = "a";
  genomes[1].id = "b";
  ReadSimParams params;
  params.n_pairs = 400;
  params.err_rate = 0.0;
  params.mut_rate = 0.0;
  params.seed = 5;
  auto reads = simulate_reads(genomes, params);
  auto unitigs = build_unitigs(reads, 31);

  auto once = unitigs;
  finalize_coverage(once, map_read_prefixes(reads, unitigs, 31));
  std::vector<ReadPair> doubled = reads;
  doubled.insert(doubled.end(), reads.begin(), reads.end());
  auto twice = unitigs;
  finalize_coverage(twice, map_read_prefixes(doubled, unitigs, 31));
  for (size_t i = 0; i < unitigs.size(); ++i) {
    CHECK(once[i].mean_coverage >= 0.0);
    CHECK(twice[i].mean_coverage == doctest::Approx(2.0 * once[i].mean_coverage));
  }
}

TEST_CASE("mapping is thread-count invariant") {
  std::vector<Genome> genomes{gen_backbone(3000, 3), gen_backbone(3000, 4)};
  genomes[0].id = "a";
  genomes[1].id = "b";
  ReadSimParams params;
  params.n_pairs = 300;
  params.seed = 8;
  params.err_rate = 0.0;
  params.mut_rate = 0.0;
  auto reads = simulate_reads(genomes, params);
  auto unitigs = build_unitigs(reads, 31);
  auto t1 = map_read_prefixes(reads, unitigs, 31, 1);
  auto t4 = map_read_prefixes(reads, unitigs, 31, 4);
  CHECK(t1.depth_sum == t4.depth_sum);
  for (size_t i = 0; i < t1.pairs.size(); ++i) {
    CHECK(t1.pairs[i].u1 == t4.pairs[i].u1);
    CHECK(t1.pairs[i].u2 == t4.pairs[i].u2);
  }
}

TEST_CASE("import_sam") {
  std::vector<UnitigRecord> unitigs{{0, std::string(100, 'A'), 100, 0.0},
                                    {1, std::string(100, 'C'), 100, 0.0},
                                    {2, std::string(100, 'G'), 100, 0.0},
                                    {3, std::string(100, 'T'), 100, 0.0}};

  SUBCASE("two-line pair") {
    std::istringstream sam(
        "@HD\tVN:1.6\n"
        "r1\t65\tu1\t10\t60\t50M\t=\t200\t0\t*\t*\n"
        "r1\t129\tu2\t60\t60\t50M\t=\t10\t0\t*\t*\n");
    auto table = import_sam(unitigs, sam);
    REQUIRE(table.pairs.size() == 1);
    CHECK(table.pairs[0].u1 == std::vector<uint32_t>{1});
    CHECK(table.pairs[0].u2 == std::vector<uint32_t>{2});
    CHECK(table.depth_sum[1] == 50);
    CHECK(table.depth_sum[2] == 41);  // clipped at the unitig end
  }

  SUBCASE("unmapped mate contributes an empty set") {
    std::istringstream sam(
        "r1\t69\t*\t0\t0\t*\t=\t0\t0\t*\t*\n"
        "r1\t129\tu0\t1\t60\t20M\t=\t0\t0\t*\t*\n");
    auto table = import_sam(unitigs, sam);
    REQUIRE(table.pairs.size() == 1);
    CHECK(table.pairs[0].u1.empty());
    CHECK(table.pairs[0].u2 == std::vector<uint32_t>{0});
  }

  SUBCASE("primary plus two secondaries form one U-set") {
    std::istringstream sam(
        "r1\t65\tu0\t1\t60\t30M\t=\t0\t0\t*\t*\n"
        "r1\t321\tu1\t1\t0\t30M\t=\t0\t0\t*\t*\n"
        "r1\t321\tu2\t1\t0\t30M\t=\t0\t0\t*\t*\n"
        "r1\t129\tu3\t1\t60\t30M\t=\t0\t0\t*\t*\n");
    auto table = import_sam(unitigs, sam);
    REQUIRE(table.pairs.size() == 1);
    CHECK(table.pairs[0].u1 == std::vector<uint32_t>{0, 1, 2});
    CHECK(table.pairs[0].u2 == std::vector<uint32_t>{3});
  }

  SUBCASE("CIGAR reference consumption") {
    std::istringstream sam("r1\t65\tu0\t1\t60\t10M2I5M3D5M10S\t=\t0\t0\t*\t*\n");
    auto table = import_sam(unitigs, sam);
    CHECK(table.depth_sum[0] == 10 + 5 + 3 + 5);
  }

  SUBCASE("malformed line reports the line number") {
    std::istringstream sam("@HD\tVN:1.6\nr1\t65\tu0\t1\t60\n");
    CHECK_THROWS_WITH_AS(import_sam(unitigs, sam),
                         doctest::Contains("SAM line 2"), ParseError);
  }

  SUBCASE("unknown reference is named") {
    std::istringstream sam("r1\t65\tu9\t1\t60\t10M\t=\t0\t0\t*\t*\n");
    CHECK_THROWS_WITH_AS(import_sam(unitigs, sam), doctest::Contains("u9"), ParseError);
  }
}
