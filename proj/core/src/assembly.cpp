#include "repgraph/assembly.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "repgraph/dna.hpp"
#include "repgraph/errors.hpp"
#include "repgraph/io.hpp"
#include "repgraph/kmer_set.hpp"
#include "repgraph/parallel.hpp"

namespace repgraph {

namespace {

// Oriented-kmer adjacency over a frozen canonical k-mer set.
struct DbgView {
  const KmerSet& set;
  int k;

  int fwd_extensions(Kmer x, Kmer* unique_succ) const {
    int n = 0;
    for (uint8_t c = 0; c < 4; ++c) {
      Kmer cand = kmer_roll(x, c, k);
      if (set.contains(kmer_canonical(cand, k))) {
        ++n;
        *unique_succ = cand;
      }
    }
    return n;
  }

  int bwd_extensions(Kmer x) const {
    int n = 0;
    Kmer suffix = x >> 2;
    for (uint8_t c = 0; c < 4; ++c) {
      Kmer cand = (Kmer(c) << (2 * (k - 1))) | suffix;
      if (set.contains(kmer_canonical(cand, k))) ++n;
    }
    return n;
  }
};

// Extends x forward while the path stays non-branching, appending spelled
// bases and marking consumed k-mers.
std::string walk(const DbgView& dbg, Kmer x, std::vector<uint8_t>& visited) {
  std::string bases;
  for (;;) {
    Kmer y = 0;
    if (dbg.fwd_extensions(x, &y) != 1) break;
    if (dbg.bwd_extensions(y) != 1) break;
    if (y == kmer_revcomp(y, dbg.k)) break;  // palindromic junction (even k)
    size_t slot = dbg.set.find(kmer_canonical(y, dbg.k));
    if (visited[slot]) break;  // other unitig, or cycle closing on itself
    visited[slot] = 1;
    bases.push_back(code_base(static_cast<uint8_t>(y & 3)));
    x = y;
  }
  return bases;
}

uint32_t parse_u32(const std::string& s, const char* what, size_t line_no) {
  uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("SAM line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  return value;
}

}  // namespace

std::vector<UnitigRecord> build_unitigs(const std::vector<ReadPair>& reads, int k) {
  if (k < 2) throw InputError("build_unitigs: k must be >= 2");
  if (k > kMaxK) throw InputError("build_unitigs: k must be <= " + std::to_string(kMaxK));
  if (reads.empty()) return {};

  size_t total_bases = 0;
  for (const auto& pair : reads) {
    if (pair.fwd.size() < static_cast<size_t>(k) || pair.rev.size() < static_cast<size_t>(k))
      throw InputError("build_unitigs: k exceeds read length for read '" + pair.id + "'");
    total_bases += pair.fwd.size() + pair.rev.size();
  }

  KmerSet set(total_bases / 2);
  auto add_mate = [&](const std::string& seq) {
    Kmer km = encode_kmer(seq, 0, k);
    set.insert(kmer_canonical(km, k));
    for (size_t i = static_cast<size_t>(k); i < seq.size(); ++i) {
      km = kmer_roll(km, base_code(seq[i]), k);
      set.insert(kmer_canonical(km, k));
    }
  };
  for (const auto& pair : reads) {
    add_mate(pair.fwd);
    add_mate(pair.rev);
  }

  DbgView dbg{set, k};
  std::vector<uint8_t> visited(set.capacity(), 0);
  std::vector<std::string> sequences;
  for (size_t slot = 0; slot < set.capacity(); ++slot) {
    if (!set.slot_used(slot) || visited[slot]) continue;
    visited[slot] = 1;
    Kmer km = set.slot_key(slot);
    std::string seq = decode_kmer(km, k);
    if (km != kmer_revcomp(km, k)) {
      std::string right = walk(dbg, km, visited);
      std::string left = walk(dbg, kmer_revcomp(km, k), visited);
      seq = reverse_complement(left) + seq + right;
    }
    std::string rc = reverse_complement(seq);
    sequences.push_back(rc < seq ? std::move(rc) : std::move(seq));
  }

  std::sort(sequences.begin(), sequences.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });

  std::vector<UnitigRecord> unitigs(sequences.size());
  for (size_t i = 0; i < sequences.size(); ++i) {
    unitigs[i].id = static_cast<uint32_t>(i);
    unitigs[i].length = sequences[i].size();
    unitigs[i].sequence = std::move(sequences[i]);
  }
  return unitigs;
}

MappingTable map_read_prefixes(const std::vector<ReadPair>& reads,
                               const std::vector<UnitigRecord>& unitigs, int k,
                               unsigned n_threads) {
  if (k < 2 || k > kMaxK) throw InputError("map_read_prefixes: bad k");

  // One entry per k-mer window; duplicates across/within unitigs are kept so
  // every match site contributes depth.
  std::vector<std::pair<Kmer, uint32_t>> index;
  size_t n_windows = 0;
  for (const auto& u : unitigs)
    if (u.length >= static_cast<uint64_t>(k)) n_windows += u.length - k + 1;
  index.reserve(n_windows);
  for (const auto& u : unitigs) {
    if (u.length < static_cast<uint64_t>(k)) continue;
    Kmer km = encode_kmer(u.sequence, 0, k);
    index.emplace_back(kmer_canonical(km, k), u.id);
    for (size_t i = static_cast<size_t>(k); i < u.sequence.size(); ++i) {
      km = kmer_roll(km, base_code(u.sequence[i]), k);
      index.emplace_back(kmer_canonical(km, k), u.id);
    }
  }
  std::sort(index.begin(), index.end());

  MappingTable table;
  table.n_unitigs = static_cast<uint32_t>(unitigs.size());
  table.pairs.resize(reads.size());
  table.depth_sum.assign(unitigs.size(), 0);

  std::vector<std::vector<uint64_t>> shard_depth(kShards);
  auto map_mate = [&](const std::string& seq, std::vector<uint32_t>& out,
                      std::vector<uint64_t>& depth) {
    if (seq.size() < static_cast<size_t>(k)) return;  // unmapped
    Kmer key = kmer_canonical(encode_kmer(seq, 0, k), k);
    auto [lo, hi] = std::equal_range(index.begin(), index.end(),
                                     std::make_pair(key, uint32_t(0)),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = lo; it != hi; ++it) {
      depth[it->second] += static_cast<uint64_t>(k);
      if (out.empty() || out.back() != it->second) out.push_back(it->second);
    }
    // Index is key-sorted, so per-key unitig ids arrive sorted: dedupe is the
    // adjacent check above plus this fallback for safety.
    out.erase(std::unique(out.begin(), out.end()), out.end());
  };

  run_sharded(kShards, n_threads, [&](size_t shard) {
    auto& depth = shard_depth[shard];
    depth.assign(unitigs.size(), 0);
    for (size_t i = shard; i < reads.size(); i += kShards) {
      map_mate(reads[i].fwd, table.pairs[i].u1, depth);
      map_mate(reads[i].rev, table.pairs[i].u2, depth);
    }
  });
  for (size_t shard = 0; shard < kShards; ++shard)
    for (size_t u = 0; u < table.depth_sum.size() && u < shard_depth[shard].size(); ++u)
      table.depth_sum[u] += shard_depth[shard][u];
  return table;
}

void finalize_coverage(std::vector<UnitigRecord>& unitigs, const MappingTable& table) {
  if (table.depth_sum.size() != unitigs.size())
    throw InputError("finalize_coverage: mapping table does not match unitig count");
  for (auto& u : unitigs)
    u.mean_coverage = u.length == 0 ? 0.0
                                    : static_cast<double>(table.depth_sum[u.id]) /
                                          static_cast<double>(u.length);
}

MappingTable import_sam(const std::vector<UnitigRecord>& unitigs, std::istream& sam) {
  std::unordered_map<std::string, uint32_t> name_to_id;
  for (const auto& u : unitigs) {
    name_to_id["u" + std::to_string(u.id)] = u.id;
    name_to_id[std::to_string(u.id)] = u.id;
  }

  MappingTable table;
  table.n_unitigs = static_cast<uint32_t>(unitigs.size());
  table.depth_sum.assign(unitigs.size(), 0);
  std::unordered_map<std::string, size_t> pair_index;

  std::string line;
  size_t line_no = 0;
  while (std::getline(sam, line)) {
    ++line_no;
    if (line.empty() || line[0] == '@') continue;
    auto fields = split_tsv(line);
    if (fields.size() < 11)
      throw ParseError("SAM line " + std::to_string(line_no) + ": expected 11 fields, got " +
                       std::to_string(fields.size()));
    const std::string& qname = fields[0];
    uint32_t flag = parse_u32(fields[1], "FLAG", line_no);
    if (!(flag & 0x1))
      throw ParseError("SAM line " + std::to_string(line_no) + ": record is not paired");
    bool first = flag & 0x40, second = flag & 0x80;
    if (first == second)
      throw ParseError("SAM line " + std::to_string(line_no) +
                       ": exactly one of the mate flags 0x40/0x80 must be set");

    auto [it, inserted] = pair_index.try_emplace(qname, table.pairs.size());
    if (inserted) table.pairs.emplace_back();
    PairMapping& pm = table.pairs[it->second];

    if (flag & 0x4) continue;  // unmapped mate: empty contribution

    auto ref = name_to_id.find(fields[2]);
    if (ref == name_to_id.end())
      throw ParseError("SAM line " + std::to_string(line_no) + ": unknown reference '" +
                       fields[2] + "'");
    uint32_t id = ref->second;
    uint32_t pos = parse_u32(fields[3], "POS", line_no);
    if (pos == 0)
      throw ParseError("SAM line " + std::to_string(line_no) + ": POS must be 1-based");

    const std::string& cigar = fields[5];
    uint64_t ref_span = 0;
    size_t i = 0;
    if (cigar == "*")
      throw ParseError("SAM line " + std::to_string(line_no) + ": mapped record lacks CIGAR");
    while (i < cigar.size()) {
      size_t j = i;
      while (j < cigar.size() && std::isdigit(static_cast<unsigned char>(cigar[j]))) ++j;
      if (j == i || j == cigar.size())
        throw ParseError("SAM line " + std::to_string(line_no) + ": malformed CIGAR '" +
                         cigar + "'");
      uint64_t n = std::stoull(cigar.substr(i, j - i));
      char op = cigar[j];
      switch (op) {
        case 'M': case 'D': case 'N': case '=': case 'X': ref_span += n; break;
        case 'I': case 'S': case 'H': case 'P': break;
        default:
          throw ParseError("SAM line " + std::to_string(line_no) + ": unknown CIGAR op '" +
                           std::string(1, op) + "'");
      }
      i = j + 1;
    }

    uint64_t begin = pos - 1;
    uint64_t end = std::min<uint64_t>(begin + ref_span, unitigs[id].length);
    if (begin < end) table.depth_sum[id] += end - begin;

    auto& uset = first ? pm.u1 : pm.u2;
    if (std::find(uset.begin(), uset.end(), id) == uset.end()) uset.push_back(id);
  }
  for (auto& pm : table.pairs) {
    std::sort(pm.u1.begin(), pm.u1.end());
    std::sort(pm.u2.begin(), pm.u2.end());
  }
  return table;
}

void write_unitigs_fasta(const std::filesystem::path& path,
                         const std::vector<UnitigRecord>& unitigs) {
  std::vector<FastaRecord> records;
  records.reserve(unitigs.size());
  for (const auto& u : unitigs) records.push_back({"u" + std::to_string(u.id), u.sequence});
  write_fasta(path, records);
}

void write_unitig_table(const std::filesystem::path& path,
                        const std::vector<UnitigRecord>& unitigs) {
  std::ostringstream out;
  out << "id\tlength\tmean_coverage\n";
  char buf[64];
  for (const auto& u : unitigs) {
    std::snprintf(buf, sizeof buf, "%.10g", u.mean_coverage);
    out << u.id << '\t' << u.length << '\t' << buf << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<UnitigRecord> read_unitigs_fasta(const std::filesystem::path& path) {
  auto records = read_fasta(path);
  std::vector<UnitigRecord> unitigs(records.size());
  for (auto& r : records) {
    if (r.id.empty() || r.id[0] != 'u')
      throw ParseError(path.string() + ": unitig id '" + r.id + "' must look like u<N>");
    uint32_t id = parse_u32(r.id.substr(1), "unitig id", 0);
    if (id >= unitigs.size() || !unitigs[id].sequence.empty())
      throw ParseError(path.string() + ": unitig ids must be dense and unique");
    unitigs[id] = {id, std::move(r.sequence), 0, 0.0};
    unitigs[id].length = unitigs[id].sequence.size();
  }
  return unitigs;
}

std::vector<UnitigRecord> read_unitig_table(const std::filesystem::path& path,
                                            std::vector<UnitigRecord> unitigs) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tsv(line);
    if (fields.size() != 3) throw ParseError(path.string() + ": expected 3 columns");
    uint32_t id = parse_u32(fields[0], "id", 0);
    if (id >= unitigs.size()) throw ParseError(path.string() + ": unknown unitig id");
    uint64_t length = std::stoull(fields[1]);
    if (!unitigs[id].sequence.empty() && unitigs[id].length != length)
      throw ParseError(path.string() + ": length mismatch for unitig " + fields[0]);
    unitigs[id].length = length;
    unitigs[id].mean_coverage = std::stod(fields[2]);
    ++rows;
  }
  if (rows != unitigs.size())
    throw ParseError(path.string() + ": table rows do not cover all unitigs");
  return unitigs;
}

void write_mapping(const std::filesystem::path& dir, const MappingTable& table) {
  ensure_directory(dir);
  std::ostringstream map_out;
  map_out << "pair\tu1\tu2\n";
  auto join = [](const std::vector<uint32_t>& v) {
    if (v.empty()) return std::string("-");
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s;
  };
  for (size_t i = 0; i < table.pairs.size(); ++i)
    map_out << i << '\t' << join(table.pairs[i].u1) << '\t' << join(table.pairs[i].u2) << '\n';
  write_text_file(dir / "mapping.tsv", map_out.str());

  std::ostringstream depth_out;
  depth_out << "unitig_id\tdepth_sum\n";
  for (size_t u = 0; u < table.depth_sum.size(); ++u)
    depth_out << u << '\t' << table.depth_sum[u] << '\n';
  write_text_file(dir / "depth.tsv", depth_out.str());
}

MappingTable read_mapping(const std::filesystem::path& dir) {
  MappingTable table;
  auto parse_set = [](const std::string& s) {
    std::vector<uint32_t> v;
    if (s == "-" || s.empty()) return v;
    size_t start = 0;
    while (start <= s.size()) {
      size_t comma = s.find(',', start);
      std::string tok = s.substr(start, comma == std::string::npos ? comma : comma - start);
      v.push_back(parse_u32(tok, "unitig id", 0));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return v;
  };

  {
    std::ifstream in(dir / "mapping.tsv");
    if (!in) throw InputError("cannot open " + (dir / "mapping.tsv").string());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto fields = split_tsv(line);
      if (fields.size() != 3)
        throw ParseError((dir / "mapping.tsv").string() + ": expected 3 columns");
      table.pairs.push_back({parse_set(fields[1]), parse_set(fields[2])});
    }
  }
  {
    std::ifstream in(dir / "depth.tsv");
    if (!in) throw InputError("cannot open " + (dir / "depth.tsv").string());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto fields = split_tsv(line);
      if (fields.size() != 2)
        throw ParseError((dir / "depth.tsv").string() + ": expected 2 columns");
      table.depth_sum.push_back(std::stoull(fields[1]));
    }
  }
  table.n_unitigs = static_cast<uint32_t>(table.depth_sum.size());
  return table;
}

}  // namespace repgraph
