#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace repgraph {

// Packed 2-bit k-mer, k <= 63. The high bits are zero; base at the
// lowest offset is the 3'-most (last) base of the k-mer.
using Kmer = unsigned __int128;

inline constexpr int kMaxK = 63;

// A=0 C=1 G=2 T=3; 0xff for anything else.
inline constexpr uint8_t base_code(char c) {
  switch (c) {
    case 'A': case 'a': return 0;
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    default: return 0xff;
  }
}

inline constexpr char code_base(uint8_t code) { return "ACGT"[code & 3]; }

inline bool valid_dna(std::string_view s) {
  for (char c : s)
    if (base_code(c) == 0xff) return false;
  return !s.empty();
}

std::string reverse_complement(std::string_view s);

// Encodes s[pos, pos+k); caller guarantees bounds and ACGT content.
Kmer encode_kmer(std::string_view s, size_t pos, int k);
std::string decode_kmer(Kmer km, int k);

Kmer kmer_revcomp(Kmer km, int k);

inline Kmer kmer_canonical(Kmer km, int k) {
  Kmer rc = kmer_revcomp(km, k);
  return rc < km ? rc : km;
}

// Rolls the window one base to the right: drops the leftmost base, appends c.
inline Kmer kmer_roll(Kmer km, uint8_t code, int k) {
  Kmer mask = (Kmer(1) << (2 * k)) - 1;
  return ((km << 2) | code) & mask;
}

// SplitMix64-style mix, used for hashing and seed derivation.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t kmer_hash(Kmer km) {
  uint64_t lo = static_cast<uint64_t>(km);
  uint64_t hi = static_cast<uint64_t>(km >> 64);
  return mix64(lo ^ mix64(hi));
}

}  // namespace repgraph
