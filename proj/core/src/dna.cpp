#include "repgraph/dna.hpp"

#include <cassert>

namespace repgraph {

std::string reverse_complement(std::string_view s) {
  std::string out(s.size(), '\0');
  for (size_t i = 0; i < s.size(); ++i) {
    uint8_t code = base_code(s[s.size() - 1 - i]);
    assert(code != 0xff);
    out[i] = code_base(code ^ 3);
  }
  return out;
}

Kmer encode_kmer(std::string_view s, size_t pos, int k) {
  assert(k >= 1 && k <= kMaxK && pos + static_cast<size_t>(k) <= s.size());
  Kmer km = 0;
  for (int i = 0; i < k; ++i) {
    uint8_t code = base_code(s[pos + i]);
    assert(code != 0xff);
    km = (km << 2) | code;
  }
  return km;
}

std::string decode_kmer(Kmer km, int k) {
  std::string out(k, '\0');
  for (int i = k - 1; i >= 0; --i) {
    out[i] = code_base(static_cast<uint8_t>(km & 3));
    km >>= 2;
  }
  return out;
}

Kmer kmer_revcomp(Kmer km, int k) {
  Kmer rc = 0;
  for (int i = 0; i < k; ++i) {
    rc = (rc << 2) | ((km & 3) ^ 3);
    km >>= 2;
  }
  return rc;
}

}  // namespace repgraph
