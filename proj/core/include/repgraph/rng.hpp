#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "repgraph/dna.hpp"

namespace repgraph {

// mt19937_64 with portable bounded/real draws. std::mt19937_64 output is
// fixed by the standard; the distributions below avoid the
// implementation-defined std::uniform_* so runs reproduce across stdlibs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  uint64_t bounded(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t threshold = (~uint64_t(0) - n + 1) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * real01(); }

  bool bernoulli(double p) { return real01() < p; }

 private:
  std::mt19937_64 gen_;
};

// Decorrelated child seed for a named substream.
inline uint64_t derive_seed(uint64_t seed, std::string_view stream) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : stream) h = (h ^ static_cast<uint8_t>(c)) * 0x100000001b3ULL;
  return mix64(seed ^ h);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return mix64(seed + 0x632be59bd9b4e019ULL * (index + 1));
}

}  // namespace repgraph
