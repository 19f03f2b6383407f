#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "repgraph/dna.hpp"

namespace repgraph {

// Open-addressing set of packed k-mers (linear probing, power-of-two
// capacity). Slot order is a pure function of the key set, which keeps
// iteration deterministic across runs and platforms.
class KmerSet {
 public:
  static constexpr size_t npos = static_cast<size_t>(-1);

  explicit KmerSet(size_t expected = 1024) { rehash_for(expected); }

  size_t size() const { return size_; }
  size_t capacity() const { return keys_.size(); }

  bool insert(Kmer key) {
    if ((size_ + 1) * 10 > keys_.size() * 7) rehash_for(size_ * 2 + 16);
    size_t slot = probe(key);
    if (used_[slot]) return false;
    used_[slot] = 1;
    keys_[slot] = key;
    ++size_;
    return true;
  }

  bool contains(Kmer key) const { return used_[probe(key)]; }

  // Stable slot index of key, or npos.
  size_t find(Kmer key) const {
    size_t slot = probe(key);
    return used_[slot] ? slot : npos;
  }

  bool slot_used(size_t slot) const { return used_[slot] != 0; }
  Kmer slot_key(size_t slot) const { return keys_[slot]; }

 private:
  size_t probe(Kmer key) const {
    size_t mask = keys_.size() - 1;
    size_t slot = kmer_hash(key) & mask;
    while (used_[slot] && keys_[slot] != key) slot = (slot + 1) & mask;
    return slot;
  }

  void rehash_for(size_t expected) {
    size_t cap = 16;
    while (cap * 7 < expected * 10) cap <<= 1;
    if (cap <= keys_.size()) return;
    std::vector<Kmer> old_keys = std::move(keys_);
    std::vector<uint8_t> old_used = std::move(used_);
    keys_.assign(cap, 0);
    used_.assign(cap, 0);
    size_ = 0;
    for (size_t i = 0; i < old_keys.size(); ++i)
      if (old_used[i]) insert(old_keys[i]);
  }

  std::vector<Kmer> keys_;
  std::vector<uint8_t> used_;
  size_t size_ = 0;
};

}  // namespace repgraph
