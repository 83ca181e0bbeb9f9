#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "flowsketch/flow_key.hpp"
#include "flowsketch/hash_family.hpp"

namespace flowsketch {

/// Plain bloom filter over FlowKeys; hash members are supplied by the
/// caller's family so bit positions stay reproducible per seed.
class BloomFilter {
public:
    BloomFilter(size_t bits, uint32_t hash_count, uint64_t seed)
        : family_(seed, hash_count),
          hash_count_(hash_count),
          bit_count_(bits),
          words_((bits + 63) / 64, 0) {
        if (bits == 0) throw std::invalid_argument("BloomFilter: bits must be positive");
    }

    bool contains(const FlowKey& key) const {
        for (uint32_t i = 1; i <= hash_count_; ++i)
            if (!test(family_.bucket(i, key, bit_count_))) return false;
        return true;
    }

    void insert(const FlowKey& key) {
        for (uint32_t i = 1; i <= hash_count_; ++i)
            set(family_.bucket(i, key, bit_count_));
    }

    size_t bit_count() const { return bit_count_; }
    uint32_t hash_count() const { return hash_count_; }

    // Split-phase access for callers that meter hash evaluations.
    uint64_t bit_position(uint32_t member, const FlowKey& key) const {
        return family_.bucket(member, key, bit_count_);
    }
    bool test_bit(uint64_t pos) const { return test(pos); }
    void set_bit(uint64_t pos) { set(pos); }

    size_t set_bits() const {
        size_t n = 0;
        for (uint64_t w : words_) n += size_t(__builtin_popcountll(w));
        return n;
    }
    size_t zero_bits() const { return bit_count_ - set_bits(); }

private:
    bool test(uint64_t pos) const { return (words_[pos >> 6] >> (pos & 63)) & 1; }
    void set(uint64_t pos) { words_[pos >> 6] |= uint64_t(1) << (pos & 63); }

    HashFamily family_;
    uint32_t hash_count_;
    size_t bit_count_;
    std::vector<uint64_t> words_;
};

}  // namespace flowsketch
