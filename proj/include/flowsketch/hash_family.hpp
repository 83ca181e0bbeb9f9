#pragma once

#include <cstdint>
#include <stdexcept>

#include "flowsketch/flow_key.hpp"

namespace flowsketch {

namespace detail {

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace detail

/// A seeded family of independent hash functions over FlowKeys.
/// Member indices are 1-based; by convention members 1..d serve as the
/// table probes h_1..h_d and member d+1 as the ancillary hash g_1.
class HashFamily {
public:
    HashFamily(uint64_t seed, uint32_t member_count)
        : seed_(seed), member_count_(member_count) {
        if (member_count == 0)
            throw std::invalid_argument("HashFamily: member_count must be positive");
    }

    uint64_t seed() const { return seed_; }
    uint32_t member_count() const { return member_count_; }

    /// Full 64-bit output of one member.
    uint64_t raw(uint32_t member, const FlowKey& key) const {
        check_member(member);
        const auto b = key.to_bytes();
        uint64_t w0 = 0, w1 = 0;
        for (int i = 0; i < 8; ++i) w0 = (w0 << 8) | b[i];
        for (int i = 8; i < 13; ++i) w1 = (w1 << 8) | b[i];
        uint64_t h = detail::mix64(seed_ ^ (uint64_t(member) * 0x9E3779B97F4A7C15ULL));
        h = detail::mix64(h ^ w0);
        h = detail::mix64(h ^ (w1 + 0x9E3779B97F4A7C15ULL));
        return h;
    }

    /// Bucket index in [0, range) via multiply-shift range reduction.
    uint64_t bucket(uint32_t member, const FlowKey& key, uint64_t range) const {
        if (range == 0)
            throw std::invalid_argument("HashFamily: range must be positive");
        return reduce(raw(member, key), range);
    }

    static uint64_t reduce(uint64_t hash, uint64_t range) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(hash) * range) >> 64);
    }

    /// h_1(key) mod 2^width, width in [1, 32].
    uint32_t digest(const FlowKey& key, uint32_t width = 8) const {
        return digest_from_raw(raw(1, key), width);
    }

    static uint32_t digest_from_raw(uint64_t h1, uint32_t width) {
        if (width < 1 || width > 32)
            throw std::invalid_argument("digest width must be in [1, 32]");
        const uint64_t mask = (width == 64) ? ~0ULL : ((1ULL << width) - 1);
        return static_cast<uint32_t>(h1 & mask);
    }

private:
    void check_member(uint32_t member) const {
        if (member < 1 || member > member_count_)
            throw std::out_of_range("HashFamily: member index out of bounds");
    }

    uint64_t seed_;
    uint32_t member_count_;
};

}  // namespace flowsketch
