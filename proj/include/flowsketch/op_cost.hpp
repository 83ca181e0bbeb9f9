#pragma once

#include <cstdint>

namespace flowsketch {

/// Software counters standing in for dataplane cost: one hash_ops unit per
/// hash function evaluated, one mem_accesses unit per bucket/cell read or
/// write (a read-modify-write of one cell counts 2).
struct OpCost {
    uint64_t hash_ops = 0;
    uint64_t mem_accesses = 0;

    OpCost& operator+=(const OpCost& o) {
        hash_ops += o.hash_ops;
        mem_accesses += o.mem_accesses;
        return *this;
    }
    OpCost operator-(const OpCost& o) const {
        return {hash_ops - o.hash_ops, mem_accesses - o.mem_accesses};
    }
    bool operator==(const OpCost&) const = default;
};

}  // namespace flowsketch
