#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "flowsketch/flow_key.hpp"
#include "flowsketch/hash_family.hpp"

namespace flowsketch {

/// Single count-min row: one hash member, saturating counters.
class CountMinRow {
public:
    CountMinRow(size_t cells, uint64_t seed, uint32_t counter_width = 32)
        : family_(seed, 1),
          counter_max_(counter_width >= 32 ? std::numeric_limits<uint32_t>::max()
                                           : (1u << counter_width) - 1),
          counters_(cells, 0) {
        if (cells == 0) throw std::invalid_argument("CountMinRow: cells must be positive");
    }

    void update(const FlowKey& key, uint32_t amount = 1) {
        uint32_t& c = counters_[family_.bucket(1, key, counters_.size())];
        c = (c > counter_max_ - amount) ? counter_max_ : c + amount;
    }

    uint32_t query(const FlowKey& key) const {
        return counters_[family_.bucket(1, key, counters_.size())];
    }

    size_t cells() const { return counters_.size(); }
    size_t zero_cells() const {
        size_t n = 0;
        for (uint32_t c : counters_) n += (c == 0);
        return n;
    }

private:
    HashFamily family_;
    uint32_t counter_max_;
    std::vector<uint32_t> counters_;
};

}  // namespace flowsketch
