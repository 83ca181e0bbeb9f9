#pragma once

#include <cstdint>
#include <vector>

#include "flowsketch/bloom_filter.hpp"
#include "flowsketch/flow_key.hpp"
#include "flowsketch/hash_family.hpp"
#include "flowsketch/linear_counting.hpp"
#include "flowsketch/op_cost.hpp"

namespace flowsketch {

struct FlowRadarConfig {
    size_t counting_cells = 0;
    size_t bloom_bits = 0;  // 0 -> 40 * counting_cells
    uint64_t seed = 1;
};

/// Coded flowset: bloom filter for new-flow detection plus a counting table
/// whose cells hold the XOR of inserted flow IDs, decodable by peeling.
class FlowRadarSketch {
public:
    static constexpr uint32_t kBloomHashes = 4;
    static constexpr uint32_t kCellHashes = 3;

    struct CountingCell {
        FlowKey flow_xor;
        uint32_t flow_count = 0;
        uint32_t packet_count = 0;
    };

    struct DecodeResult {
        std::vector<FlowRecord> records;
        bool fully_decoded = false;
    };

    explicit FlowRadarSketch(const FlowRadarConfig& config);

    void update(const FlowKey& key);

    /// Iterative peeling over a copy of the counting table.
    DecodeResult decode() const;

    /// Linear counting over the bloom bit array, divided by the number of
    /// bits one flow sets.
    CardinalityEstimate estimate_cardinality() const;

    const CountingCell& cell(size_t idx) const { return cells_[idx]; }
    size_t counting_cells() const { return cells_.size(); }
    const BloomFilter& bloom() const { return bloom_; }

    const OpCost& cost() const { return cost_; }
    OpCost last_cost() const { return last_cost_; }

private:
    HashFamily family_;
    BloomFilter bloom_;
    std::vector<CountingCell> cells_;
    OpCost cost_;
    OpCost last_cost_;
};

}  // namespace flowsketch
