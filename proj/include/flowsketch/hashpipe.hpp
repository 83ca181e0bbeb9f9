#pragma once

#include <cstdint>
#include <vector>

#include "flowsketch/flow_key.hpp"
#include "flowsketch/hash_family.hpp"
#include "flowsketch/op_cost.hpp"

namespace flowsketch {

/// Pipeline of equal-size record tables with always-evict admission in the
/// first stage and smaller-count eviction in the rest. A flow may end up
/// split across several stages.
class HashPipeSketch {
public:
    static constexpr uint32_t kStages = 4;

    HashPipeSketch(size_t cells_per_stage, uint64_t seed);

    void update(const FlowKey& key);

    /// Sum of this key's fragments across all stages; 0 if absent.
    uint64_t query(const FlowKey& key) const;

    std::vector<FlowRecord> export_records() const;
    size_t record_count() const { return record_count_; }
    uint64_t discarded_records() const { return discards_; }
    size_t cells_per_stage() const { return cells_per_stage_; }

    const OpCost& cost() const { return cost_; }
    OpCost last_cost() const { return last_cost_; }

private:
    HashFamily family_;
    size_t cells_per_stage_;
    std::vector<FlowRecord> cells_;  // kStages contiguous stages
    size_t record_count_ = 0;
    uint64_t discards_ = 0;
    OpCost cost_;
    OpCost last_cost_;
};

}  // namespace flowsketch
