#pragma once

#include <cstdint>
#include <vector>

#include "flowsketch/countmin.hpp"
#include "flowsketch/flow_key.hpp"
#include "flowsketch/hash_family.hpp"
#include "flowsketch/linear_counting.hpp"
#include "flowsketch/op_cost.hpp"

namespace flowsketch {

struct ElasticConfig {
    size_t heavy_cells_per_stage = 0;
    size_t light_cells = 0;
    double lambda = 8.0;  // vote-/vote+ eviction threshold
    uint32_t light_counter_width = 8;
    uint64_t seed = 1;
};

/// Hardware-version ElasticSketch: three heavy sub-tables with vote-based
/// eviction, spilling into a one-row count-min light part.
class ElasticSketch {
public:
    static constexpr uint32_t kHeavyStages = 3;

    struct HeavyCell {
        FlowKey key;
        uint32_t vote_pos = 0;
        uint32_t vote_neg = 0;
        bool flag = false;  // record was installed by eviction; light part may hold a share

        bool empty() const { return vote_pos == 0; }
    };

    explicit ElasticSketch(const ElasticConfig& config);

    void update(const FlowKey& key);
    uint64_t query(const FlowKey& key) const;

    /// Heavy-part records only; light-part flows have no stored ID.
    std::vector<FlowRecord> export_records() const;

    CardinalityEstimate estimate_cardinality() const;

    size_t occupied_heavy_cells() const { return occupied_heavy_; }
    const CountMinRow& light() const { return light_; }
    const HeavyCell& heavy_cell(uint32_t stage, size_t idx) const {
        return heavy_[(stage - 1) * cells_per_stage_ + idx];
    }
    size_t cells_per_stage() const { return cells_per_stage_; }

    const OpCost& cost() const { return cost_; }
    OpCost last_cost() const { return last_cost_; }

private:
    ElasticConfig config_;
    HashFamily family_;
    size_t cells_per_stage_;
    std::vector<HeavyCell> heavy_;
    CountMinRow light_;
    size_t occupied_heavy_ = 0;
    OpCost cost_;
    OpCost last_cost_;
};

}  // namespace flowsketch
