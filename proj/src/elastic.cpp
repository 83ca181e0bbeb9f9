#include "flowsketch/elastic.hpp"

#include <stdexcept>

namespace flowsketch {

ElasticSketch::ElasticSketch(const ElasticConfig& config)
    : config_(config),
      family_(config.seed, kHeavyStages),
      cells_per_stage_(config.heavy_cells_per_stage),
      light_(config.light_cells, config.seed ^ 0xE1A571C0DE1A5ULL,
             config.light_counter_width) {
    if (config.heavy_cells_per_stage == 0)
        throw std::invalid_argument("ElasticSketch: heavy_cells_per_stage must be positive");
    if (!(config.lambda > 0))
        throw std::invalid_argument("ElasticSketch: lambda must be positive");
    heavy_.resize(cells_per_stage_ * kHeavyStages);
}

void ElasticSketch::update(const FlowKey& key) {
    OpCost op;

    struct Carried {
        FlowKey key;
        uint32_t count;
        bool flag;
    };
    Carried item{key, 1, false};
    bool carried = true;

    for (uint32_t stage = 1; stage <= kHeavyStages && carried; ++stage) {
        const size_t idx = (stage - 1) * cells_per_stage_ +
                           family_.bucket(stage, item.key, cells_per_stage_);
        ++op.hash_ops;
        HeavyCell& cell = heavy_[idx];
        ++op.mem_accesses;
        if (cell.empty()) {
            cell = HeavyCell{item.key, item.count, 0, item.flag};
            ++op.mem_accesses;
            ++occupied_heavy_;
            carried = false;
        } else if (cell.key == item.key) {
            cell.vote_pos += item.count;
            ++op.mem_accesses;
            carried = false;
        } else {
            cell.vote_neg += item.count;
            ++op.mem_accesses;
            if (double(cell.vote_neg) >= config_.lambda * double(cell.vote_pos)) {
                Carried evicted{cell.key, cell.vote_pos, cell.flag};
                cell = HeavyCell{item.key, item.count, 1, true};
                item = evicted;
            }
            // else the incoming item itself moves on to the next stage
        }
    }

    if (carried) {
        light_.update(item.key, item.count);
        ++op.hash_ops;
        op.mem_accesses += 2;
    }

    last_cost_ = op;
    cost_ += op;
}

uint64_t ElasticSketch::query(const FlowKey& key) const {
    for (uint32_t stage = 1; stage <= kHeavyStages; ++stage) {
        const size_t idx = (stage - 1) * cells_per_stage_ +
                           family_.bucket(stage, key, cells_per_stage_);
        const HeavyCell& cell = heavy_[idx];
        if (!cell.empty() && cell.key == key)
            return uint64_t(cell.vote_pos) + (cell.flag ? light_.query(key) : 0);
    }
    return light_.query(key);
}

std::vector<FlowRecord> ElasticSketch::export_records() const {
    std::vector<FlowRecord> out;
    out.reserve(occupied_heavy_);
    for (const HeavyCell& cell : heavy_) {
        if (cell.empty()) continue;
        uint64_t count = uint64_t(cell.vote_pos) + (cell.flag ? light_.query(cell.key) : 0);
        out.push_back(FlowRecord{cell.key, uint32_t(count)});
    }
    return out;
}

CardinalityEstimate ElasticSketch::estimate_cardinality() const {
    const size_t w = light_.cells();
    const size_t z = light_.zero_cells();
    if (z == w) return {double(occupied_heavy_), false};
    CardinalityEstimate lc = linear_counting(w, z);
    lc.value += double(occupied_heavy_);
    return lc;
}

}  // namespace flowsketch
