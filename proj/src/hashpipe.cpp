#include "flowsketch/hashpipe.hpp"

#include <stdexcept>
#include <utility>

namespace flowsketch {

HashPipeSketch::HashPipeSketch(size_t cells_per_stage, uint64_t seed)
    : family_(seed, kStages), cells_per_stage_(cells_per_stage) {
    if (cells_per_stage == 0)
        throw std::invalid_argument("HashPipe: cells_per_stage must be positive");
    cells_.resize(cells_per_stage * kStages);
}

void HashPipeSketch::update(const FlowKey& key) {
    OpCost op;

    // Stage 1: match or unconditional eviction.
    size_t idx = family_.bucket(1, key, cells_per_stage_);
    ++op.hash_ops;
    FlowRecord* cell = &cells_[idx];
    ++op.mem_accesses;
    FlowRecord carry;
    if (cell->empty()) {
        *cell = FlowRecord{key, 1};
        ++op.mem_accesses;
        ++record_count_;
    } else if (cell->key == key) {
        ++cell->count;
        ++op.mem_accesses;
    } else {
        carry = std::exchange(*cell, FlowRecord{key, 1});
        ++op.mem_accesses;
    }

    for (uint32_t stage = 2; stage <= kStages && !carry.empty(); ++stage) {
        idx = (stage - 1) * cells_per_stage_ +
              family_.bucket(stage, carry.key, cells_per_stage_);
        ++op.hash_ops;
        cell = &cells_[idx];
        ++op.mem_accesses;
        if (cell->empty()) {
            *cell = carry;
            ++op.mem_accesses;
            ++record_count_;
            carry = FlowRecord{};
        } else if (cell->key == carry.key) {
            cell->count += carry.count;
            ++op.mem_accesses;
            carry = FlowRecord{};
        } else if (cell->count < carry.count) {
            // Ties keep the resident.
            std::swap(*cell, carry);
            ++op.mem_accesses;
        }
    }
    if (!carry.empty()) ++discards_;

    last_cost_ = op;
    cost_ += op;
}

uint64_t HashPipeSketch::query(const FlowKey& key) const {
    uint64_t total = 0;
    for (uint32_t stage = 1; stage <= kStages; ++stage) {
        const size_t idx = (stage - 1) * cells_per_stage_ +
                           family_.bucket(stage, key, cells_per_stage_);
        const FlowRecord& cell = cells_[idx];
        if (!cell.empty() && cell.key == key) total += cell.count;
    }
    return total;
}

std::vector<FlowRecord> HashPipeSketch::export_records() const {
    std::vector<FlowRecord> out;
    out.reserve(record_count_);
    for (const FlowRecord& cell : cells_)
        if (!cell.empty()) out.push_back(cell);
    return out;
}

}  // namespace flowsketch
