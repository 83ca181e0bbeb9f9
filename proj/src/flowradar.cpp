#include "flowsketch/flowradar.hpp"

#include <array>
#include <stdexcept>

namespace flowsketch {

FlowRadarSketch::FlowRadarSketch(const FlowRadarConfig& config)
    : family_(config.seed, kCellHashes),
      bloom_(config.bloom_bits ? config.bloom_bits : 40 * config.counting_cells,
             kBloomHashes, config.seed ^ 0xB100FBA5ULL),
      cells_(config.counting_cells) {
    if (config.counting_cells == 0)
        throw std::invalid_argument("FlowRadar: counting_cells must be positive");
}

void FlowRadarSketch::update(const FlowKey& key) {
    OpCost op;

    std::array<uint64_t, kBloomHashes> bits;
    bool is_new = false;
    for (uint32_t i = 0; i < kBloomHashes; ++i) {
        bits[i] = bloom_.bit_position(i + 1, key);
        ++op.hash_ops;
        ++op.mem_accesses;
        if (!bloom_.test_bit(bits[i])) is_new = true;
    }
    if (is_new) {
        for (uint64_t pos : bits) {
            bloom_.set_bit(pos);
            ++op.mem_accesses;
        }
    }

    for (uint32_t i = 1; i <= kCellHashes; ++i) {
        CountingCell& cell = cells_[family_.bucket(i, key, cells_.size())];
        ++op.hash_ops;
        op.mem_accesses += 2;
        if (is_new) {
            cell.flow_xor ^= key;
            ++cell.flow_count;
        }
        ++cell.packet_count;
    }

    last_cost_ = op;
    cost_ += op;
}

FlowRadarSketch::DecodeResult FlowRadarSketch::decode() const {
    std::vector<CountingCell> cells = cells_;
    DecodeResult result;

    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].flow_count != 1) continue;
            const FlowKey key = cells[i].flow_xor;
            const uint32_t count = cells[i].packet_count;
            result.records.push_back(FlowRecord{key, count});
            for (uint32_t h = 1; h <= kCellHashes; ++h) {
                CountingCell& cell = cells[family_.bucket(h, key, cells.size())];
                cell.flow_xor ^= key;
                --cell.flow_count;
                cell.packet_count -= count;
            }
            progress = true;
        }
    }

    result.fully_decoded = true;
    for (const CountingCell& cell : cells)
        if (cell.flow_count != 0) {
            result.fully_decoded = false;
            break;
        }
    return result;
}

CardinalityEstimate FlowRadarSketch::estimate_cardinality() const {
    const size_t w = bloom_.bit_count();
    const size_t z = bloom_.zero_bits();
    if (z == 0) {
        CardinalityEstimate lc = linear_counting(w, 0);
        lc.value /= double(kBloomHashes);
        return lc;
    }
    CardinalityEstimate lc = linear_counting(w, z);
    lc.value = std::round(lc.value / double(kBloomHashes));
    return lc;
}

}  // namespace flowsketch
