#include "flowsketch/hashflow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace flowsketch {

std::vector<size_t> HashFlowSketch::pipelined_stage_sizes(size_t n, int depth,
                                                          double alpha) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    if (n < size_t(depth)) throw std::invalid_argument("need at least one bucket per stage");
    if (depth == 1) return {n};
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0, 1)");

    const double n1 = (1.0 - alpha) / (1.0 - std::pow(alpha, depth)) * double(n);
    std::vector<size_t> sizes(depth);
    size_t floor_sum = 0;
    for (int k = 0; k < depth; ++k)
        floor_sum += size_t(std::floor(std::pow(alpha, k) * n1));
    sizes[0] = size_t(std::floor(n1)) + (n - floor_sum);
    size_t assigned = sizes[0];
    for (int k = 1; k < depth - 1; ++k) {
        sizes[k] = size_t(std::floor(alpha * double(sizes[k - 1])));
        assigned += sizes[k];
    }
    sizes[depth - 1] = n - assigned;
    for (size_t s : sizes)
        if (s == 0) throw std::invalid_argument("stage size underflow; increase n");
    return sizes;
}

HashFlowSketch::HashFlowSketch(const HashFlowConfig& config)
    : config_(config),
      family_(config.seed, uint32_t(config.depth) + 1),
      counter_max_(config.counter_width >= 32
                       ? std::numeric_limits<uint32_t>::max()
                       : (1u << config.counter_width) - 1) {
    if (config.depth < 1 || config.main_buckets < size_t(config.depth))
        throw std::invalid_argument("HashFlow: need main_buckets >= depth >= 1");
    if (config.ancillary_cells == 0)
        throw std::invalid_argument("HashFlow: ancillary_cells must be positive");
    if (config.digest_width < 1 || config.digest_width > 32)
        throw std::invalid_argument("HashFlow: digest_width must be in [1, 32]");
    if (config.layout == TableLayout::pipelined) {
        stage_sizes_ = pipelined_stage_sizes(config.main_buckets, config.depth,
                                             config.alpha);
        stage_offsets_.resize(stage_sizes_.size());
        size_t off = 0;
        for (size_t k = 0; k < stage_sizes_.size(); ++k) {
            stage_offsets_[k] = off;
            off += stage_sizes_[k];
        }
    }
    buckets_.resize(config.main_buckets);
    ancillary_.resize(config.ancillary_cells);
}

size_t HashFlowSketch::probe_index(uint32_t member, uint64_t raw_hash) const {
    if (config_.layout == TableLayout::multi_hash)
        return HashFamily::reduce(raw_hash, buckets_.size());
    const size_t stage = member - 1;
    return stage_offsets_[stage] + HashFamily::reduce(raw_hash, stage_sizes_[stage]);
}

UpdateOutcome HashFlowSketch::update(const FlowKey& key) {
    OpCost op;
    uint64_t raw1 = 0;
    uint32_t min_count = std::numeric_limits<uint32_t>::max();
    size_t min_pos = 0;
    UpdateOutcome outcome;

    const int d = config_.depth;
    int i = 1;
    for (; i <= d; ++i) {
        const uint64_t raw = family_.raw(uint32_t(i), key);
        ++op.hash_ops;
        if (i == 1) raw1 = raw;
        const size_t idx = probe_index(uint32_t(i), raw);
        FlowRecord& bucket = buckets_[idx];
        ++op.mem_accesses;
        if (bucket.empty()) {
            bucket = FlowRecord{key, 1};
            ++op.mem_accesses;
            ++occupied_;
            outcome = UpdateOutcome::inserted_main;
            break;
        }
        if (bucket.key == key) {
            ++bucket.count;
            ++op.mem_accesses;
            outcome = UpdateOutcome::hit_main;
            break;
        }
        if (bucket.count < min_count) {
            min_count = bucket.count;
            min_pos = idx;
        }
    }

    if (i > d) {
        // All d probes collided; fall back to the ancillary table.
        const size_t idx = family_.bucket(uint32_t(d) + 1, key, ancillary_.size());
        ++op.hash_ops;
        const uint32_t digest = HashFamily::digest_from_raw(raw1, config_.digest_width);
        AncillaryCell& cell = ancillary_[idx];
        ++op.mem_accesses;
        if (cell.count == 0 || cell.digest != digest) {
            cell = AncillaryCell{digest, 1};
            ++op.mem_accesses;
            outcome = UpdateOutcome::replaced_ancillary;
        } else if (cell.count < min_count) {
            if (cell.count < counter_max_) ++cell.count;
            ++op.mem_accesses;
            outcome = UpdateOutcome::hit_ancillary;
        } else {
            buckets_[min_pos] = FlowRecord{key, cell.count + 1};
            ++op.mem_accesses;
            // The evicted summary is dropped so the flow is not counted
            // twice; this write rides on the cell access already metered.
            cell = AncillaryCell{};
            outcome = UpdateOutcome::promoted;
        }
    }

    last_cost_ = op;
    cost_ += op;
    return outcome;
}

uint64_t HashFlowSketch::query(const FlowKey& key) const {
    uint64_t raw1 = 0;
    for (int i = 1; i <= config_.depth; ++i) {
        const uint64_t raw = family_.raw(uint32_t(i), key);
        if (i == 1) raw1 = raw;
        const FlowRecord& bucket = buckets_[probe_index(uint32_t(i), raw)];
        if (!bucket.empty() && bucket.key == key) return bucket.count;
    }
    const size_t idx = family_.bucket(uint32_t(config_.depth) + 1, key, ancillary_.size());
    const AncillaryCell& cell = ancillary_[idx];
    if (cell.count > 0 &&
        cell.digest == HashFamily::digest_from_raw(raw1, config_.digest_width))
        return cell.count;
    return 0;
}

std::vector<FlowRecord> HashFlowSketch::export_records() const {
    std::vector<FlowRecord> out;
    out.reserve(occupied_);
    for (const FlowRecord& bucket : buckets_)
        if (!bucket.empty()) out.push_back(bucket);
    return out;
}

size_t HashFlowSketch::occupied_ancillary_cells() const {
    size_t occupied = 0;
    for (const AncillaryCell& cell : ancillary_)
        if (cell.count > 0) ++occupied;
    return occupied;
}

CardinalityEstimate HashFlowSketch::estimate_cardinality() const {
    const size_t w = ancillary_.size();
    const size_t z = w - occupied_ancillary_cells();
    if (z == w) return {double(occupied_), false};
    CardinalityEstimate lc = linear_counting(w, z);
    lc.value += double(occupied_);
    return lc;
}

double HashFlowSketch::occupancy() const {
    return buckets_.empty() ? 0.0 : double(occupied_) / double(buckets_.size());
}

}  // namespace flowsketch
