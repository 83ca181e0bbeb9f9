#pragma once

#include <cstdint>
#include <vector>

#include "flowsketch/flow_key.hpp"
#include "flowsketch/hash_family.hpp"
#include "flowsketch/linear_counting.hpp"
#include "flowsketch/op_cost.hpp"

namespace flowsketch {

enum class TableLayout { multi_hash, pipelined };

enum class UpdateOutcome {
    hit_main,
    inserted_main,
    hit_ancillary,
    replaced_ancillary,
    promoted,
};

struct HashFlowConfig {
    size_t main_buckets = 0;
    size_t ancillary_cells = 0;
    int depth = 3;
    TableLayout layout = TableLayout::pipelined;
    double alpha = 0.7;
    uint32_t digest_width = 8;
    uint32_t counter_width = 8;
    uint64_t seed = 1;
};

/// Flow record collector with a d-probe main table holding exact records,
/// an ancillary table of (digest, small count) summaries, and promotion of
/// growing ancillary entries back into the main table.
class HashFlowSketch {
public:
    explicit HashFlowSketch(const HashFlowConfig& config);

    UpdateOutcome update(const FlowKey& key);

    /// Exact resident count, else matching ancillary count, else 0.
    uint64_t query(const FlowKey& key) const;

    /// All occupied main-table buckets. Ancillary summaries carry no full
    /// flow ID and are not exported.
    std::vector<FlowRecord> export_records() const;

    /// Occupied main buckets plus a linear-counting estimate over the
    /// ancillary table.
    CardinalityEstimate estimate_cardinality() const;

    /// Fraction of non-empty main-table buckets.
    double occupancy() const;

    size_t occupied_buckets() const { return occupied_; }
    size_t occupied_ancillary_cells() const;
    size_t main_buckets() const { return buckets_.size(); }
    size_t ancillary_cells() const { return ancillary_.size(); }
    const HashFlowConfig& config() const { return config_; }
    const std::vector<size_t>& stage_sizes() const { return stage_sizes_; }

    const OpCost& cost() const { return cost_; }
    OpCost last_cost() const { return last_cost_; }

    /// Geometric stage split n_k ~ alpha^{k-1} * (1-alpha)/(1-alpha^d) * n,
    /// floored with the rounding remainder assigned to stage 1; later
    /// stages cascade so the sizes always sum to n.
    static std::vector<size_t> pipelined_stage_sizes(size_t n, int depth, double alpha);

private:
    struct AncillaryCell {
        uint32_t digest = 0;
        uint32_t count = 0;
    };

    // Probe target of member i (1-based): the whole array for multi-hash,
    // stage i for pipelined.
    size_t probe_index(uint32_t member, uint64_t raw_hash) const;

    HashFlowConfig config_;
    HashFamily family_;
    std::vector<FlowRecord> buckets_;
    std::vector<size_t> stage_sizes_;    // empty for multi-hash
    std::vector<size_t> stage_offsets_;
    std::vector<AncillaryCell> ancillary_;
    uint32_t counter_max_;
    size_t occupied_ = 0;
    OpCost cost_;
    OpCost last_cost_;
};

}  // namespace flowsketch
