#include "flowsketch/sizing.hpp"

#include <stdexcept>

namespace flowsketch {

namespace {

constexpr uint64_t kRecordBits = 104 + 32;          // flow ID + counter
constexpr uint64_t kAncillaryBits = 8 + 8;          // digest + counter
constexpr uint64_t kElasticHeavyBits = 104 + 32 + 32 + 1;
constexpr uint64_t kElasticLightBits = 8;
constexpr uint64_t kRadarCellBits = 104 + 32 + 32;  // flow_xor + flow_count + packet_count
constexpr uint64_t kRadarBloomBitsPerCell = 40;

[[noreturn]] void too_small(const std::string& algorithm, uint64_t minimum_bits) {
    throw std::invalid_argument("memory budget below minimum for " + algorithm + ": need at least " +
                                std::to_string((minimum_bits + 7) / 8) + " bytes");
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "hashflow") return Algorithm::hashflow;
    if (name == "hashpipe") return Algorithm::hashpipe;
    if (name == "elastic") return Algorithm::elastic;
    if (name == "flowradar") return Algorithm::flowradar;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::hashflow: return "hashflow";
        case Algorithm::hashpipe: return "hashpipe";
        case Algorithm::elastic: return "elastic";
        case Algorithm::flowradar: return "flowradar";
    }
    throw std::invalid_argument("bad algorithm enum");
}

StructureSizes size_structures(Algorithm algorithm, uint64_t memory_budget_bytes) {
    const uint64_t bits = memory_budget_bytes * 8;
    StructureSizes sizes;
    sizes.algorithm = algorithm;
    switch (algorithm) {
        case Algorithm::hashflow: {
            const uint64_t per_pair = kRecordBits + kAncillaryBits;
            const size_t cells = size_t(bits / per_pair);
            if (cells < 3) too_small("hashflow", 3 * per_pair);
            sizes.main_cells = cells;
            sizes.ancillary_cells = cells;
            break;
        }
        case Algorithm::hashpipe: {
            const size_t total = size_t(bits / kRecordBits);
            if (total < 4) too_small("hashpipe", 4 * kRecordBits);
            sizes.total_cells = total;
            sizes.cells_per_stage = total / 4;
            break;
        }
        case Algorithm::elastic: {
            const uint64_t per_pair = kElasticHeavyBits + kElasticLightBits;
            const size_t cells = size_t(bits / per_pair);
            if (cells < 3) too_small("elastic", 3 * per_pair);
            sizes.heavy_cells = cells;
            sizes.heavy_cells_per_stage = cells / 3;
            sizes.light_cells = cells;
            break;
        }
        case Algorithm::flowradar: {
            const uint64_t per_cell = kRadarCellBits + kRadarBloomBitsPerCell;
            const size_t cells = size_t(bits / per_cell);
            if (cells < 1) too_small("flowradar", per_cell);
            sizes.counting_cells = cells;
            sizes.bloom_bits = cells * kRadarBloomBitsPerCell;
            break;
        }
    }
    return sizes;
}

}  // namespace flowsketch
