#pragma once

#include <cstdint>
#include <string>

namespace flowsketch {

enum class Algorithm { hashflow, hashpipe, elastic, flowradar };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm algorithm);

/// Cell counts fitting a memory budget under the fixed cell widths:
/// 136-bit flow records (104-bit ID + 32-bit counter), 16-bit ancillary
/// cells (8-bit digest + 8-bit counter), 169-bit elastic heavy cells +
/// 8-bit light counters, 208-bit flowradar cells (104 + 32 + 32 XOR/count
/// fields plus 40 bloom bits each).
struct StructureSizes {
    Algorithm algorithm = Algorithm::hashflow;

    // hashflow
    size_t main_cells = 0;
    size_t ancillary_cells = 0;

    // hashpipe
    size_t total_cells = 0;
    size_t cells_per_stage = 0;

    // elastic
    size_t heavy_cells = 0;  // total across the 3 sub-tables before splitting
    size_t heavy_cells_per_stage = 0;
    size_t light_cells = 0;

    // flowradar
    size_t counting_cells = 0;
    size_t bloom_bits = 0;
};

StructureSizes size_structures(Algorithm algorithm, uint64_t memory_budget_bytes);

}  // namespace flowsketch
