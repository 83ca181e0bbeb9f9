#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace flowsketch {

struct CardinalityEstimate {
    double value = 0.0;
    /// Set when every cell was occupied and the estimate is only an
    /// upper-bound marker (w * ln w).
    bool overflow = false;
};

/// Linear-counting estimate w * ln(w / z) over a w-cell bitmap with z
/// empty cells, rounded to the nearest integer.
inline CardinalityEstimate linear_counting(uint64_t cells, uint64_t empty_cells) {
    if (empty_cells > cells)
        throw std::invalid_argument("linear_counting: empty_cells > cells");
    if (cells == 0)
        throw std::invalid_argument("linear_counting: cells must be positive");
    const double w = double(cells);
    if (empty_cells == 0)
        return {std::round(w * std::log(w)), true};
    return {std::round(w * std::log(w / double(empty_cells))), false};
}

}  // namespace flowsketch
