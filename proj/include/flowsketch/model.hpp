#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace flowsketch {

struct ModelOutput {
    std::vector<double> empty_probs;  // p_1 .. p_d
    double utilization = 0.0;
};

/// Empty-bucket recursion for the multi-hash main table:
/// p_1 = e^{-m/n}, p_k = p_{k-1} * e^{1 - m/n - p_{k-1}}, utilization 1 - p_d.
ModelOutput multihash_model(double m, double n, int d);

/// Pipelined-stage recursion, evaluated in log space:
/// -ln p_{k+1} = (-ln p_k - 1 + p_k) / alpha, with stage-weighted utilization.
ModelOutput pipelined_model(double m, double n, int d, double alpha);

struct ModelSimRow {
    double m = 0;
    double n = 0;
    int d = 0;
    std::optional<double> alpha;  // empty for multi-hash
    double model_utilization = 0;
    double simulated_mean = 0;
    double simulated_std = 0;
};

/// Feeds `seeds` independent sketches m distinct single-packet flows each
/// and compares their occupancy against the model prediction.
ModelSimRow model_vs_simulation(size_t m, size_t n, int d,
                                std::optional<double> alpha, int seeds,
                                uint64_t base_seed = 1);

}  // namespace flowsketch
