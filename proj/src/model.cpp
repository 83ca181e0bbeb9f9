#include "flowsketch/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "flowsketch/hashflow.hpp"

namespace flowsketch {

namespace {

void check_input(double m, double n, int d) {
    if (m < 0 || n < 1 || d < 1)
        throw std::invalid_argument("model: need m >= 0, n >= 1, d >= 1");
}

}  // namespace

ModelOutput multihash_model(double m, double n, int d) {
    check_input(m, n, d);
    ModelOutput out;
    out.empty_probs.reserve(size_t(d));
    const double load = m / n;
    double p = std::exp(-load);
    out.empty_probs.push_back(p);
    for (int k = 2; k <= d; ++k) {
        p = p * std::exp(1.0 - load - p);
        out.empty_probs.push_back(p);
    }
    out.utilization = 1.0 - p;
    return out;
}

ModelOutput pipelined_model(double m, double n, int d, double alpha) {
    check_input(m, n, d);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("model: alpha must be in (0, 1)");
    ModelOutput out;
    out.empty_probs.reserve(size_t(d));
    const double n1 = (1.0 - alpha) / (1.0 - std::pow(alpha, d)) * n;
    double neg_log_p = m / n1;  // -ln p_1
    double p = std::exp(-neg_log_p);
    out.empty_probs.push_back(p);
    for (int k = 2; k <= d; ++k) {
        neg_log_p = (neg_log_p - 1.0 + p) / alpha;
        p = std::exp(-neg_log_p);
        out.empty_probs.push_back(p);
    }
    double weighted = 0.0;
    for (int k = 0; k < d; ++k)
        weighted += std::pow(alpha, k) * out.empty_probs[size_t(k)];
    out.utilization = 1.0 - (1.0 - alpha) / (1.0 - std::pow(alpha, d)) * weighted;
    return out;
}

ModelSimRow model_vs_simulation(size_t m, size_t n, int d,
                                std::optional<double> alpha, int seeds,
                                uint64_t base_seed) {
    if (seeds < 1) throw std::invalid_argument("model_vs_simulation: seeds >= 1");
    ModelSimRow row;
    row.m = double(m);
    row.n = double(n);
    row.d = d;
    row.alpha = alpha;
    row.model_utilization =
        alpha ? pipelined_model(double(m), double(n), d, *alpha).utilization
              : multihash_model(double(m), double(n), d).utilization;

    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        HashFlowConfig config;
        config.main_buckets = n;
        config.ancillary_cells = 1;  // occupancy does not involve the ancillary table
        config.depth = d;
        config.layout = alpha ? TableLayout::pipelined : TableLayout::multi_hash;
        config.alpha = alpha.value_or(0.7);
        config.seed = base_seed + uint64_t(s);
        HashFlowSketch sketch(config);

        std::mt19937_64 rng(base_seed * 0x51AB1E ^ uint64_t(s));
        for (size_t i = 0; i < m; ++i) {
            FlowKey key;
            const uint64_t a = rng(), b = rng();
            key.src_addr = uint32_t(a);
            key.dst_addr = uint32_t(a >> 32);
            key.src_port = uint16_t(b);
            key.dst_port = uint16_t(b >> 16);
            key.protocol = uint8_t(b >> 32);
            sketch.update(key);
        }
        const double occ = sketch.occupancy();
        sum += occ;
        sum_sq += occ * occ;
    }
    row.simulated_mean = sum / seeds;
    row.simulated_std =
        seeds > 1 ? std::sqrt(std::max(0.0, sum_sq / seeds -
                                                row.simulated_mean * row.simulated_mean))
                  : 0.0;
    return row;
}

}  // namespace flowsketch
