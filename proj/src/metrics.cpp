#include "flowsketch/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace flowsketch {

double compute_fsc(const std::vector<FlowRecord>& reported, const GroundTruth& truth) {
    if (truth.flow_count() == 0)
        throw std::invalid_argument("compute_fsc: empty ground truth");
    FlowKeySet correct;
    for (const FlowRecord& rec : reported)
        if (truth.flows.contains(rec.key)) correct.insert(rec.key);
    return double(correct.size()) / double(truth.flow_count());
}

double compute_are(const std::function<uint64_t(const FlowKey&)>& estimator,
                   const GroundTruth& truth) {
    if (truth.flow_count() == 0)
        throw std::invalid_argument("compute_are: empty flow set");
    double sum = 0.0;
    for (const auto& [key, size] : truth.flows)
        sum += std::abs(double(estimator(key)) / double(size) - 1.0);
    return sum / double(truth.flow_count());
}

double compute_are(const std::function<uint64_t(const FlowKey&)>& estimator,
                   const GroundTruth& truth, const std::vector<FlowKey>& flows) {
    if (flows.empty())
        throw std::invalid_argument("compute_are: empty flow set");
    double sum = 0.0;
    for (const FlowKey& key : flows) {
        const uint64_t size = truth.true_size(key);
        if (size == 0)
            throw std::invalid_argument("compute_are: flow absent from ground truth");
        sum += std::abs(double(estimator(key)) / double(size) - 1.0);
    }
    return sum / double(flows.size());
}

FlowKeySet detect_heavy_hitters(const std::vector<FlowRecord>& reported, uint32_t threshold) {
    if (threshold < 1)
        throw std::invalid_argument("detect_heavy_hitters: threshold must be >= 1");
    FlowKeySet out;
    for (const FlowRecord& rec : reported)
        if (rec.count > threshold) out.insert(rec.key);
    return out;
}

std::vector<FlowKey> true_heavy_hitters(const GroundTruth& truth, uint32_t threshold) {
    std::vector<FlowKey> out;
    for (const auto& [key, size] : truth.flows)
        if (size > threshold) out.push_back(key);
    return out;
}

F1Result compute_f1(const FlowKeySet& reported, const GroundTruth& truth, uint32_t threshold) {
    size_t real = 0, hits = 0;
    for (const auto& [key, size] : truth.flows) {
        if (size <= threshold) continue;
        ++real;
        if (reported.contains(key)) ++hits;
    }
    F1Result result;
    result.precision = reported.empty() ? (real == 0 ? 1.0 : 0.0)
                                        : double(hits) / double(reported.size());
    result.recall = real == 0 ? 1.0 : double(hits) / double(real);
    const double denom = result.precision + result.recall;
    result.f1 = denom == 0.0 ? 0.0 : 2.0 * result.precision * result.recall / denom;
    return result;
}

double compute_re(double estimate, uint64_t true_n) {
    if (true_n < 1) throw std::invalid_argument("compute_re: true_n must be >= 1");
    return std::abs(estimate / double(true_n) - 1.0);
}

}  // namespace flowsketch
