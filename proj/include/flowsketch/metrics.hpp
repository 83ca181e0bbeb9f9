#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "flowsketch/flow_key.hpp"
#include "flowsketch/traffic.hpp"

namespace flowsketch {

using FlowKeySet = std::unordered_set<FlowKey, FlowKeyHash>;

/// Flow set coverage: reported records with correct flow IDs (duplicates
/// counted once) over the true flow count.
double compute_fsc(const std::vector<FlowRecord>& reported, const GroundTruth& truth);

/// Mean of |estimate/true - 1| over the chosen flows; absent estimates are 0.
double compute_are(const std::function<uint64_t(const FlowKey&)>& estimator,
                   const GroundTruth& truth);
double compute_are(const std::function<uint64_t(const FlowKey&)>& estimator,
                   const GroundTruth& truth, const std::vector<FlowKey>& flows);

/// Keys of reported records with count strictly greater than the threshold.
FlowKeySet detect_heavy_hitters(const std::vector<FlowRecord>& reported, uint32_t threshold);
std::vector<FlowKey> true_heavy_hitters(const GroundTruth& truth, uint32_t threshold);

struct F1Result {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

F1Result compute_f1(const FlowKeySet& reported, const GroundTruth& truth, uint32_t threshold);

/// |estimate/true_n - 1|.
double compute_re(double estimate, uint64_t true_n);

}  // namespace flowsketch
