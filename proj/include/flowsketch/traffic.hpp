#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowsketch/flow_key.hpp"

namespace flowsketch {

/// One packet arrival. Timestamps are informational only.
struct TraceEvent {
    uint64_t timestamp_us = 0;
    FlowKey key;

    bool operator==(const TraceEvent&) const = default;
};

struct GroundTruth {
    std::unordered_map<FlowKey, uint64_t, FlowKeyHash> flows;
    uint64_t total_packets = 0;

    size_t flow_count() const { return flows.size(); }
    uint64_t true_size(const FlowKey& key) const {
        auto it = flows.find(key);
        return it == flows.end() ? 0 : it->second;
    }
};

enum class Interleaving { shuffled, sorted };

struct SyntheticSpec {
    size_t flow_count = 50000;
    double zipf_exponent = 1.1;
    uint32_t max_flow_size = 100000;
    uint64_t seed = 1;
    Interleaving interleaving = Interleaving::shuffled;
};

/// Named stand-ins for the kinds of operational traces the defaults model:
/// "backbone" (default skew), "campus" (heavier elephants), "isp-sampled"
/// (almost all mice).
SyntheticSpec preset_spec(const std::string& name);

struct Trace {
    std::vector<TraceEvent> events;
    GroundTruth truth;
};

/// Rank-ordered Zipf sizes (proportional to rank^-s, capped, minimum 1),
/// random distinct keys, seeded shuffle. Deterministic per spec.
Trace generate_trace(const SyntheticSpec& spec);

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV with header `ts,src,dst,sport,dport,proto`. Malformed rows raise
/// TraceError naming the line and field.
std::vector<TraceEvent> parse_trace(const std::string& path);
std::vector<TraceEvent> parse_trace(std::istream& in, const std::string& name = "<stream>");

void write_trace(std::ostream& out, const std::vector<TraceEvent>& events);
void write_trace(const std::string& path, const std::vector<TraceEvent>& events);

/// Keeps every packet of the first `target_flow_count` distinct flows in
/// order of first appearance (or a seeded random subset of flows).
Trace select_flows(const std::vector<TraceEvent>& events, size_t target_flow_count,
                   bool random_selection = false, uint64_t seed = 1);

GroundTruth ground_truth(const std::vector<TraceEvent>& events);

/// `src,dst,sport,dport,proto,count` rows.
void write_records_csv(std::ostream& out, const std::vector<FlowRecord>& records);
void write_truth_csv(std::ostream& out, const GroundTruth& truth);

}  // namespace flowsketch
