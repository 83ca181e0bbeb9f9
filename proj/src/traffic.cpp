#include "flowsketch/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace flowsketch {

SyntheticSpec preset_spec(const std::string& name) {
    SyntheticSpec spec;
    if (name == "backbone") {
        spec.flow_count = 50000;
        spec.zipf_exponent = 1.1;
        spec.max_flow_size = 100000;
    } else if (name == "campus") {
        spec.flow_count = 50000;
        spec.zipf_exponent = 1.3;
        spec.max_flow_size = 300000;
    } else if (name == "isp-sampled") {
        spec.flow_count = 50000;
        spec.zipf_exponent = 0.4;
        spec.max_flow_size = 5;
    } else {
        throw std::invalid_argument("unknown trace preset: " + name);
    }
    return spec;
}

namespace {

FlowKey random_key(std::mt19937_64& rng) {
    FlowKey key;
    const uint64_t a = rng(), b = rng();
    key.src_addr = uint32_t(a);
    key.dst_addr = uint32_t(a >> 32);
    key.src_port = uint16_t(b);
    key.dst_port = uint16_t(b >> 16);
    key.protocol = uint8_t(b >> 32);
    return key;
}

}  // namespace

Trace generate_trace(const SyntheticSpec& spec) {
    if (spec.flow_count < 1)
        throw std::invalid_argument("generate_trace: flow_count must be >= 1");
    if (!(spec.zipf_exponent > 0))
        throw std::invalid_argument("generate_trace: zipf_exponent must be positive");
    if (spec.max_flow_size < 1)
        throw std::invalid_argument("generate_trace: max_flow_size must be >= 1");

    std::mt19937_64 rng(spec.seed);

    std::vector<FlowKey> keys;
    keys.reserve(spec.flow_count);
    std::unordered_set<FlowKey, FlowKeyHash> seen;
    while (keys.size() < spec.flow_count) {
        FlowKey key = random_key(rng);
        if (seen.insert(key).second) keys.push_back(key);
    }

    Trace trace;
    uint64_t total = 0;
    std::vector<uint32_t> sizes(spec.flow_count);
    for (size_t i = 0; i < spec.flow_count; ++i) {
        const double raw = double(spec.max_flow_size) * std::pow(double(i + 1), -spec.zipf_exponent);
        sizes[i] = std::clamp(uint32_t(std::llround(raw)), 1u, spec.max_flow_size);
        total += sizes[i];
        trace.truth.flows.emplace(keys[i], sizes[i]);
    }
    trace.truth.total_packets = total;

    trace.events.reserve(total);
    for (size_t i = 0; i < spec.flow_count; ++i)
        for (uint32_t p = 0; p < sizes[i]; ++p)
            trace.events.push_back(TraceEvent{0, keys[i]});
    if (spec.interleaving == Interleaving::shuffled)
        std::shuffle(trace.events.begin(), trace.events.end(), rng);
    for (size_t i = 0; i < trace.events.size(); ++i)
        trace.events[i].timestamp_us = i;
    return trace;
}

namespace {

[[noreturn]] void fail(const std::string& name, size_t line, const std::string& what) {
    throw TraceError(name + ":" + std::to_string(line) + ": " + what);
}

uint64_t parse_uint(const std::string& field, uint64_t max, const std::string& name,
                    size_t line, const char* what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value > max)
        fail(name, line, std::string("bad ") + what + " field: '" + field + "'");
    return value;
}

}  // namespace

std::vector<TraceEvent> parse_trace(std::istream& in, const std::string& name) {
    std::string line;
    size_t line_no = 1;
    if (!std::getline(in, line)) throw TraceError(name + ": empty file, header expected");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ts,src,dst,sport,dport,proto")
        fail(name, line_no, "bad header, expected 'ts,src,dst,sport,dport,proto'");

    std::vector<TraceEvent> events;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 6) fail(name, line_no, "expected 6 fields");
        TraceEvent ev;
        ev.timestamp_us = parse_uint(fields[0], UINT64_MAX, name, line_no, "ts");
        try {
            ev.key.src_addr = parse_ipv4(fields[1]);
            ev.key.dst_addr = parse_ipv4(fields[2]);
        } catch (const std::invalid_argument& e) {
            fail(name, line_no, e.what());
        }
        ev.key.src_port = uint16_t(parse_uint(fields[3], 65535, name, line_no, "sport"));
        ev.key.dst_port = uint16_t(parse_uint(fields[4], 65535, name, line_no, "dport"));
        ev.key.protocol = uint8_t(parse_uint(fields[5], 255, name, line_no, "proto"));
        events.push_back(ev);
    }
    return events;
}

std::vector<TraceEvent> parse_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file: " + path);
    return parse_trace(in, path);
}

void write_trace(std::ostream& out, const std::vector<TraceEvent>& events) {
    out << "ts,src,dst,sport,dport,proto\n";
    for (const TraceEvent& ev : events)
        out << ev.timestamp_us << "," << format_key_csv(ev.key) << "\n";
}

void write_trace(const std::string& path, const std::vector<TraceEvent>& events) {
    std::ofstream out(path);
    if (!out) throw TraceError("cannot open output file: " + path);
    write_trace(out, events);
}

Trace select_flows(const std::vector<TraceEvent>& events, size_t target_flow_count,
                   bool random_selection, uint64_t seed) {
    std::vector<FlowKey> order;
    std::unordered_set<FlowKey, FlowKeyHash> distinct;
    for (const TraceEvent& ev : events)
        if (distinct.insert(ev.key).second) order.push_back(ev.key);
    if (order.size() < target_flow_count)
        throw TraceError("select_flows: trace has only " + std::to_string(order.size()) +
                         " distinct flows, " + std::to_string(target_flow_count) +
                         " requested");

    if (random_selection) {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    order.resize(target_flow_count);
    std::unordered_set<FlowKey, FlowKeyHash> keep(order.begin(), order.end());

    Trace out;
    for (const TraceEvent& ev : events) {
        if (!keep.contains(ev.key)) continue;
        out.events.push_back(ev);
        ++out.truth.flows[ev.key];
        ++out.truth.total_packets;
    }
    return out;
}

GroundTruth ground_truth(const std::vector<TraceEvent>& events) {
    GroundTruth truth;
    for (const TraceEvent& ev : events) {
        ++truth.flows[ev.key];
        ++truth.total_packets;
    }
    return truth;
}

void write_records_csv(std::ostream& out, const std::vector<FlowRecord>& records) {
    out << "src,dst,sport,dport,proto,count\n";
    for (const FlowRecord& rec : records)
        out << format_key_csv(rec.key) << "," << rec.count << "\n";
}

void write_truth_csv(std::ostream& out, const GroundTruth& truth) {
    std::vector<FlowRecord> records;
    records.reserve(truth.flows.size());
    for (const auto& [key, count] : truth.flows)
        records.push_back(FlowRecord{key, uint32_t(count)});
    std::sort(records.begin(), records.end(), [](const FlowRecord& a, const FlowRecord& b) {
        return a.key.to_bytes() < b.key.to_bytes();
    });
    write_records_csv(out, records);
}

}  // namespace flowsketch
