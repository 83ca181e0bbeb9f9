#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "flowsketch/traffic.hpp"

using namespace flowsketch;

namespace {

SyntheticSpec small_spec(uint64_t seed = 1) {
    SyntheticSpec spec;
    spec.flow_count = 500;
    spec.zipf_exponent = 1.1;
    spec.max_flow_size = 1000;
    spec.seed = seed;
    return spec;
}

std::string contains_or_fail(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const TraceError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("trace presets") {
    const SyntheticSpec backbone = preset_spec("backbone");
    CHECK(backbone.flow_count == 50000);
    CHECK(backbone.zipf_exponent == 1.1);
    CHECK(backbone.max_flow_size == 100000);
    CHECK(preset_spec("campus").zipf_exponent == 1.3);
    CHECK(preset_spec("campus").max_flow_size == 300000);
    CHECK(preset_spec("isp-sampled").zipf_exponent == 0.4);
    CHECK(preset_spec("isp-sampled").max_flow_size == 5);
    CHECK_THROWS_AS(preset_spec("datacenter"), std::invalid_argument);
}

TEST_CASE("generated flow sizes follow the capped rank law") {
    const SyntheticSpec spec = small_spec();
    const Trace trace = generate_trace(spec);
    REQUIRE(trace.truth.flow_count() == spec.flow_count);
    CHECK(trace.events.size() == trace.truth.total_packets);

    std::vector<uint64_t> sizes;
    uint64_t total = 0;
    for (const auto& [key, size] : trace.truth.flows) {
        sizes.push_back(size);
        total += size;
    }
    CHECK(total == trace.truth.total_packets);
    std::sort(sizes.rbegin(), sizes.rend());
    // Rank r gets clamp(round(cap * r^-s), 1, cap).
    for (size_t r = 0; r < sizes.size(); ++r) {
        const double raw = double(spec.max_flow_size) *
                           std::pow(double(r + 1), -spec.zipf_exponent);
        const uint64_t expected = std::clamp<uint64_t>(uint64_t(std::llround(raw)), 1,
                                                       spec.max_flow_size);
        CHECK(sizes[r] == expected);
    }
    CHECK(sizes.front() == spec.max_flow_size);
    CHECK(sizes.back() == 1);
}

TEST_CASE("generation is deterministic in the seed") {
    const Trace a = generate_trace(small_spec(7));
    const Trace b = generate_trace(small_spec(7));
    const Trace c = generate_trace(small_spec(8));
    CHECK(a.events == b.events);
    CHECK(a.events != c.events);
}

TEST_CASE("sorted and shuffled interleavings carry the same flows") {
    SyntheticSpec spec = small_spec(3);
    const Trace shuffled = generate_trace(spec);
    spec.interleaving = Interleaving::sorted;
    const Trace sorted = generate_trace(spec);
    REQUIRE(shuffled.events.size() == sorted.events.size());
    for (const auto& [key, size] : shuffled.truth.flows)
        CHECK(sorted.truth.true_size(key) == size);

    // Sorted order keeps each flow contiguous.
    std::unordered_set<FlowKey, FlowKeyHash> finished;
    FlowKey current = sorted.events.front().key;
    for (const TraceEvent& ev : sorted.events) {
        if (ev.key == current) continue;
        CHECK(finished.insert(current).second);
        CHECK(!finished.contains(ev.key));
        current = ev.key;
    }

    // Timestamps are just the packet index.
    for (size_t i = 0; i < 100; ++i) CHECK(sorted.events[i].timestamp_us == i);
}

TEST_CASE("traces round-trip through CSV") {
    const Trace trace = generate_trace(small_spec(11));
    std::stringstream ss;
    write_trace(ss, trace.events);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "ts,src,dst,sport,dport,proto");
    ss.seekg(0);
    const auto parsed = parse_trace(ss, "roundtrip");
    CHECK(parsed == trace.events);
}

TEST_CASE("parse errors carry the file name and line number") {
    auto parse = [](const std::string& text) {
        return contains_or_fail([&] {
            std::stringstream ss(text);
            parse_trace(ss, "bad.csv");
        });
    };
    CHECK(parse("nonsense\n").find("bad.csv:1") != std::string::npos);
    CHECK(parse("").find("header expected") != std::string::npos);

    const std::string header = "ts,src,dst,sport,dport,proto\n";
    CHECK(parse(header + "1,10.0.0.1,10.0.0.2,5,6\n").find("bad.csv:2: expected 6 fields") !=
          std::string::npos);
    CHECK(parse(header + "1,10.0.0.1,10.0.0.2,1,2,6\n" + "2,300.0.0.1,10.0.0.2,1,2,6\n")
              .find("bad.csv:3") != std::string::npos);
    CHECK(parse(header + "1,10.0.0.1,10.0.0.2,70000,2,6\n").find("sport") !=
          std::string::npos);
    CHECK(parse(header + "1,10.0.0.1,10.0.0.2,1,2,300\n").find("proto") !=
          std::string::npos);
    CHECK(parse(header + "x,10.0.0.1,10.0.0.2,1,2,6\n").find("ts") != std::string::npos);
    CHECK(parse("ts,src,dst,sport,dport,proto\n1,10.0.0.1,10.0.0.2,1,2,6\n").empty());
}

TEST_CASE("flow selection keeps whole flows in first-seen order") {
    const Trace trace = generate_trace(small_spec(13));
    const size_t target = 120;
    const Trace picked = select_flows(trace.events, target);
    CHECK(picked.truth.flow_count() == target);

    // Brute-force reference: scan for the first `target` distinct keys.
    std::unordered_set<FlowKey, FlowKeyHash> keep;
    for (const TraceEvent& ev : trace.events) {
        if (keep.size() == target && !keep.contains(ev.key)) continue;
        keep.insert(ev.key);
    }
    std::vector<TraceEvent> expected;
    for (const TraceEvent& ev : trace.events)
        if (keep.contains(ev.key)) expected.push_back(ev);
    CHECK(picked.events == expected);
    for (const auto& [key, size] : picked.truth.flows)
        CHECK(size == trace.truth.true_size(key));  // flows stay whole
}

TEST_CASE("random flow selection is seeded and complete") {
    const Trace trace = generate_trace(small_spec(17));
    const Trace a = select_flows(trace.events, 80, true, 5);
    const Trace b = select_flows(trace.events, 80, true, 5);
    const Trace c = select_flows(trace.events, 80, true, 6);
    CHECK(a.events == b.events);
    CHECK(a.events != c.events);
    CHECK(a.truth.flow_count() == 80);
    for (const auto& [key, size] : a.truth.flows)
        CHECK(size == trace.truth.true_size(key));

    CHECK_THROWS_AS(select_flows(trace.events, 501), TraceError);
}

TEST_CASE("record CSV uses dotted quads and a fixed header") {
    std::vector<FlowRecord> records = {
        FlowRecord{FlowKey{0x0A000001, 0xC0A80101, 8080, 80, 6}, 42},
        FlowRecord{FlowKey{0x01020304, 0x05060708, 1, 2, 17}, 7},
    };
    std::stringstream ss;
    write_records_csv(ss, records);
    CHECK(ss.str() ==
          "src,dst,sport,dport,proto,count\n"
          "10.0.0.1,192.168.1.1,8080,80,6,42\n"
          "1.2.3.4,5.6.7.8,1,2,17,7\n");
}

TEST_CASE("truth CSV is sorted and byte-stable") {
    const Trace trace = generate_trace(small_spec(19));
    std::stringstream a, b;
    write_truth_csv(a, trace.truth);
    write_truth_csv(b, trace.truth);
    CHECK(a.str() == b.str());

    std::string header;
    std::getline(a, header);
    CHECK(header == "src,dst,sport,dport,proto,count");
    std::string prev, line;
    size_t rows = 0;
    while (std::getline(a, line)) {
        ++rows;
        prev = line;
    }
    CHECK(rows == trace.truth.flow_count());
}

TEST_CASE("generator rejects degenerate specs") {
    SyntheticSpec spec;
    spec.flow_count = 0;
    CHECK_THROWS_AS(generate_trace(spec), std::invalid_argument);
    spec.flow_count = 10;
    spec.zipf_exponent = 0;
    CHECK_THROWS_AS(generate_trace(spec), std::invalid_argument);
    spec.zipf_exponent = 1.0;
    spec.max_flow_size = 0;
    CHECK_THROWS_AS(generate_trace(spec), std::invalid_argument);
}
