#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "flowsketch/hashflow.hpp"

using namespace flowsketch;

namespace {

FlowKey random_key(std::mt19937_64& rng) {
    return FlowKey{uint32_t(rng()), uint32_t(rng()), uint16_t(rng()), uint16_t(rng()),
                   uint8_t(rng())};
}

// A 4-bucket multi-hash sketch filled with residents whose counts all equal
// `resident_count`, plus one key that misses all its probes, for exercising
// the ancillary paths deterministically.
struct AncillaryFixture {
    HashFlowSketch sketch;
    FlowKey victim;

    static AncillaryFixture build(uint32_t resident_count, uint32_t counter_width = 8) {
        HashFlowConfig config;
        config.main_buckets = 4;
        config.ancillary_cells = 1;
        config.depth = 3;
        config.layout = TableLayout::multi_hash;
        config.counter_width = counter_width;
        config.seed = 2024;
        HashFlowSketch sketch(config);

        std::mt19937_64 rng(99);
        std::vector<FlowKey> residents;
        while (sketch.occupied_buckets() < 4) {
            const FlowKey key = random_key(rng);
            if (sketch.update(key) == UpdateOutcome::inserted_main) residents.push_back(key);
        }
        for (const FlowKey& key : residents)
            for (uint32_t c = 1; c < resident_count; ++c)
                REQUIRE(sketch.update(key) == UpdateOutcome::hit_main);

        FlowKey victim{};
        std::mt19937_64 search(4242);
        for (;;) {
            victim = random_key(search);
            if (sketch.query(victim) == 0) {
                // Probe a copy so the real sketch's ancillary stays untouched.
                HashFlowSketch probe = sketch;
                if (probe.update(victim) != UpdateOutcome::inserted_main &&
                    probe.update(victim) == UpdateOutcome::hit_ancillary)
                    break;
            }
        }
        return AncillaryFixture{std::move(sketch), victim};
    }
};

}  // namespace

TEST_CASE("pipelined stage sizes follow the geometric split") {
    CHECK(HashFlowSketch::pipelined_stage_sizes(1000, 3, 0.7) ==
          std::vector<size_t>{458, 320, 222});
    CHECK(HashFlowSketch::pipelined_stage_sizes(1000, 1, 0.7) ==
          std::vector<size_t>{1000});

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 10 + rng() % 100000;
        const int d = 1 + int(rng() % 5);
        const double alpha = 0.3 + 0.6 * double(rng() % 1000) / 1000.0;
        if (n < size_t(d) * 4) continue;
        const auto sizes = HashFlowSketch::pipelined_stage_sizes(n, d, alpha);
        REQUIRE(sizes.size() == size_t(d));
        size_t sum = 0;
        for (size_t k = 0; k < sizes.size(); ++k) {
            CHECK(sizes[k] > 0);
            if (k + 1 < sizes.size()) CHECK(sizes[k] >= sizes[k + 1]);
            sum += sizes[k];
        }
        CHECK(sum == n);
    }

    CHECK_THROWS_AS(HashFlowSketch::pipelined_stage_sizes(1000, 0, 0.7),
                    std::invalid_argument);
    CHECK_THROWS_AS(HashFlowSketch::pipelined_stage_sizes(1000, 3, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(HashFlowSketch::pipelined_stage_sizes(2, 3, 0.7),
                    std::invalid_argument);
}

TEST_CASE("construction rejects bad configurations") {
    HashFlowConfig config;
    config.main_buckets = 0;
    config.ancillary_cells = 8;
    CHECK_THROWS_AS(HashFlowSketch{config}, std::invalid_argument);
    config.main_buckets = 100;
    config.ancillary_cells = 0;
    CHECK_THROWS_AS(HashFlowSketch{config}, std::invalid_argument);
    config.ancillary_cells = 8;
    config.digest_width = 0;
    CHECK_THROWS_AS(HashFlowSketch{config}, std::invalid_argument);
}

TEST_CASE("insert then hit keeps exact counts in a roomy table") {
    HashFlowConfig config;
    config.main_buckets = 4096;
    config.ancillary_cells = 4096;
    HashFlowSketch sketch(config);

    std::mt19937_64 rng(5);
    std::unordered_map<uint64_t, std::pair<FlowKey, uint64_t>> truth;
    std::vector<FlowKey> keys;
    for (int i = 0; i < 200; ++i) keys.push_back(random_key(rng));
    std::vector<uint64_t> counts(keys.size(), 0);
    for (int round = 0; round < 20; ++round)
        for (size_t i = 0; i <= size_t(round) * 9 && i < keys.size(); ++i) {
            const UpdateOutcome outcome = sketch.update(keys[i]);
            CHECK((outcome == UpdateOutcome::inserted_main ||
                   outcome == UpdateOutcome::hit_main));
            ++counts[i];
        }
    for (size_t i = 0; i < keys.size(); ++i)
        CHECK(sketch.query(keys[i]) == counts[i]);
    CHECK(sketch.query(random_key(rng)) == 0);

    const auto records = sketch.export_records();
    CHECK(records.size() == sketch.occupied_buckets());
    std::set<std::array<uint8_t, 13>> seen;
    for (const FlowRecord& r : records) {
        CHECK(!r.empty());
        CHECK(seen.insert(r.key.to_bytes()).second);  // single residency
    }
}

TEST_CASE("first insert and hit cost one hash and two accesses at best") {
    HashFlowConfig config;
    config.main_buckets = 1024;
    config.ancillary_cells = 1024;
    HashFlowSketch sketch(config);
    std::mt19937_64 rng(6);
    // Find a key whose first probe lands empty (almost any key on an empty table).
    const FlowKey key = random_key(rng);
    sketch.update(key);
    CHECK(sketch.last_cost().mem_accesses >= 2);
    CHECK(sketch.last_cost().hash_ops <= uint64_t(config.depth));
    sketch.update(key);
    const OpCost hit = sketch.last_cost();
    CHECK(hit.hash_ops <= uint64_t(config.depth));
    CHECK(hit.mem_accesses <= uint64_t(config.depth) + 1);
}

TEST_CASE("ancillary replace, increment, and promotion") {
    AncillaryFixture fx = AncillaryFixture::build(3);
    HashFlowSketch& sketch = fx.sketch;
    const size_t occupied_before = sketch.occupied_buckets();
    REQUIRE(occupied_before == 4);

    // Force the single ancillary cell into a known state for the victim.
    CHECK(sketch.update(fx.victim) == UpdateOutcome::replaced_ancillary);
    CHECK(sketch.query(fx.victim) == 1);
    CHECK(sketch.occupied_ancillary_cells() == 1);
    CHECK(sketch.last_cost().hash_ops == 4);   // 3 probes + ancillary hash
    CHECK(sketch.last_cost().mem_accesses == 5);

    CHECK(sketch.update(fx.victim) == UpdateOutcome::hit_ancillary);
    CHECK(sketch.query(fx.victim) == 2);
    CHECK(sketch.update(fx.victim) == UpdateOutcome::hit_ancillary);
    CHECK(sketch.query(fx.victim) == 3);

    // Count now equals the smallest probed resident count: the next packet
    // promotes the flow into the main table with its full tally.
    CHECK(sketch.update(fx.victim) == UpdateOutcome::promoted);
    CHECK(sketch.last_cost().mem_accesses == 5);
    CHECK(sketch.query(fx.victim) == 4);
    CHECK(sketch.occupied_buckets() == occupied_before);  // one resident evicted
    CHECK(sketch.occupied_ancillary_cells() == 0);        // summary cleared

    bool found = false;
    for (const FlowRecord& r : sketch.export_records())
        if (r.key == fx.victim) {
            found = true;
            CHECK(r.count == 4);
        }
    CHECK(found);
}

TEST_CASE("a new colliding flow replaces a foreign ancillary summary") {
    AncillaryFixture fx = AncillaryFixture::build(100);
    HashFlowSketch& sketch = fx.sketch;
    REQUIRE(sketch.update(fx.victim) == UpdateOutcome::replaced_ancillary);
    REQUIRE(sketch.update(fx.victim) == UpdateOutcome::hit_ancillary);
    CHECK(sketch.query(fx.victim) == 2);

    // Find another main-table miss with a different digest and watch it
    // reset the shared cell.
    std::mt19937_64 rng(31337);
    for (;;) {
        const FlowKey other = random_key(rng);
        if (other == fx.victim || sketch.query(other) != 0) continue;
        HashFlowSketch probe = sketch;
        const UpdateOutcome outcome = probe.update(other);
        if (outcome == UpdateOutcome::inserted_main || outcome == UpdateOutcome::hit_main)
            continue;
        if (outcome == UpdateOutcome::replaced_ancillary) {
            CHECK(probe.query(other) == 1);
            CHECK(probe.query(fx.victim) == 0);  // summary overwritten
            break;
        }
    }
}

TEST_CASE("ancillary counters saturate instead of wrapping") {
    AncillaryFixture fx = AncillaryFixture::build(1000);
    HashFlowSketch& sketch = fx.sketch;
    REQUIRE(sketch.update(fx.victim) == UpdateOutcome::replaced_ancillary);
    for (int i = 0; i < 400; ++i)
        CHECK(sketch.update(fx.victim) == UpdateOutcome::hit_ancillary);
    CHECK(sketch.query(fx.victim) == 255);
}

TEST_CASE("promotion carries the accumulated ancillary count plus one") {
    AncillaryFixture fx = AncillaryFixture::build(7);
    HashFlowSketch& sketch = fx.sketch;
    REQUIRE(sketch.update(fx.victim) == UpdateOutcome::replaced_ancillary);
    for (int i = 0; i < 6; ++i) {
        const UpdateOutcome outcome = sketch.update(fx.victim);
        if (outcome == UpdateOutcome::promoted) {
            CHECK(sketch.query(fx.victim) == uint64_t(i) + 2);
            return;
        }
        REQUIRE(outcome == UpdateOutcome::hit_ancillary);
    }
    // With residents at 7 the summary reaches 7 and the 8th packet promotes.
    CHECK(sketch.update(fx.victim) == UpdateOutcome::promoted);
    CHECK(sketch.query(fx.victim) == 8);
}

TEST_CASE("occupancy grows monotonically and per-packet cost is bounded") {
    HashFlowConfig config;
    config.main_buckets = 512;
    config.ancillary_cells = 512;
    config.layout = TableLayout::pipelined;
    HashFlowSketch sketch(config);

    std::mt19937_64 rng(77);
    std::vector<FlowKey> keys;
    for (int i = 0; i < 400; ++i) keys.push_back(random_key(rng));
    size_t last_occupied = 0;
    for (int packet = 0; packet < 20000; ++packet) {
        sketch.update(keys[rng() % keys.size()]);
        CHECK(sketch.occupied_buckets() >= last_occupied);
        last_occupied = sketch.occupied_buckets();
        CHECK(sketch.last_cost().hash_ops <= 4);
        CHECK(sketch.last_cost().mem_accesses <= 5);
    }
    CHECK(sketch.occupancy() == double(last_occupied) / 512.0);
}

TEST_CASE("identical seeds and streams give identical sketches") {
    HashFlowConfig config;
    config.main_buckets = 300;
    config.ancillary_cells = 300;
    HashFlowSketch a(config), b(config);
    std::mt19937_64 rng(123);
    std::vector<FlowKey> keys;
    for (int i = 0; i < 150; ++i) keys.push_back(random_key(rng));
    for (int packet = 0; packet < 5000; ++packet) {
        const FlowKey& key = keys[rng() % keys.size()];
        CHECK(a.update(key) == b.update(key));
    }
    CHECK(a.export_records() == b.export_records());
    CHECK(a.cost() == b.cost());
    CHECK(a.estimate_cardinality().value == b.estimate_cardinality().value);

    config.seed = 999;
    HashFlowSketch c(config);
    for (const FlowKey& key : keys) c.update(key);
    // Different hash seeds place flows differently (overwhelmingly likely).
    HashFlowSketch d(HashFlowConfig{config.main_buckets, config.ancillary_cells});
    for (const FlowKey& key : keys) d.update(key);
    CHECK(c.export_records() != d.export_records());
}

TEST_CASE("cardinality estimate is residents plus ancillary linear counting") {
    HashFlowConfig config;
    config.main_buckets = 64;
    config.ancillary_cells = 128;
    HashFlowSketch sketch(config);
    CHECK(sketch.estimate_cardinality().value == 0.0);

    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) sketch.update(random_key(rng));
    const size_t w = sketch.ancillary_cells();
    const size_t z = w - sketch.occupied_ancillary_cells();
    REQUIRE(z > 0);
    const double expected =
        double(sketch.occupied_buckets()) + std::round(double(w) * std::log(double(w) / double(z)));
    const CardinalityEstimate est = sketch.estimate_cardinality();
    CHECK(est.value == expected);
    CHECK(!est.overflow);
}
