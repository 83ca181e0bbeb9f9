#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flowsketch/model.hpp"

using namespace flowsketch;

TEST_CASE("multi-hash empty-bucket recursion at load one") {
    const ModelOutput out = multihash_model(1000, 1000, 3);
    REQUIRE(out.empty_probs.size() == 3);
    CHECK(out.empty_probs[0] == doctest::Approx(0.3679).epsilon(1e-3));
    CHECK(out.empty_probs[1] == doctest::Approx(0.2546).epsilon(1e-3));
    CHECK(out.empty_probs[2] == doctest::Approx(0.1974).epsilon(1e-3));
    CHECK(out.utilization == doctest::Approx(0.8026).epsilon(1e-3));
}

TEST_CASE("multi-hash recursion at load two") {
    const ModelOutput out = multihash_model(2000, 1000, 3);
    CHECK(out.empty_probs[0] == doctest::Approx(0.1353).epsilon(1e-3));
    CHECK(out.empty_probs[1] == doctest::Approx(0.04348).epsilon(1e-2));
    CHECK(out.empty_probs[2] == doctest::Approx(0.01532).epsilon(1e-2));
    CHECK(out.utilization == doctest::Approx(0.9847).epsilon(1e-3));
}

TEST_CASE("pipelined recursion at load one") {
    const ModelOutput out = pipelined_model(1000, 1000, 3, 0.7);
    REQUIRE(out.empty_probs.size() == 3);
    CHECK(out.empty_probs[0] == doctest::Approx(0.1119).epsilon(1e-3));
    CHECK(out.empty_probs[1] == doctest::Approx(0.15577).epsilon(1e-3));
    CHECK(out.empty_probs[2] == doctest::Approx(0.23435).epsilon(1e-3));
    CHECK(out.utilization == doctest::Approx(0.84668).epsilon(1e-3));
}

TEST_CASE("recursions agree independently step by step") {
    // Re-derive both recursions with a direct loop and compare.
    const double m = 1700, n = 1300;
    const int d = 5;
    {
        const ModelOutput out = multihash_model(m, n, d);
        double p = std::exp(-m / n);
        for (int k = 0; k < d; ++k) {
            CHECK(out.empty_probs[k] == doctest::Approx(p).epsilon(1e-12));
            p = p * std::exp(1.0 - m / n - p);
        }
    }
    {
        const double alpha = 0.6;
        const ModelOutput out = pipelined_model(m, n, d, alpha);
        const double frac = (1.0 - alpha) / (1.0 - std::pow(alpha, d));
        double neg_log_p = m / (frac * n);
        double weighted = 0;
        for (int k = 0; k < d; ++k) {
            const double p = std::exp(-neg_log_p);
            CHECK(out.empty_probs[k] == doctest::Approx(p).epsilon(1e-9));
            weighted += std::pow(alpha, k) * p;
            neg_log_p = (neg_log_p - 1.0 + p) / alpha;
        }
        CHECK(out.utilization == doctest::Approx(1.0 - frac * weighted).epsilon(1e-9));
    }
}

TEST_CASE("utilization grows with both depth and load") {
    double prev = 0;
    for (int d = 1; d <= 8; ++d) {
        const double u = multihash_model(1000, 1000, d).utilization;
        CHECK(u > prev);
        prev = u;
    }
    prev = 0;
    for (double m = 200; m <= 3000; m += 200) {
        const double u = multihash_model(m, 1000, 3).utilization;
        CHECK(u > prev);
        prev = u;
    }
    prev = 0;
    for (int d = 2; d <= 8; ++d) {
        const double u = pipelined_model(1000, 1000, d, 0.7).utilization;
        CHECK(u > prev);
        prev = u;
    }
}

TEST_CASE("with one probe level the two layouts coincide") {
    const ModelOutput a = multihash_model(800, 1000, 1);
    const ModelOutput b = pipelined_model(800, 1000, 1, 0.7);
    CHECK(a.utilization == doctest::Approx(b.utilization).epsilon(1e-12));
    CHECK(a.empty_probs[0] == doctest::Approx(b.empty_probs[0]).epsilon(1e-12));
    CHECK(a.utilization == doctest::Approx(1.0 - std::exp(-0.8)).epsilon(1e-12));
}

TEST_CASE("pipelined probing fills more of the table than multi-hash") {
    for (double load : {0.8, 1.0, 1.5, 2.0})
        CHECK(pipelined_model(load * 1000, 1000, 3, 0.7).utilization >
              multihash_model(load * 1000, 1000, 3).utilization);
}

TEST_CASE("model tracks simulation within a few percent") {
    // The recursion is asymptotic; it is tightest once the table is loaded.
    for (const bool pipelined : {false, true}) {
        const ModelSimRow row = model_vs_simulation(
            40000, 20000, 3, pipelined ? std::optional<double>(0.7) : std::nullopt, 5, 1);
        CHECK(std::abs(row.simulated_mean - row.model_utilization) < 0.01);
        CHECK(row.simulated_std < 0.01);
    }
}

TEST_CASE("model rejects bad arguments") {
    CHECK_THROWS_AS(multihash_model(100, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(multihash_model(100, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(pipelined_model(100, 100, 3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pipelined_model(100, 100, 3, 0.0), std::invalid_argument);
}
