#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowsketch/hashflow.hpp"
#include "flowsketch/metrics.hpp"
#include "flowsketch/op_cost.hpp"
#include "flowsketch/sizing.hpp"
#include "flowsketch/traffic.hpp"

namespace flowsketch {

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::hashflow;
    uint64_t memory_budget_bytes = 1 << 20;

    /// Trace source: a CSV packet log, or a synthetic spec (whose seed is
    /// re-derived from `seed` so seed sweeps vary the trace too).
    std::optional<std::string> trace_path;
    SyntheticSpec synthetic;
    std::string trace_label = "synthetic";

    /// When set, only the packets of this many flows are fed (first-seen
    /// order unless random_selection).
    std::optional<size_t> flow_count;
    bool random_selection = false;

    uint64_t seed = 1;
    std::vector<uint32_t> thresholds = {50, 100, 200, 400, 800};

    // hashflow overrides
    TableLayout layout = TableLayout::pipelined;
    double alpha = 0.7;
    int depth = 3;
    // elastic override
    double lambda = 8.0;
};

struct CostCounters {
    uint64_t packets = 0;
    uint64_t hash_ops = 0;
    uint64_t mem_accesses = 0;
    uint64_t max_hash_ops_per_packet = 0;
    uint64_t min_hash_ops_per_packet = UINT64_MAX;
    uint64_t max_mem_accesses_per_packet = 0;

    double mean_hash_ops() const { return packets ? double(hash_ops) / double(packets) : 0.0; }
    double mean_mem_accesses() const {
        return packets ? double(mem_accesses) / double(packets) : 0.0;
    }
};

struct ThresholdMetrics {
    uint32_t threshold = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double heavy_hitter_are = 0.0;
};

struct MetricsReport {
    ExperimentConfig config;
    size_t true_flows = 0;
    size_t reported_records = 0;
    double fsc = 0.0;
    double are_all_flows = 0.0;
    double cardinality_estimate = 0.0;
    double cardinality_re = 0.0;
    bool cardinality_overflow = false;
    bool decode_failed = false;  // flowradar only
    std::vector<ThresholdMetrics> per_threshold;
    CostCounters cost;
    double wall_ms = 0.0;  // informational; never serialized
};

MetricsReport run_experiment(const ExperimentConfig& config);

struct GridResult {
    ExperimentConfig config;
    std::optional<MetricsReport> report;
    std::string error;  // non-empty when the run failed
};

std::vector<GridResult> run_grid(const std::vector<ExperimentConfig>& configs,
                                 unsigned parallelism = 1);

/// Tidy CSV: algorithm, trace, n_flows, budget_bytes, metric, threshold,
/// value, seed. Byte-deterministic for a fixed (config, seed).
void write_csv_header(std::ostream& out);
void write_report_rows(std::ostream& out, const MetricsReport& report);
void write_grid_csv(std::ostream& out, const std::vector<GridResult>& results);

/// Flat key=value config files; '#' starts a comment. The environment
/// variable FLOWSKETCH_SEED overrides any configured seed.
ExperimentConfig parse_config_file(const std::string& path);
std::vector<ExperimentConfig> parse_grid_file(const std::string& path);

}  // namespace flowsketch
