#include "flowsketch/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "flowsketch/elastic.hpp"
#include "flowsketch/flowradar.hpp"
#include "flowsketch/hashpipe.hpp"

namespace flowsketch {

namespace {

/// Uniform report/query/cardinality surface over the four collectors.
class Collector {
public:
    virtual ~Collector() = default;
    virtual void update(const FlowKey& key) = 0;
    virtual OpCost last_cost() const = 0;
    virtual std::vector<FlowRecord> report() = 0;
    virtual uint64_t query(const FlowKey& key) = 0;
    virtual CardinalityEstimate cardinality() = 0;
    virtual bool decode_failed() const { return false; }
};

class HashFlowCollector final : public Collector {
public:
    explicit HashFlowCollector(const HashFlowConfig& config) : sketch_(config) {}
    void update(const FlowKey& key) override { sketch_.update(key); }
    OpCost last_cost() const override { return sketch_.last_cost(); }
    std::vector<FlowRecord> report() override { return sketch_.export_records(); }
    uint64_t query(const FlowKey& key) override { return sketch_.query(key); }
    CardinalityEstimate cardinality() override { return sketch_.estimate_cardinality(); }

private:
    HashFlowSketch sketch_;
};

class HashPipeCollector final : public Collector {
public:
    HashPipeCollector(size_t cells_per_stage, uint64_t seed)
        : sketch_(cells_per_stage, seed) {}
    void update(const FlowKey& key) override { sketch_.update(key); }
    OpCost last_cost() const override { return sketch_.last_cost(); }
    std::vector<FlowRecord> report() override { return sketch_.export_records(); }
    uint64_t query(const FlowKey& key) override { return sketch_.query(key); }
    CardinalityEstimate cardinality() override {
        return {double(sketch_.record_count()), false};
    }

private:
    HashPipeSketch sketch_;
};

class ElasticCollector final : public Collector {
public:
    explicit ElasticCollector(const ElasticConfig& config) : sketch_(config) {}
    void update(const FlowKey& key) override { sketch_.update(key); }
    OpCost last_cost() const override { return sketch_.last_cost(); }
    std::vector<FlowRecord> report() override { return sketch_.export_records(); }
    uint64_t query(const FlowKey& key) override { return sketch_.query(key); }
    CardinalityEstimate cardinality() override { return sketch_.estimate_cardinality(); }

private:
    ElasticSketch sketch_;
};

class FlowRadarCollector final : public Collector {
public:
    explicit FlowRadarCollector(const FlowRadarConfig& config) : sketch_(config) {}
    void update(const FlowKey& key) override { sketch_.update(key); }
    OpCost last_cost() const override { return sketch_.last_cost(); }
    std::vector<FlowRecord> report() override {
        ensure_decoded();
        return decoded_->records;
    }
    uint64_t query(const FlowKey& key) override {
        ensure_decoded();
        auto it = counts_.find(key);
        return it == counts_.end() ? 0 : it->second;
    }
    CardinalityEstimate cardinality() override { return sketch_.estimate_cardinality(); }
    bool decode_failed() const override { return decoded_ && !decoded_->fully_decoded; }

private:
    void ensure_decoded() {
        if (decoded_) return;
        decoded_ = sketch_.decode();
        for (const FlowRecord& rec : decoded_->records) counts_[rec.key] = rec.count;
    }

    FlowRadarSketch sketch_;
    std::optional<FlowRadarSketch::DecodeResult> decoded_;
    std::unordered_map<FlowKey, uint64_t, FlowKeyHash> counts_;
};

std::unique_ptr<Collector> build_collector(const ExperimentConfig& config,
                                           const StructureSizes& sizes) {
    switch (config.algorithm) {
        case Algorithm::hashflow: {
            HashFlowConfig hf;
            hf.main_buckets = sizes.main_cells;
            hf.ancillary_cells = sizes.ancillary_cells;
            hf.depth = config.depth;
            hf.layout = config.layout;
            hf.alpha = config.alpha;
            hf.seed = config.seed;
            return std::make_unique<HashFlowCollector>(hf);
        }
        case Algorithm::hashpipe:
            return std::make_unique<HashPipeCollector>(sizes.cells_per_stage, config.seed);
        case Algorithm::elastic: {
            ElasticConfig ec;
            ec.heavy_cells_per_stage = sizes.heavy_cells_per_stage;
            ec.light_cells = sizes.light_cells;
            ec.lambda = config.lambda;
            ec.seed = config.seed;
            return std::make_unique<ElasticCollector>(ec);
        }
        case Algorithm::flowradar: {
            FlowRadarConfig fc;
            fc.counting_cells = sizes.counting_cells;
            fc.bloom_bits = sizes.bloom_bits;
            fc.seed = config.seed;
            return std::make_unique<FlowRadarCollector>(fc);
        }
    }
    throw std::invalid_argument("bad algorithm enum");
}

Trace load_trace(const ExperimentConfig& config) {
    Trace trace;
    if (config.trace_path) {
        trace.events = parse_trace(*config.trace_path);
        trace.truth = ground_truth(trace.events);
    } else {
        SyntheticSpec spec = config.synthetic;
        spec.seed = config.seed;
        trace = generate_trace(spec);
    }
    if (config.flow_count)
        trace = select_flows(trace.events, *config.flow_count, config.random_selection,
                             config.seed);
    return trace;
}

std::string format_value(double v) {
    std::ostringstream ss;
    ss.precision(9);
    ss << v;
    return ss.str();
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    const StructureSizes sizes = size_structures(config.algorithm, config.memory_budget_bytes);
    const Trace trace = load_trace(config);
    if (trace.truth.flow_count() == 0)
        throw std::invalid_argument("run_experiment: empty trace");

    auto collector = build_collector(config, sizes);

    MetricsReport report;
    report.config = config;
    report.true_flows = trace.truth.flow_count();

    for (const TraceEvent& ev : trace.events) {
        collector->update(ev.key);
        const OpCost op = collector->last_cost();
        ++report.cost.packets;
        report.cost.hash_ops += op.hash_ops;
        report.cost.mem_accesses += op.mem_accesses;
        report.cost.max_hash_ops_per_packet =
            std::max(report.cost.max_hash_ops_per_packet, op.hash_ops);
        report.cost.min_hash_ops_per_packet =
            std::min(report.cost.min_hash_ops_per_packet, op.hash_ops);
        report.cost.max_mem_accesses_per_packet =
            std::max(report.cost.max_mem_accesses_per_packet, op.mem_accesses);
    }

    const std::vector<FlowRecord> records = collector->report();
    report.reported_records = records.size();
    report.decode_failed = collector->decode_failed();

    report.fsc = compute_fsc(records, trace.truth);
    auto estimator = [&](const FlowKey& key) { return collector->query(key); };
    report.are_all_flows = compute_are(estimator, trace.truth);

    const CardinalityEstimate card = collector->cardinality();
    report.cardinality_estimate = card.value;
    report.cardinality_overflow = card.overflow;
    report.cardinality_re = compute_re(card.value, trace.truth.flow_count());

    for (uint32_t threshold : config.thresholds) {
        ThresholdMetrics tm;
        tm.threshold = threshold;
        const FlowKeySet detected = detect_heavy_hitters(records, threshold);
        const F1Result f1 = compute_f1(detected, trace.truth, threshold);
        tm.precision = f1.precision;
        tm.recall = f1.recall;
        tm.f1 = f1.f1;
        std::vector<FlowKey> known;
        for (const FlowKey& key : detected)
            if (trace.truth.flows.contains(key)) known.push_back(key);
        tm.heavy_hitter_are = known.empty() ? 0.0 : compute_are(estimator, trace.truth, known);
        report.per_threshold.push_back(tm);
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return report;
}

std::vector<GridResult> run_grid(const std::vector<ExperimentConfig>& configs,
                                 unsigned parallelism) {
    std::vector<GridResult> results(configs.size());
    std::mutex mu;
    size_t next = 0;
    const unsigned workers =
        std::max(1u, std::min<unsigned>(parallelism, unsigned(configs.size())));

    auto worker = [&] {
        for (;;) {
            size_t i;
            {
                std::lock_guard lock(mu);
                if (next >= configs.size()) return;
                i = next++;
            }
            results[i].config = configs[i];
            try {
                results[i].report = run_experiment(configs[i]);
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return results;
}

void write_csv_header(std::ostream& out) {
    out << "algorithm,trace,n_flows,budget_bytes,metric,threshold,value,seed\n";
}

namespace {

void row(std::ostream& out, const ExperimentConfig& c, const std::string& metric,
         const std::string& threshold, const std::string& value) {
    out << algorithm_name(c.algorithm) << "," << c.trace_label << ","
        << c.flow_count.value_or(0) << "," << c.memory_budget_bytes << "," << metric << ","
        << threshold << "," << value << "," << c.seed << "\n";
}

}  // namespace

void write_report_rows(std::ostream& out, const MetricsReport& r) {
    const ExperimentConfig& c = r.config;
    row(out, c, "fsc", "", format_value(r.fsc));
    row(out, c, "are", "", format_value(r.are_all_flows));
    row(out, c, "cardinality_re", "", format_value(r.cardinality_re));
    row(out, c, "reported_records", "", std::to_string(r.reported_records));
    for (const ThresholdMetrics& tm : r.per_threshold) {
        const std::string t = std::to_string(tm.threshold);
        row(out, c, "precision", t, format_value(tm.precision));
        row(out, c, "recall", t, format_value(tm.recall));
        row(out, c, "f1", t, format_value(tm.f1));
        row(out, c, "hh_are", t, format_value(tm.heavy_hitter_are));
    }
    row(out, c, "hash_ops_per_pkt", "", format_value(r.cost.mean_hash_ops()));
    row(out, c, "mem_accesses_per_pkt", "", format_value(r.cost.mean_mem_accesses()));
    row(out, c, "max_hash_ops_per_pkt", "",
        std::to_string(r.cost.max_hash_ops_per_packet));
    row(out, c, "max_mem_accesses_per_pkt", "",
        std::to_string(r.cost.max_mem_accesses_per_packet));
}

void write_grid_csv(std::ostream& out, const std::vector<GridResult>& results) {
    std::vector<const GridResult*> sorted;
    sorted.reserve(results.size());
    for (const GridResult& r : results) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const GridResult* a, const GridResult* b) {
        const ExperimentConfig& x = a->config;
        const ExperimentConfig& y = b->config;
        return std::tie(x.algorithm, x.trace_label, x.memory_budget_bytes, x.seed) <
                   std::tie(y.algorithm, y.trace_label, y.memory_budget_bytes, y.seed) ||
               (std::tie(x.algorithm, x.trace_label, x.memory_budget_bytes, x.seed) ==
                    std::tie(y.algorithm, y.trace_label, y.memory_budget_bytes, y.seed) &&
                x.flow_count.value_or(0) < y.flow_count.value_or(0));
    });
    write_csv_header(out);
    for (const GridResult* r : sorted) {
        if (r->report) {
            write_report_rows(out, *r->report);
        } else {
            row(out, r->config, "error", "", "\"" + r->error + "\"");
        }
    }
}

namespace {

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        strip(key);
        strip(value);
        kv[key] = value;
    }
    return kv;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

void apply_scalar(ExperimentConfig& config, const std::string& key, const std::string& value) {
    if (key == "algorithm") {
        config.algorithm = algorithm_from_name(value);
    } else if (key == "budget_bytes") {
        config.memory_budget_bytes = std::stoull(value);
    } else if (key == "trace") {
        config.trace_path = value;
        const size_t slash = value.find_last_of('/');
        config.trace_label = slash == std::string::npos ? value : value.substr(slash + 1);
    } else if (key == "preset") {
        config.synthetic = preset_spec(value);
        config.trace_label = value;
    } else if (key == "flows") {
        config.synthetic.flow_count = std::stoull(value);
    } else if (key == "zipf") {
        config.synthetic.zipf_exponent = std::stod(value);
    } else if (key == "cap") {
        config.synthetic.max_flow_size = uint32_t(std::stoul(value));
    } else if (key == "interleaving") {
        if (value == "shuffled") config.synthetic.interleaving = Interleaving::shuffled;
        else if (value == "sorted") config.synthetic.interleaving = Interleaving::sorted;
        else throw std::invalid_argument("bad interleaving: " + value);
    } else if (key == "n_flows") {
        config.flow_count = std::stoull(value);
    } else if (key == "random_selection") {
        config.random_selection = (value == "1" || value == "true");
    } else if (key == "seed") {
        config.seed = std::stoull(value);
    } else if (key == "thresholds") {
        config.thresholds.clear();
        for (const std::string& t : split_list(value))
            config.thresholds.push_back(uint32_t(std::stoul(t)));
    } else if (key == "layout") {
        if (value == "pipelined") config.layout = TableLayout::pipelined;
        else if (value == "multihash") config.layout = TableLayout::multi_hash;
        else throw std::invalid_argument("bad layout: " + value);
    } else if (key == "alpha") {
        config.alpha = std::stod(value);
    } else if (key == "depth") {
        config.depth = std::stoi(value);
    } else if (key == "lambda") {
        config.lambda = std::stod(value);
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

std::optional<uint64_t> env_seed_override() {
    if (const char* env = std::getenv("FLOWSKETCH_SEED")) return std::stoull(env);
    return std::nullopt;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
    ExperimentConfig config;
    for (const auto& [key, value] : read_kv_file(path)) apply_scalar(config, key, value);
    if (auto seed = env_seed_override()) config.seed = *seed;
    return config;
}

std::vector<ExperimentConfig> parse_grid_file(const std::string& path) {
    const auto kv = read_kv_file(path);

    ExperimentConfig base;
    // Sweepable keys expand to a cross product; everything else is scalar.
    static const std::vector<std::string> sweep_keys = {"algorithm", "budget_bytes",
                                                        "n_flows", "seed", "flows"};
    for (const auto& [key, value] : kv)
        if (std::find(sweep_keys.begin(), sweep_keys.end(), key) == sweep_keys.end())
            apply_scalar(base, key, value);

    std::vector<ExperimentConfig> configs = {base};
    for (const std::string& key : sweep_keys) {
        auto it = kv.find(key);
        if (it == kv.end()) continue;
        std::vector<ExperimentConfig> expanded;
        for (const ExperimentConfig& config : configs)
            for (const std::string& value : split_list(it->second)) {
                ExperimentConfig next = config;
                apply_scalar(next, key, value);
                expanded.push_back(next);
            }
        configs = std::move(expanded);
    }
    if (auto seed = env_seed_override())
        for (ExperimentConfig& config : configs) config.seed = *seed;
    return configs;
}

}  // namespace flowsketch
