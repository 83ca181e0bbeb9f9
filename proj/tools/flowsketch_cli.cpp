#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowsketch/experiment.hpp"
#include "flowsketch/model.hpp"
#include "flowsketch/traffic.hpp"

namespace {

using namespace flowsketch;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

int cmd_generate(const std::string& preset, size_t flows, double zipf, uint32_t cap,
                 uint64_t seed, bool sorted, const std::string& out_path,
                 const std::string& truth_path) {
    SyntheticSpec spec = preset.empty() ? SyntheticSpec{} : preset_spec(preset);
    if (flows) spec.flow_count = flows;
    if (zipf > 0) spec.zipf_exponent = zipf;
    if (cap) spec.max_flow_size = cap;
    spec.seed = seed;
    spec.interleaving = sorted ? Interleaving::sorted : Interleaving::shuffled;

    const Trace trace = generate_trace(spec);
    write_trace(out_path, trace.events);
    if (!truth_path.empty()) {
        auto out = open_output(truth_path);
        write_truth_csv(out, trace.truth);
    }
    std::cerr << "wrote " << trace.events.size() << " packets, "
              << trace.truth.flow_count() << " flows to " << out_path << "\n";
    return 0;
}

void emit_model_block(std::ostream& out, const std::string& layout, size_t m, size_t n,
                      int d, std::optional<double> alpha, int seeds, uint64_t seed) {
    const ModelOutput model = alpha
        ? pipelined_model(double(m), double(n), d, *alpha)
        : multihash_model(double(m), double(n), d);
    double sim_mean = 0, sim_std = 0;
    if (seeds > 0) {
        const ModelSimRow row = model_vs_simulation(m, n, d, alpha, seeds, seed);
        sim_mean = row.simulated_mean;
        sim_std = row.simulated_std;
    }
    for (size_t k = 0; k < model.empty_probs.size(); ++k) {
        out << layout << "," << m << "," << n << "," << d << ","
            << (alpha ? std::to_string(*alpha) : "") << "," << (k + 1) << ","
            << model.empty_probs[k] << "," << model.utilization << ",";
        if (seeds > 0)
            out << sim_mean << "," << sim_std;
        else
            out << ",";
        out << "\n";
    }
}

int cmd_model(const std::string& layout, const std::string& m_list, size_t n,
              const std::string& d_list, const std::string& alpha_list, int seeds,
              uint64_t seed, const std::string& out_path) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_output(out_path);
        out = &file;
    }
    *out << "layout,m,n,d,alpha,k,p_k,utilization,simulated_mean,simulated_std\n";
    for (const std::string& m_str : split_list(m_list))
        for (const std::string& d_str : split_list(d_list)) {
            const size_t m = std::stoull(m_str);
            const int d = std::stoi(d_str);
            if (layout == "multihash") {
                emit_model_block(*out, layout, m, n, d, std::nullopt, seeds, seed);
            } else {
                for (const std::string& a_str : split_list(alpha_list))
                    emit_model_block(*out, layout, m, n, d, std::stod(a_str), seeds, seed);
            }
        }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_path) {
    const ExperimentConfig config = parse_config_file(config_path);
    const MetricsReport report = run_experiment(config);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_output(out_path);
        out = &file;
    }
    write_csv_header(*out);
    write_report_rows(*out, report);
    std::cerr << "done in " << report.wall_ms << " ms, " << report.cost.packets
              << " packets\n";
    return 0;
}

int cmd_grid(const std::string& config_path, unsigned jobs, const std::string& out_path) {
    const std::vector<ExperimentConfig> configs = parse_grid_file(config_path);
    const std::vector<GridResult> results = run_grid(configs, jobs);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_output(out_path);
        out = &file;
    }
    write_grid_csv(*out, results);
    size_t failed = 0;
    for (const GridResult& r : results) failed += r.report ? 0 : 1;
    std::cerr << results.size() << " runs, " << failed << " failed\n";
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& fig,
               const std::string& out_path) {
    static const std::map<std::string, std::vector<std::string>> fig_metrics = {
        {"fsc", {"fsc", "reported_records"}},
        {"are", {"are"}},
        {"re", {"cardinality_re"}},
        {"f1", {"f1", "precision", "recall"}},
        {"hh-are", {"hh_are"}},
        {"cost", {"hash_ops_per_pkt", "mem_accesses_per_pkt", "max_hash_ops_per_pkt",
                  "max_mem_accesses_per_pkt"}},
    };
    auto it = fig_metrics.find(fig);
    if (it == fig_metrics.end()) throw std::runtime_error("unknown figure kind: " + fig);

    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open input file: " + in_path);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_output(out_path);
        out = &file;
    }
    std::string line;
    if (!std::getline(in, line) ||
        line != "algorithm,trace,n_flows,budget_bytes,metric,threshold,value,seed")
        throw std::runtime_error("unexpected CSV header in " + in_path);
    *out << line << "\n";
    while (std::getline(in, line)) {
        const auto fields = split_list(line);
        if (fields.size() < 8) continue;
        for (const std::string& metric : it->second)
            if (fields[4] == metric) {
                *out << line << "\n";
                break;
            }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flow record collection sketches: synthetic traces, analytical "
                 "utilization model, and benchmark harness"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Generate a synthetic skewed packet trace");
    std::string gen_preset, gen_out = "trace.csv", gen_truth;
    size_t gen_flows = 0;
    double gen_zipf = 0;
    uint32_t gen_cap = 0;
    uint64_t gen_seed = 1;
    bool gen_sorted = false;
    gen->add_option("--preset", gen_preset, "backbone | campus | isp-sampled");
    gen->add_option("--flows", gen_flows, "number of distinct flows");
    gen->add_option("--zipf", gen_zipf, "Zipf exponent");
    gen->add_option("--cap", gen_cap, "max flow size in packets");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_flag("--sorted", gen_sorted, "emit packets flow-by-flow instead of shuffled");
    gen->add_option("--out", gen_out, "output trace CSV")->required();
    gen->add_option("--truth", gen_truth, "also write the exact per-flow counts");

    auto* model = app.add_subcommand("model", "Evaluate the utilization model");
    std::string model_layout = "multihash", model_m = "100000", model_d = "3",
                model_alpha = "0.7", model_out;
    size_t model_n = 100000;
    int model_seeds = 0;
    uint64_t model_seed = 1;
    model->add_option("--layout", model_layout, "multihash | pipelined")
        ->check(CLI::IsMember({"multihash", "pipelined"}));
    model->add_option("--m", model_m, "flow counts (comma list)");
    model->add_option("--n", model_n, "total buckets");
    model->add_option("--d", model_d, "depths (comma list)");
    model->add_option("--alpha", model_alpha, "pipeline weights (comma list)");
    model->add_option("--seeds", model_seeds, "simulation seeds (0 = model only)");
    model->add_option("--seed", model_seed, "base RNG seed");
    model->add_option("--out", model_out, "output CSV (default stdout)");

    auto* run = app.add_subcommand("run", "Run one experiment from a config file");
    std::string run_config, run_out;
    run->add_option("--config", run_config, "key=value config file")->required();
    run->add_option("--out", run_out, "output CSV (default stdout)");

    auto* grid = app.add_subcommand("grid", "Run a sweep from a config file");
    std::string grid_config, grid_out;
    unsigned grid_jobs = 1;
    grid->add_option("--config", grid_config, "key=value config file with comma lists")
        ->required();
    grid->add_option("--jobs", grid_jobs, "worker threads");
    grid->add_option("--out", grid_out, "output CSV (default stdout)");

    auto* rep = app.add_subcommand("report", "Filter a results CSV down to one figure's data");
    std::string rep_in, rep_fig, rep_out;
    rep->add_option("--in", rep_in, "input results CSV")->required();
    rep->add_option("--fig", rep_fig, "fsc | are | re | f1 | hh-are | cost")->required();
    rep->add_option("--out", rep_out, "output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_preset, gen_flows, gen_zipf, gen_cap, gen_seed,
                                gen_sorted, gen_out, gen_truth);
        if (model->parsed())
            return cmd_model(model_layout, model_m, model_n, model_d, model_alpha,
                             model_seeds, model_seed, model_out);
        if (run->parsed()) return cmd_run(run_config, run_out);
        if (grid->parsed()) return cmd_grid(grid_config, grid_jobs, grid_out);
        if (rep->parsed()) return cmd_report(rep_in, rep_fig, rep_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
