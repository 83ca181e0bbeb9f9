#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowsketch/experiment.hpp"
#include "flowsketch/hashflow.hpp"
#include "flowsketch/linear_counting.hpp"
#include "flowsketch/model.hpp"
#include "flowsketch/sizing.hpp"
#include "flowsketch/traffic.hpp"

namespace py = pybind11;
using namespace flowsketch;

namespace {

const char* outcome_name(UpdateOutcome outcome) {
    switch (outcome) {
        case UpdateOutcome::hit_main: return "hit_main";
        case UpdateOutcome::inserted_main: return "inserted_main";
        case UpdateOutcome::hit_ancillary: return "hit_ancillary";
        case UpdateOutcome::replaced_ancillary: return "replaced_ancillary";
        case UpdateOutcome::promoted: return "promoted";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(_flowsketch, m) {
    m.doc() = "Flow record collection sketches";

    py::class_<FlowKey>(m, "FlowKey")
        .def(py::init([](uint32_t src, uint32_t dst, uint16_t sport, uint16_t dport,
                         uint8_t proto) {
                 return FlowKey{src, dst, sport, dport, proto};
             }),
             py::arg("src"), py::arg("dst"), py::arg("sport"), py::arg("dport"),
             py::arg("proto"))
        .def_readwrite("src", &FlowKey::src_addr)
        .def_readwrite("dst", &FlowKey::dst_addr)
        .def_readwrite("sport", &FlowKey::src_port)
        .def_readwrite("dport", &FlowKey::dst_port)
        .def_readwrite("proto", &FlowKey::protocol)
        .def("__eq__", [](const FlowKey& a, const FlowKey& b) { return a == b; })
        .def("__hash__", [](const FlowKey& k) { return FlowKeyHash{}(k); })
        .def("__repr__", [](const FlowKey& k) { return format_key_csv(k); });

    py::class_<FlowRecord>(m, "FlowRecord")
        .def_readonly("key", &FlowRecord::key)
        .def_readonly("count", &FlowRecord::count);

    py::class_<HashFlowSketch>(m, "HashFlowSketch")
        .def(py::init([](size_t main_buckets, size_t ancillary_cells, int depth,
                         const std::string& layout, double alpha, uint64_t seed) {
                 HashFlowConfig config;
                 config.main_buckets = main_buckets;
                 config.ancillary_cells = ancillary_cells;
                 config.depth = depth;
                 config.layout = layout == "multihash" ? TableLayout::multi_hash
                                                       : TableLayout::pipelined;
                 config.alpha = alpha;
                 config.seed = seed;
                 return HashFlowSketch(config);
             }),
             py::arg("main_buckets"), py::arg("ancillary_cells"), py::arg("depth") = 3,
             py::arg("layout") = "pipelined", py::arg("alpha") = 0.7, py::arg("seed") = 1)
        .def("update",
             [](HashFlowSketch& s, const FlowKey& key) {
                 return std::string(outcome_name(s.update(key)));
             })
        .def("query", &HashFlowSketch::query)
        .def("export_records", &HashFlowSketch::export_records)
        .def("estimate_cardinality",
             [](const HashFlowSketch& s) {
                 const CardinalityEstimate est = s.estimate_cardinality();
                 return py::make_tuple(est.value, est.overflow);
             })
        .def("occupancy", &HashFlowSketch::occupancy)
        .def_property_readonly("stage_sizes", &HashFlowSketch::stage_sizes)
        .def_static("pipelined_stage_sizes", &HashFlowSketch::pipelined_stage_sizes,
                    py::arg("n"), py::arg("depth"), py::arg("alpha"));

    m.def("multihash_model",
          [](double mm, double n, int d) {
              const ModelOutput out = multihash_model(mm, n, d);
              return py::make_tuple(out.empty_probs, out.utilization);
          },
          py::arg("m"), py::arg("n"), py::arg("d"));
    m.def("pipelined_model",
          [](double mm, double n, int d, double alpha) {
              const ModelOutput out = pipelined_model(mm, n, d, alpha);
              return py::make_tuple(out.empty_probs, out.utilization);
          },
          py::arg("m"), py::arg("n"), py::arg("d"), py::arg("alpha"));

    m.def("linear_counting",
          [](size_t cells, size_t empty) {
              const CardinalityEstimate est = linear_counting(cells, empty);
              return py::make_tuple(est.value, est.overflow);
          },
          py::arg("cells"), py::arg("empty_cells"));

    m.def("generate_trace",
          [](size_t flows, double zipf, uint32_t cap, uint64_t seed, bool sorted) {
              SyntheticSpec spec;
              spec.flow_count = flows;
              spec.zipf_exponent = zipf;
              spec.max_flow_size = cap;
              spec.seed = seed;
              spec.interleaving = sorted ? Interleaving::sorted : Interleaving::shuffled;
              const Trace trace = generate_trace(spec);
              std::vector<FlowKey> keys;
              keys.reserve(trace.events.size());
              for (const TraceEvent& e : trace.events) keys.push_back(e.key);
              return keys;
          },
          py::arg("flows"), py::arg("zipf") = 1.1, py::arg("cap") = 100000,
          py::arg("seed") = 1, py::arg("sorted") = false);

    m.def("structure_sizes",
          [](const std::string& algorithm, uint64_t budget_bytes) {
              const StructureSizes s =
                  size_structures(algorithm_from_name(algorithm), budget_bytes);
              py::dict out;
              switch (s.algorithm) {
                  case Algorithm::hashflow:
                      out["main_cells"] = s.main_cells;
                      out["ancillary_cells"] = s.ancillary_cells;
                      break;
                  case Algorithm::hashpipe:
                      out["total_cells"] = s.total_cells;
                      out["cells_per_stage"] = s.cells_per_stage;
                      break;
                  case Algorithm::elastic:
                      out["heavy_cells"] = s.heavy_cells;
                      out["heavy_cells_per_stage"] = s.heavy_cells_per_stage;
                      out["light_cells"] = s.light_cells;
                      break;
                  case Algorithm::flowradar:
                      out["counting_cells"] = s.counting_cells;
                      out["bloom_bits"] = s.bloom_bits;
                      break;
              }
              return out;
          },
          py::arg("algorithm"), py::arg("budget_bytes"));

    m.def("run_config",
          [](const std::string& config_path) {
              const MetricsReport report = run_experiment(parse_config_file(config_path));
              std::ostringstream out;
              write_csv_header(out);
              write_report_rows(out, report);
              return out.str();
          },
          py::arg("config_path"),
          "Run one experiment described by a key=value config file and return the "
          "tidy results CSV as a string.");
}
