#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hmsim/harness.hpp"
#include "hmsim/storage.hpp"

namespace py = pybind11;
using namespace hmsim;

namespace {

py::dict stats_to_dict(const RunStats& s) {
    py::dict d;
    d["run_id"] = s.run_id;
    d["organization"] = to_string(s.config.organization);
    d["dcd"] = s.config.dcd_enabled;
    d["pdm"] = s.config.pdm_enabled;
    d["bypass"] = to_string(s.config.bypass);
    d["channel_mode"] = to_string(s.config.channel_mode);
    d["mdc_entries"] = s.config.metadata_cache_entries;
    d["seed"] = s.config.rng_seed;
    d["accesses"] = s.accesses;
    d["l3_hits"] = s.l3_hits;
    d["l3_misses"] = s.l3_misses;
    py::dict cats;
    for (unsigned c = 0; c < kCategoryCount; ++c)
        cats[to_string(static_cast<Category>(c))] = s.ledger.counts[c];
    d["transfers"] = cats;
    d["total_transfers"] = s.ledger.total();
    d["rho"] = s.rho;
    d["useful_fraction"] = s.useful_fraction();
    d["makespan_ns"] = s.channel.makespan_ns;
    d["mean_latency_ns"] = s.channel.mean_latency_ns;
    d["swp_accuracy"] = s.swp_accuracy;
    d["oracle_pass"] = s.verdict != OracleVerdict::Fail;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Trace-driven DRAM-cache + 3D-XPoint hybrid memory simulator";

    py::enum_<AccessKind>(m, "AccessKind")
        .value("Read", AccessKind::Read)
        .value("Write", AccessKind::Write);

    py::class_<MemAccess>(m, "MemAccess")
        .def(py::init([](std::uint64_t pc, std::uint64_t addr, bool is_write) {
                 return MemAccess{pc, addr, is_write ? AccessKind::Write : AccessKind::Read};
             }),
             py::arg("pc"), py::arg("addr"), py::arg("is_write") = false)
        .def_readwrite("pc", &MemAccess::pc)
        .def_readwrite("addr", &MemAccess::addr)
        .def_property_readonly("is_write", &MemAccess::is_write)
        .def("__eq__", [](const MemAccess& a, const MemAccess& b) { return a == b; })
        .def("__repr__", [](const MemAccess& a) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "MemAccess(pc=%#llx, addr=%#llx, %s)",
                          (unsigned long long)a.pc, (unsigned long long)a.addr,
                          a.is_write() ? "W" : "R");
            return std::string(buf);
        });

    py::class_<TraceSpec>(m, "TraceSpec")
        .def(py::init([](const std::string& pattern, std::uint64_t footprint_lines,
                         std::uint64_t access_count, double write_fraction,
                         std::uint64_t locality_span, std::uint64_t seed) {
                 TraceSpec s;
                 s.pattern = pattern_from_string(pattern);
                 s.footprint_lines = footprint_lines;
                 s.access_count = access_count;
                 s.write_fraction = write_fraction;
                 s.locality_span = locality_span;
                 s.seed = seed;
                 s.validate();
                 return s;
             }),
             py::arg("pattern") = "mix", py::arg("footprint_lines") = 1 << 16,
             py::arg("access_count") = 100000, py::arg("write_fraction") = 0.25,
             py::arg("locality_span") = 64, py::arg("seed") = 1)
        .def_readwrite("footprint_lines", &TraceSpec::footprint_lines)
        .def_readwrite("access_count", &TraceSpec::access_count)
        .def_readwrite("write_fraction", &TraceSpec::write_fraction)
        .def_readwrite("locality_span", &TraceSpec::locality_span)
        .def_readwrite("seed", &TraceSpec::seed);

    py::class_<PolicyConfig>(m, "PolicyConfig")
        .def(py::init([](const std::string& organization, bool dcd, bool pdm,
                         const std::string& bypass, std::uint32_t metadata_cache_entries,
                         const std::string& channel_mode, std::uint64_t rng_seed,
                         std::uint64_t memory_lines, std::uint64_t cache_lines,
                         std::uint64_t metadata_region_lines, std::uint64_t l3_lines,
                         std::uint32_t l3_ways) {
                 PolicyConfig c;
                 c.organization = organization_from_string(organization);
                 c.dcd_enabled = dcd;
                 c.pdm_enabled = pdm;
                 c.bypass = bypass_from_string(bypass);
                 c.metadata_cache_entries = metadata_cache_entries;
                 c.channel_mode = channel_mode_from_string(channel_mode);
                 c.rng_seed = rng_seed;
                 c.geometry.memory_lines = memory_lines;
                 c.geometry.cache_lines = cache_lines;
                 c.geometry.metadata_region_lines = metadata_region_lines;
                 c.l3_lines = l3_lines;
                 c.l3_ways = l3_ways;
                 c.validate();
                 return c;
             }),
             py::arg("organization") = "tictoc", py::arg("dcd") = false,
             py::arg("pdm") = false, py::arg("bypass") = "none",
             py::arg("metadata_cache_entries") = 512, py::arg("channel_mode") = "shared",
             py::arg("rng_seed") = 1, py::arg("memory_lines") = 1ull << 30,
             py::arg("cache_lines") = 1ull << 26,
             py::arg("metadata_region_lines") = 1ull << 20,
             py::arg("l3_lines") = 131072, py::arg("l3_ways") = 16)
        .def_readwrite("rng_seed", &PolicyConfig::rng_seed)
        .def_readwrite("metadata_cache_entries", &PolicyConfig::metadata_cache_entries);

    m.def("generate", &generate, py::arg("spec"),
          "Generate a synthetic trace from a TraceSpec.");
    m.def("write_trace", &write_trace, py::arg("trace"), py::arg("path"));
    m.def("read_trace", &read_trace, py::arg("path"),
          py::arg("memory_lines") = 1ull << 30);
    m.def("parse_config", &parse_config_text, py::arg("text"),
          "Parse a `key = value` config into a PolicyConfig.");

    m.def(
        "run",
        [](const PolicyConfig& config, const std::vector<MemAccess>& trace) {
            return stats_to_dict(run_trace(config, trace));
        },
        py::arg("config"), py::arg("trace"),
        "Run one trace under one config; returns a stats dict.");

    m.def(
        "sweep",
        [](const PolicyConfig& config, const std::vector<MemAccess>& trace,
           const std::vector<std::uint32_t>& sizes) {
            py::list out;
            for (const RunStats& s : sweep_mdc_size(config, trace, sizes))
                out.append(stats_to_dict(s));
            return out;
        },
        py::arg("config"), py::arg("trace"),
        py::arg("sizes") = std::vector<std::uint32_t>{128, 256, 512, 1024});

    m.def(
        "compare_modes",
        [](const PolicyConfig& config, const std::vector<MemAccess>& trace) {
            ModeComparison mc = compare_modes(config, trace);
            py::dict d;
            d["shared_makespan_ns"] = mc.shared.makespan_ns;
            d["dedicated_makespan_ns"] = mc.dedicated.makespan_ns;
            return d;
        },
        py::arg("config"), py::arg("trace"));

    m.def(
        "storage_budget",
        [](const PolicyConfig& config) {
            StorageBudget b = storage_budget(config);
            py::dict d;
            d["sram_tag_bytes"] = b.sram_tag_bytes;
            d["hm_predictor_bytes"] = b.hm_predictor_bytes;
            d["metadata_cache_bytes"] = b.metadata_cache_bytes;
            d["write_predictor_bytes"] = b.write_predictor_bytes;
            d["l3_bits_per_line"] = b.l3_bits_per_line;
            d["kb_total"] = b.kb_total();
            return d;
        },
        py::arg("config"));

    m.def("selftest", []() {
        py::list out;
        for (const ConformanceCheck& c : run_conformance_suite()) {
            py::dict d;
            d["name"] = c.name;
            d["pass"] = c.pass;
            d["detail"] = c.detail;
            out.append(d);
        }
        return out;
    });

    m.def("report_csv", [](const PolicyConfig& config,
                           const std::vector<MemAccess>& trace) {
        return report_csv({run_trace(config, trace)});
    });
}
