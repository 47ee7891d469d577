#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmsim/harness.hpp"
#include "hmsim/storage.hpp"

namespace {

int cmd_generate(const std::string& spec_path, const std::string& out_path) {
    hmsim::TraceSpec spec = hmsim::load_trace_spec_file(spec_path);
    std::vector<hmsim::MemAccess> trace = hmsim::generate(spec);
    hmsim::write_trace(trace, out_path);
    std::printf("generated %zu accesses (%s) -> %s\n", trace.size(),
                hmsim::to_string(spec.pattern), out_path.c_str());
    return 0;
}

void print_summary(const hmsim::RunStats& s) {
    std::printf("%-10s org=%-10s dcd=%d pdm=%d bypass=%-24s accesses=%llu\n",
                s.run_id.c_str(), hmsim::to_string(s.config.organization),
                s.config.dcd_enabled, s.config.pdm_enabled,
                hmsim::to_string(s.config.bypass),
                static_cast<unsigned long long>(s.accesses));
    std::printf("  transfers=%llu useful=%.3f rho=%.3f makespan=%.0fns "
                "mean_latency=%.1fns oracle=%s\n",
                static_cast<unsigned long long>(s.ledger.total()),
                s.useful_fraction(), s.rho, s.channel.makespan_ns,
                s.channel.mean_latency_ns,
                s.verdict == hmsim::OracleVerdict::Pass   ? "PASS"
                : s.verdict == hmsim::OracleVerdict::Fail ? "FAIL"
                                                          : "NOT_CHECKED");
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            const std::string& report_path, const std::string& format) {
    hmsim::PolicyConfig config = hmsim::load_config_file(config_path);
    std::vector<hmsim::MemAccess> trace =
        hmsim::read_trace(trace_path, config.geometry.memory_lines);
    hmsim::RunStats stats = hmsim::run_trace(config, trace);
    print_summary(stats);
    if (!report_path.empty()) hmsim::emit_report({stats}, format, report_path);

    hmsim::StorageBudget b = hmsim::storage_budget(config);
    std::printf("  sram=%lluKB + %u bits/L3-line\n",
                static_cast<unsigned long long>(b.kb_total()), b.l3_bits_per_line);
    return stats.verdict == hmsim::OracleVerdict::Fail ? 1 : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& trace_path,
              const std::vector<std::uint32_t>& sizes, const std::string& report_path,
              const std::string& format) {
    hmsim::PolicyConfig config = hmsim::load_config_file(config_path);
    std::vector<hmsim::MemAccess> trace =
        hmsim::read_trace(trace_path, config.geometry.memory_lines);
    std::vector<hmsim::RunStats> stats = hmsim::sweep_mdc_size(config, trace, sizes);
    std::printf("%-8s %-10s %-12s %-14s %s\n", "entries", "rho", "useful", "makespan_ns",
                "oracle");
    bool all_pass = true;
    for (const hmsim::RunStats& s : stats) {
        all_pass &= s.verdict != hmsim::OracleVerdict::Fail;
        std::printf("%-8u %-10.4f %-12.4f %-14.0f %s\n",
                    s.config.metadata_cache_entries, s.rho, s.useful_fraction(),
                    s.channel.makespan_ns,
                    s.verdict == hmsim::OracleVerdict::Pass ? "PASS" : "FAIL");
    }
    if (!report_path.empty()) hmsim::emit_report(stats, format, report_path);
    return all_pass ? 0 : 1;
}

int cmd_selftest() {
    bool all = true;
    for (const hmsim::ConformanceCheck& c : hmsim::run_conformance_suite()) {
        std::printf("%-4s %-45s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all &= c.pass;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hmsim: channel-shared DRAM-cache + 3D-XPoint hybrid memory simulator"};
    app.require_subcommand(1);

    std::string spec_path, trace_path, config_path, report_path, format = "csv";
    std::vector<std::uint32_t> sizes = {128, 256, 512, 1024};

    CLI::App* gen = app.add_subcommand("generate", "generate a synthetic trace");
    gen->add_option("--spec", spec_path, "trace spec file (key = value)")->required();
    gen->add_option("--out", trace_path, "output trace file")->required();

    CLI::App* run = app.add_subcommand("run", "run one trace under one config");
    run->add_option("--config", config_path, "policy config file")->required();
    run->add_option("--trace", trace_path, "trace file")->required();
    run->add_option("--report", report_path, "report output file");
    run->add_option("--format", format, "report format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* sweep = app.add_subcommand("sweep", "metadata-cache size sweep");
    sweep->add_option("--config", config_path, "policy config file")->required();
    sweep->add_option("--trace", trace_path, "trace file")->required();
    sweep->add_option("--sizes", sizes, "entry counts to sweep")->delimiter(',');
    sweep->add_option("--report", report_path, "report output file");
    sweep->add_option("--format", format, "report format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* selftest =
        app.add_subcommand("selftest", "run the cost-model conformance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(spec_path, trace_path);
        if (run->parsed()) return cmd_run(config_path, trace_path, report_path, format);
        if (sweep->parsed()) return cmd_sweep(config_path, trace_path, sizes,
                                              report_path, format);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
