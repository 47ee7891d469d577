#include "hmsim/harness.hpp"

#include <algorithm>
#include <stdexcept>

namespace hmsim {

Simulation::Simulation(const PolicyConfig& config, RunOptions options)
    : config_(config),
      options_(options),
      llc_(config.l3_lines, config.l3_ways),
      ctrl_(config) {
    config_.validate();
    ctrl_.set_l4_evict_hook([this](LineAddr a) { llc_.clear_l4_hints(a); });
    ctrl_.drop_writebacks_for_test(options_.fault_drop_writebacks);
}

void Simulation::dispatch(const L3Event& e) {
    switch (e.kind) {
        case L3EventKind::DirtyEviction:
            // A dirty line implies at least one trace write reached it.
            if (!oracle_.contains(e.addr))
                throw std::logic_error("integrity breach: dirty eviction of "
                                       "never-written line");
            ctrl_.on_dirty_eviction(e);
            break;
        case L3EventKind::CleanEviction:
            ctrl_.on_clean_eviction(e);
            break;
        case L3EventKind::ReadMiss:
        case L3EventKind::WriteMiss: {
            FillResult fr = ctrl_.on_demand_miss(e.addr, e.pc,
                                                 e.kind == L3EventKind::WriteMiss);
            llc_.fill(e.addr, fr.present_in_l4, fr.dirty_in_l4, fr.payload,
                      fr.was_bypassed);
            break;
        }
    }
}

void Simulation::step(const MemAccess& acc) {
    if (acc.addr >= config_.geometry.memory_lines)
        throw TraceError("trace address out of configured memory range");
    ++accesses_;
    if (!tracking_enabled_ && expected_accesses_ > 0 &&
        accesses_ > static_cast<std::uint64_t>(options_.swp_warmup_fraction *
                                               static_cast<double>(expected_accesses_))) {
        ctrl_.set_swp_accuracy_tracking(true);
        tracking_enabled_ = true;
    }
    std::uint64_t token = 0;
    if (acc.is_write()) token = oracle_.record_write(acc.addr);
    for (const L3Event& e : llc_.access(acc, token)) dispatch(e);
}

RunStats Simulation::finish() {
    L3Event e;
    while (llc_.drain_next(e)) dispatch(e);
    ctrl_.drain();

    RunStats s;
    s.config = config_;
    s.accesses = accesses_;
    s.l3_hits = llc_.hits();
    s.l3_misses = llc_.misses();
    s.ledger = ctrl_.ledger();
    s.policy = ctrl_.counters();
    s.mdc_lookups = ctrl_.metadata_cache().lookups();
    s.mdc_misses = ctrl_.metadata_cache().misses();
    s.rho = ctrl_.metadata_cache().miss_ratio();
    s.swp_accuracy = ctrl_.swp_accuracy();

    if (options_.check_oracle) {
        s.verdict = OracleVerdict::Pass;
        std::vector<LineAddr> addrs;
        addrs.reserve(oracle_.contents().size());
        for (const auto& [addr, tok] : oracle_.contents()) addrs.push_back(addr);
        std::sort(addrs.begin(), addrs.end());
        for (LineAddr a : addrs) {
            if (ctrl_.memory().read(a) != oracle_.expected(a)) {
                s.verdict = OracleVerdict::Fail;
                s.first_divergence = a;
                break;
            }
        }
    }

    if (options_.run_channel)
        s.channel = simulate_channel(ctrl_.transfer_log(), config_.channel_mode);
    return s;
}

void Simulation::check_effective_memory() const {
    std::unordered_map<LineAddr, std::uint64_t> overlay;
    for (const auto& [addr, payload] : ctrl_.l4_dirty_contents())
        overlay[addr] = payload;
    for (const auto& [addr, payload] : llc_.dirty_contents())
        overlay[addr] = payload;  // L3 holds the newest copy
    for (const auto& [addr, expected] : oracle_.contents()) {
        auto it = overlay.find(addr);
        std::uint64_t got =
            it != overlay.end() ? it->second : ctrl_.memory().read(addr);
        if (got != expected)
            throw std::logic_error("pre-drain effective memory diverges from oracle");
    }
}

RunStats run_trace(const PolicyConfig& config, const std::vector<MemAccess>& trace,
                   RunOptions options, const std::string& run_id) {
    Simulation sim(config, options);
    sim.set_expected_accesses(trace.size());
    for (const MemAccess& a : trace) sim.step(a);
    if (options.check_oracle && !options.fault_drop_writebacks)
        sim.check_effective_memory();
    RunStats s = sim.finish();
    s.run_id = run_id;
    return s;
}

std::vector<RunStats> run_plan(const ExperimentPlan& plan, RunOptions options) {
    std::vector<RunStats> out;
    for (const auto& entry : plan.entries) {
        std::vector<MemAccess> trace;
        if (entry.spec)
            trace = generate(*entry.spec);
        else if (entry.trace_file)
            trace = read_trace(*entry.trace_file, entry.config.geometry.memory_lines);
        else
            throw std::invalid_argument("plan entry needs a trace spec or file");
        out.push_back(run_trace(entry.config, trace, options, entry.run_id));
    }
    return out;
}

ModeComparison compare_modes(const PolicyConfig& config,
                             const std::vector<MemAccess>& trace) {
    RunOptions opt;
    opt.run_channel = false;
    Simulation sim(config, opt);
    sim.set_expected_accesses(trace.size());
    for (const MemAccess& a : trace) sim.step(a);
    sim.finish();
    const auto& log = sim.controller().transfer_log();
    return {simulate_channel(log, ChannelMode::Shared),
            simulate_channel(log, ChannelMode::Dedicated)};
}

std::vector<RunStats> sweep_mdc_size(const PolicyConfig& config,
                                     const std::vector<MemAccess>& trace,
                                     const std::vector<std::uint32_t>& sizes,
                                     RunOptions options) {
    std::vector<RunStats> out;
    for (std::uint32_t size : sizes) {
        PolicyConfig c = config;
        c.metadata_cache_entries = size;
        out.push_back(run_trace(c, trace, options, "mdc" + std::to_string(size)));
    }
    return out;
}

}  // namespace hmsim
