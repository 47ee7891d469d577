#include <cstdio>

#include "hmsim/harness.hpp"

// Single-event cost-model scenarios, driven straight into the controller.
// Each check pins the exact per-operation transfer counts of the metadata
// organizations: hits cost one access, misses cost a probe only for in-line
// tags, out-of-line tags add their metadata-cache miss ratio, and the
// dirty-bit techniques (DCD, preemptive marking) shave the write path from
// four transfers to two without adding memory writebacks.

namespace hmsim {

namespace {

PolicyConfig micro_config(Organization org, bool dcd = false, bool pdm = false) {
    PolicyConfig c;
    c.organization = org;
    c.dcd_enabled = dcd;
    c.pdm_enabled = pdm;
    c.metadata_cache_entries = 4;
    c.geometry.cache_lines = 1024;
    c.geometry.memory_lines = 16384;
    c.geometry.metadata_region_lines = 16;
    c.l3_lines = 1024;
    c.l3_ways = 16;
    c.rng_seed = 7;
    return c;
}

LineAddr line_at(std::uint64_t set, std::uint64_t tag) { return tag * 1024 + set; }

constexpr std::uint64_t kPcDefault = 0x5000;  // fresh -> predicted hit
constexpr std::uint64_t kPcMiss = 0x5010;     // forced to predict miss
constexpr std::uint64_t kPcWriter = 0x5020;   // trained write-likely

struct Window {
    BandwidthLedger before;
    explicit Window(const CacheController& c) : before(c.ledger()) {}
    std::uint64_t diff(const CacheController& c, Category cat) const {
        return c.ledger().count(cat) - before.count(cat);
    }
    std::uint64_t total_diff(const CacheController& c) const {
        return c.ledger().total() - before.total();
    }
};

L3Event dirty_evict(LineAddr addr, bool dcp, bool dcd, std::uint64_t payload = 0xabc) {
    L3Event e;
    e.kind = L3EventKind::DirtyEviction;
    e.addr = addr;
    e.dcp = dcp;
    e.dcd = dcd;
    e.payload = payload;
    e.install_pc = kPcDefault;
    return e;
}

void flood_mdc(CacheController& c, unsigned groups, unsigned first_group) {
    for (unsigned g = 0; g < groups; ++g)
        c.on_demand_miss(line_at((first_group + g) * 64ull, 1), kPcDefault, false);
}

using CheckFn = void (*)(std::vector<ConformanceCheck>&);

void add(std::vector<ConformanceCheck>& out, const std::string& name, bool pass,
         const std::string& detail) {
    out.push_back({name, pass, detail});
}

std::uint64_t cache_side_cost(const Window& w, const CacheController& c) {
    return w.diff(c, Category::CacheHitRead) + w.diff(c, Category::MissProbe) +
           w.diff(c, Category::TocAccess) + w.diff(c, Category::TocUpdate) +
           w.diff(c, Category::DirtyBitUpdate);
}

void check_ideal_sram(std::vector<ConformanceCheck>& out) {
    CacheController c(micro_config(Organization::IdealSram));
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);  // install A

    Window hit(c);
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);
    add(out, "cost_model/ideal_sram_hit",
        hit.diff(c, Category::CacheHitRead) == 1 && hit.total_diff(c) == 1,
        "hit costs exactly 1 transfer");

    Window miss_clean(c);
    c.on_demand_miss(line_at(0, 2), kPcDefault, false);  // clean victim
    add(out, "cost_model/ideal_sram_miss_clean",
        cache_side_cost(miss_clean, c) == 0 &&
            miss_clean.diff(c, Category::XpointRead) == 1 &&
            miss_clean.diff(c, Category::Install) == 1,
        "miss over clean victim costs 0 cache-side transfers");

    c.on_dirty_eviction(dirty_evict(line_at(0, 2), true, false));  // dirty the line
    Window miss_dirty(c);
    c.on_demand_miss(line_at(0, 3), kPcDefault, false);
    add(out, "cost_model/ideal_sram_miss_dirty",
        cache_side_cost(miss_dirty, c) == 1 &&
            miss_dirty.diff(c, Category::MissProbe) == 1 &&
            miss_dirty.diff(c, Category::XpointWrite) == 1,
        "miss over dirty victim costs exactly 1 victim read");
}

void check_tic(std::vector<ConformanceCheck>& out) {
    CacheController c(micro_config(Organization::Tic));
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);

    Window hit(c);
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);
    add(out, "cost_model/tic_hit",
        hit.diff(c, Category::CacheHitRead) == 1 && hit.total_diff(c) == 1,
        "predicted hit costs 1 combined tag+data read");

    Window miss_clean(c);
    c.on_demand_miss(line_at(0, 2), kPcDefault, false);
    add(out, "cost_model/tic_miss_clean",
        miss_clean.diff(c, Category::MissProbe) == 1 && cache_side_cost(miss_clean, c) == 1,
        "miss over clean victim costs exactly 1 probe");

    c.on_dirty_eviction(dirty_evict(line_at(0, 2), true, false));
    Window miss_dirty(c);
    c.on_demand_miss(line_at(0, 3), kPcMiss, false);
    add(out, "cost_model/tic_miss_dirty",
        miss_dirty.diff(c, Category::MissProbe) == 1 &&
            cache_side_cost(miss_dirty, c) == 1 &&
            miss_dirty.diff(c, Category::XpointWrite) == 1,
        "probe doubles as the victim read on dirty eviction");
}

void check_toc(std::vector<ConformanceCheck>& out) {
    CacheController c(micro_config(Organization::Toc));
    c.hm_predictor().set_counter_for_test(kPcMiss, 0);

    Window cold(c);
    c.on_demand_miss(line_at(0, 1), kPcMiss, false);
    add(out, "cost_model/toc_miss_mdc_miss",
        cold.diff(c, Category::TocAccess) == 1 &&
            cold.diff(c, Category::MissProbe) == 0,
        "cold metadata miss adds exactly the metadata fetch");

    Window warm_hit(c);
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);
    add(out, "cost_model/toc_hit_mdc_hit",
        warm_hit.diff(c, Category::CacheHitRead) == 1 && warm_hit.total_diff(c) == 1,
        "hit with cached metadata costs 1 transfer");

    flood_mdc(c, 6, 2);
    Window forced(c);
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);
    add(out, "cost_model/toc_hit_mdc_miss",
        forced.diff(c, Category::TocAccess) == 1 &&
            forced.diff(c, Category::CacheHitRead) == 1,
        "hit after forced metadata-cache miss costs 1 + metadata fetch");

    Window warm_miss(c);
    c.on_demand_miss(line_at(0, 2), kPcMiss, false);
    add(out, "cost_model/toc_miss_mdc_hit",
        warm_miss.diff(c, Category::TocAccess) == 0 &&
            warm_miss.diff(c, Category::MissProbe) == 0,
        "miss with cached metadata needs no cache-side read");
}

void check_write_path(std::vector<ConformanceCheck>& out) {
    // Plain configuration: install, data write, and a dirty-bit
    // read-then-writeback; four transfers end to end.
    CacheController c(micro_config(Organization::TicToc));
    c.on_demand_miss(line_at(1, 1), kPcDefault, false);  // warms metadata group 0

    Window install(c);
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);
    bool install_ok = install.diff(c, Category::Install) == 1 &&
                      install.diff(c, Category::TocUpdate) == 0;

    flood_mdc(c, 5, 1);

    Window wb(c);
    c.on_dirty_eviction(dirty_evict(line_at(0, 1), true, false));
    bool wb_ok = wb.diff(c, Category::CacheWrite) == 1 &&
                 wb.diff(c, Category::DirtyBitUpdate) == 1;

    flood_mdc(c, 5, 6);  // pushes the re-dirtied metadata line back out

    std::uint64_t dbu = c.ledger().count(Category::DirtyBitUpdate);
    add(out, "write_path/tictoc_four_transfers",
        install_ok && wb_ok && dbu == 2,
        "install(1) + cache write(1) + dirty-bit read/writeback(2) = 4");

    // Preemptive marking with the dirtiness bit: the dirty state is set at
    // install time and the writeback skips metadata entirely.
    CacheController p(micro_config(Organization::TicToc, true, true));
    p.write_predictor().learn(kPcWriter, true);
    p.on_demand_miss(line_at(1, 1), kPcDefault, false);

    Window pinstall(p);
    FillResult fr = p.on_demand_miss(line_at(0, 1), kPcWriter, false);
    bool pinstall_ok = pinstall.diff(p, Category::Install) == 1 &&
                       pinstall.diff(p, Category::TocUpdate) == 0 && fr.dirty_in_l4;

    flood_mdc(p, 5, 1);

    Window pwb(p);
    p.on_dirty_eviction(dirty_evict(line_at(0, 1), true, true));
    bool pwb_ok = pwb.diff(p, Category::CacheWrite) == 1 &&
                  pwb.diff(p, Category::DirtyBitUpdate) == 0;

    add(out, "write_path/pdm_two_transfers",
        pinstall_ok && pwb_ok && p.ledger().count(Category::DirtyBitUpdate) == 0,
        "predicted-dirty install(1) + cache write(1) = 2, no dirty-bit traffic");
}

void check_install_path(std::vector<ConformanceCheck>& out) {
    CacheController c(micro_config(Organization::TicToc));
    c.hm_predictor().set_counter_for_test(kPcMiss, 0);
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);  // resident clean victim

    Window w(c);
    c.on_demand_miss(line_at(0, 2), kPcMiss, false);
    add(out, "install_path/tictoc_two_transfers",
        w.diff(c, Category::XpointRead) == 1 && w.diff(c, Category::Install) == 1 &&
            w.total_diff(c) == 2,
        "miss+install over clean victim = memory read + install");

    CacheController p(micro_config(Organization::TicToc, true, true));
    p.hm_predictor().set_counter_for_test(kPcMiss, 0);
    p.write_predictor().learn(kPcWriter, true);
    p.on_demand_miss(line_at(0, 1), kPcWriter, false);  // predicted-dirty victim

    Window pw(p);
    p.on_demand_miss(line_at(0, 2), kPcMiss, false);
    add(out, "install_path/pdm_false_dirty_three_transfers",
        pw.diff(p, Category::XpointRead) == 1 && pw.diff(p, Category::MissProbe) == 1 &&
            pw.diff(p, Category::Install) == 1 && pw.total_diff(p) == 3 &&
            pw.diff(p, Category::XpointWrite) == 0,
        "false predicted-dirty victim adds one read, never a memory writeback");
}

void check_dcd_repeat(std::vector<ConformanceCheck>& out) {
    CacheController c(micro_config(Organization::TicToc, true, false));
    c.on_demand_miss(line_at(0, 1), kPcDefault, false);
    c.on_dirty_eviction(dirty_evict(line_at(0, 1), true, false));  // first write
    FillResult fr = c.on_demand_miss(line_at(0, 1), kPcDefault, false);

    Window w(c);
    c.on_dirty_eviction(dirty_evict(line_at(0, 1), true, fr.dirty_in_l4));
    add(out, "write_path/dcd_skips_repeat_update",
        fr.dirty_in_l4 && w.diff(c, Category::CacheWrite) == 1 &&
            w.diff(c, Category::DirtyBitUpdate) == 0 && w.total_diff(c) == 1,
        "re-dirtied line with dirtiness bit set writes data only");
}

}  // namespace

std::vector<ConformanceCheck> run_conformance_suite() {
    std::vector<ConformanceCheck> out;
    check_ideal_sram(out);
    check_tic(out);
    check_toc(out);
    check_write_path(out);
    check_install_path(out);
    check_dcd_repeat(out);
    return out;
}

}  // namespace hmsim
